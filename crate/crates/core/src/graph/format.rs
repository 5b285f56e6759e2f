//! Text formats: edge lists, graph6, and operation traces.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{Graph, GraphOp, OpTrace};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// First line `n`, then one `u v` pair per line.
    EdgeList,
    /// Standard 6-bit printable encoding, at most 62 vertices.
    Graph6,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(GraphFormat::EdgeList),
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            other => Err(parse_err(0, format!("unknown graph format `{other}`"))),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Content lines with 1-based line numbers; blank lines and `#` comments skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Graph6 => {
            let mut lines = content_lines(text);
            let (line, body) = lines.next().ok_or_else(|| parse_err(1, "empty graph6 input"))?;
            if let Some((extra, _)) = lines.next() {
                return Err(parse_err(extra, "graph6 input must hold a single graph"));
            }
            graph6::decode(body).map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(line, message),
                other => other,
            })
        }
    }
}

pub fn serialize_graph(g: &Graph, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::EdgeList => {
            let mut out = format!("{}\n", g.n());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
            Ok(out)
        }
        GraphFormat::Graph6 => Ok(format!("{}\n", graph6::encode(g)?)),
    }
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| parse_err(1, "missing vertex count"))?;
    let n = parse_usize(first, line)?;
    let mut g = Graph::empty(n);
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(line, format!("expected `u v`, found `{l}`")));
        }
        let u = parse_usize(toks[0], line)?;
        let v = parse_usize(toks[1], line)?;
        if u >= n || v >= n {
            return Err(parse_err(line, format!("edge {u} {v} out of range for n={n}")));
        }
        if u == v {
            return Err(parse_err(line, format!("self-loop at {u}")));
        }
        g.set_edge(u, v, true);
    }
    Ok(g)
}

pub mod graph6 {
    use super::{parse_err, Graph};
    use crate::error::{Error, Result};

    pub const MAX_N: usize = 62;

    pub fn encode(g: &Graph) -> Result<String> {
        let n = g.n();
        if n > MAX_N {
            return Err(Error::GuardExceeded { what: "graph6", n, max: MAX_N });
        }
        let mut out = String::new();
        out.push((n as u8 + 63) as char);
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | g.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((acc << (6 - filled)) + 63) as char);
        }
        Ok(out)
    }

    pub fn decode(s: &str) -> Result<Graph> {
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(parse_err(1, format!("byte {i} is outside the graph6 range")));
            }
        }
        let (&first, rest) = bytes.split_first().ok_or_else(|| parse_err(1, "empty graph6 string"))?;
        let n = (first - 63) as usize;
        if n > MAX_N {
            return Err(parse_err(1, "graph6 size prefix above 62 is not supported"));
        }
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        if rest.len() != expected {
            return Err(parse_err(1, format!("expected {expected} data bytes for n={n}, found {}", rest.len())));
        }
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = rest[k / 6] - 63;
                if (byte >> (5 - k % 6)) & 1 == 1 {
                    g.set_edge(i, j, true);
                }
                k += 1;
            }
        }
        Ok(g)
    }
}

pub fn serialize_trace(t: &OpTrace) -> String {
    let mut out = format!("TRACE n={} s={}\n", t.target_n(), t.deletions());
    for op in &t.ops {
        let _ = writeln!(out, "{op}");
    }
    out
}

pub fn parse_trace(text: &str) -> Result<OpTrace> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing TRACE header"))?;
    let (n, s) = parse_trace_header(header, line)?;
    let initial = n + s;
    let mut trace = OpTrace::new(initial);
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let arity = match toks[0] {
            "LC" | "DEL" => 1,
            "EC1" | "EC2" | "EC3" => 2,
            other => return Err(parse_err(line, format!("unknown operation `{other}`"))),
        };
        if toks.len() != arity + 1 {
            return Err(parse_err(line, format!("`{}` takes {arity} vertex argument(s)", toks[0])));
        }
        let a = parse_usize(toks[1], line)?;
        let b = if arity == 2 { parse_usize(toks[2], line)? } else { 0 };
        if a >= initial || b >= initial {
            return Err(parse_err(line, format!("vertex out of range for {initial} initial vertices")));
        }
        trace.push(match toks[0] {
            "LC" => GraphOp::Lc(a),
            "DEL" => GraphOp::Delete(a),
            "EC1" => GraphOp::Ec1(a, b),
            "EC2" => GraphOp::Ec2(a, b),
            _ => GraphOp::Ec3(a, b),
        });
    }
    if trace.deletions() != s {
        return Err(parse_err(line, format!("header declares s={s} but the trace deletes {}", trace.deletions())));
    }
    Ok(trace)
}

fn parse_trace_header(header: &str, line: usize) -> Result<(usize, usize)> {
    let mut toks = header.split_whitespace();
    if toks.next() != Some("TRACE") {
        return Err(parse_err(line, "expected `TRACE n=<count> s=<count>`"));
    }
    let mut n = None;
    let mut s = None;
    for tok in toks {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(parse_usize(v, line)?),
            Some(("s", v)) => s = Some(parse_usize(v, line)?),
            _ => return Err(parse_err(line, format!("unexpected header field `{tok}`"))),
        }
    }
    match (n, s) {
        (Some(n), Some(s)) => Ok((n, s)),
        (Some(n), None) => Ok((n, 0)),
        _ => Err(parse_err(line, "header is missing n=<count>")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_examples() {
        let g = parse_graph("3\n0 1\n1 2", GraphFormat::EdgeList).unwrap();
        assert_eq!(g, Graph::path(3));
        let single = parse_graph("1\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(single, Graph::empty(1));
        let text = serialize_graph(&g, GraphFormat::EdgeList).unwrap();
        assert_eq!(text, "3\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_diagnostics() {
        let err = parse_graph("3\n0 1\n1 x\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_graph("2\n0 2\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_graph("", GraphFormat::EdgeList).is_err());
    }

    #[test]
    fn graph6_known_strings() {
        // reference encodings produced by nauty's conventions
        assert_eq!(graph6::encode(&Graph::empty(0)).unwrap(), "?");
        assert_eq!(graph6::encode(&Graph::complete(2)).unwrap(), "A_");
        assert_eq!(graph6::encode(&Graph::complete(4)).unwrap(), "C~");
        assert_eq!(graph6::encode(&Graph::cycle(5)).unwrap(), "Dhc");
        assert_eq!(graph6::encode(&Graph::path(5)).unwrap(), "DhC");
    }

    #[test]
    fn graph6_round_trips_every_four_vertex_graph() {
        for mask in 0u32..64 {
            let mut g = Graph::empty(4);
            let mut k = 0;
            for u in 0..4 {
                for v in u + 1..4 {
                    if mask >> k & 1 == 1 {
                        g.set_edge(u, v, true);
                    }
                    k += 1;
                }
            }
            let s = serialize_graph(&g, GraphFormat::Graph6).unwrap();
            assert!(s.starts_with('C'));
            assert_eq!(parse_graph(&s, GraphFormat::Graph6).unwrap(), g);
        }
    }

    #[test]
    fn graph6_rejects_bad_input() {
        assert!(graph6::decode("C").is_err());
        assert!(graph6::decode("C~~").is_err());
        assert!(graph6::decode("C\u{7f}").is_err());
        assert!(graph6::encode(&Graph::empty(63)).is_err());
    }

    #[test]
    fn trace_round_trip() {
        let t = OpTrace {
            initial: 4,
            ops: vec![GraphOp::Lc(3), GraphOp::Ec1(0, 3), GraphOp::Ec2(1, 0), GraphOp::Ec3(2, 1), GraphOp::Delete(3)],
        };
        let text = serialize_trace(&t);
        assert!(text.starts_with("TRACE n=3 s=1\n"));
        assert_eq!(parse_trace(&text).unwrap(), t);
    }

    #[test]
    fn trace_diagnostics() {
        assert!(matches!(parse_trace("TRACE n=2 s=0\nEC4 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_trace("TRACE n=2 s=0\nEC1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_trace("TRACE n=2 s=0\nEC1 0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_trace("TRACE n=2 s=1\nEC1 0 1\n").is_err());
        assert!(parse_trace("EC1 0 1\n").is_err());
    }
}
