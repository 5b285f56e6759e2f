//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use ecsynth::bounds::{generic_upper, reroute_degree_bound};
use ecsynth::codes::{code_from_graph, codewords, min_distance, mind_bound};
use ecsynth::gen::{random_connected_graph, random_graph, random_tree, random_word};
use ecsynth::graph::lc_orbit;
use ecsynth::oracle::exact_ec;
use ecsynth::rankwidth::{cutrank, exact_rankwidth, DependentSet};
use ecsynth::synthesis::{certify, grow_vertex, isolate, synth, Strategy, SynthOptions};
use ecsynth::tableau::{check_graph_state, simulate, trace_to_circuit, GraphStateCheck, MeasurePolicy};
use ecsynth::words::{
    circle_cost_bound, circle_graph, containment_graph, interval_graph, synth_circle_detailed, synth_containment,
    synth_interval, DOWord,
};
use ecsynth::{replay, Graph, GraphOp, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

/// Outcome of one criterion: `Err` carries the first counterexample.
type Check = Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn cli_kv(args: &[&str]) -> Result<BTreeMap<String, String>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ecsynth"))
        .args(["--format", "kv"])
        .args(args)
        .output()
        .map_err(|e| format!("cannot run ecsynth: {e}"))?;
    if !out.status.success() {
        return Err(format!("ecsynth {args:?} exited with {}", out.status));
    }
    Ok(String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let mut g = Graph::empty(n);
        for (k, &(u, v)) in pairs.iter().enumerate() {
            g.set_edge(u, v, mask >> k & 1 == 1);
        }
        g
    })
}

fn oracle_table() -> Check {
    let expected = [0, 1, 2, 3, 5, 7];
    let mut n6 = Duration::ZERO;
    for (k, &want) in (1..=6).zip(&expected) {
        let start = Instant::now();
        let kv = cli_kv(&["oracle", "--n", &k.to_string()])?;
        if k == 6 {
            n6 = start.elapsed();
        }
        let got = kv.get("max").ok_or("missing max")?;
        ensure(*got == want.to_string(), || format!("n={k}: max {got}, expected {want}"))?;
    }
    ensure(n6 <= Duration::from_secs(600), || format!("n=6 took {n6:?}"))?;
    Ok(format!("maxima 0,1,2,3,5,7; n=6 in {:.1}s", n6.as_secs_f64()))
}

fn clifford_classes() -> Check {
    let kv = cli_kv(&["clifford", "classify"])?;
    let want = [
        ("class_a", "36"),
        ("class_b", "324"),
        ("class_c", "324"),
        ("class_d", "36"),
        ("total", "720"),
        ("round_trips", "720"),
    ];
    for (k, v) in want {
        let got = kv.get(k).map(String::as_str);
        ensure(got == Some(v), || format!("{k} = {got:?}, expected {v}"))?;
    }
    Ok("36/324/324/36, total 720, all round-trip with <=1 CZ and <=1 SWAP".into())
}

fn cycles() -> Check {
    for (n, want) in [(3, 2), (4, 3), (5, 5), (6, 6)] {
        let got = exact_ec(&Graph::cycle(n)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("C{n}: {got}, expected {want}"))?;
    }
    Ok("C3=2 C4=3 C5=5 C6=6".into())
}

fn word_corpus(count: usize, max_n: usize, stream: u64) -> Vec<DOWord> {
    let mut r = rng(stream);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            random_word(n, &mut r)
        })
        .collect()
}

fn interval_words() -> Check {
    let start = Instant::now();
    for m in word_corpus(200, 200, 4) {
        let n = m.n();
        let res = synth_interval(&m).map_err(|e| e.to_string())?;
        ensure(res.cost == 2 * n - 2, || format!("n={n}: cost {}", res.cost))?;
        let g = replay(&res.trace).map_err(|e| e.to_string())?;
        ensure(g == interval_graph(&m), || format!("replay differs for {m}"))?;
    }
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("200 words, cost 2n-2, replay equal, {:.1}s", t.as_secs_f64()))
}

fn circle_words(corpus: &[DOWord]) -> Check {
    let start = Instant::now();
    let mut worst_degree = 0;
    for m in corpus {
        let n = m.n();
        let d = synth_circle_detailed(m).map_err(|e| e.to_string())?;
        let res = &d.result;
        ensure(res.cost <= circle_cost_bound(n), || format!("n={n}: cost {} > {}", res.cost, circle_cost_bound(n)))?;
        let g = replay(&res.trace).map_err(|e| e.to_string())?;
        ensure(g == circle_graph(m), || format!("replay differs for {m}"))?;
        for (&deg, &k) in d.reroute_degrees.iter().zip(&d.step_sizes) {
            ensure(deg <= reroute_degree_bound(k), || format!("step with {k} letters: degree {deg}"))?;
            worst_degree = worst_degree.max(deg);
        }
    }
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("100 words, cost and degree bounds hold (max degree {worst_degree}), {:.1}s", t.as_secs_f64()))
}

fn containment_words(corpus: &[DOWord]) -> Check {
    for m in corpus {
        let n = m.n();
        let ci = synth_interval(m).map_err(|e| e.to_string())?.cost;
        let cc = synth_circle_detailed(m).map_err(|e| e.to_string())?.result.cost;
        let res = synth_containment(m).map_err(|e| e.to_string())?;
        ensure(res.cost == ci + cc + n, || format!("n={n}: {} != {ci}+{cc}+{n}", res.cost))?;
        let target = containment_graph(m);
        ensure(target == interval_graph(m).symmetric_difference(&circle_graph(m)), || {
            format!("not interval xor circle for {m}")
        })?;
        ensure(replay(&res.trace).map_err(|e| e.to_string())? == target, || format!("replay differs for {m}"))?;
    }
    Ok("100 words, cost = interval + circle + n, replay equal".into())
}

fn rw(g: &Graph) -> Result<usize, String> {
    exact_rankwidth(g).map(|(r, _)| r).map_err(|e| e.to_string())
}

fn rankwidth_truths() -> Check {
    let mut connected = 0;
    for g in all_graphs(4) {
        let r = rw(&g)?;
        ensure(r <= 1, || format!("{g:?}: rank-width {r}"))?;
        if g.is_connected() {
            connected += 1;
            ensure(r == 1, || format!("{g:?}: rank-width {r}"))?;
        }
    }
    ensure(rw(&Graph::cycle(4))? == 1, || "C4".into())?;
    ensure(rw(&Graph::cycle(5))? == 2, || "C5".into())?;
    let mut r = rng(7);
    for n in 2..=13 {
        for _ in 0..10 {
            let t = random_tree(n, &mut r);
            ensure(rw(&t)? == 1, || format!("tree {t:?}"))?;
        }
    }
    Ok(format!("all 64 four-vertex graphs (connected {connected}) rw 1, C4=1, C5=2, 120 trees rw 1"))
}

fn lower_bound_certificates() -> Check {
    let mut r = rng(8);
    for _ in 0..500 {
        let n = r.gen_range(2..=13);
        let p = r.gen_range(0.05..0.6);
        let g = random_connected_graph(n, p, &mut r);
        let res = synth(&g, SynthOptions::default()).map_err(|e| e.to_string())?;
        let cert = certify(&g, &res).map_err(|e| format!("n={n}: {e}"))?;
        let bound = n + rw(&g)? - 2;
        ensure(cert.lower == Some(bound) && res.cost >= bound, || format!("n={n}: cost {} bound {bound}", res.cost))?;
    }
    Ok("500 connected graphs, cost >= n + rw - 2".into())
}

fn trees() -> Check {
    let mut r = rng(9);
    for _ in 0..100 {
        let n = r.gen_range(1..=50);
        let t = random_tree(n, &mut r);
        let res = synth(&t, SynthOptions::default()).map_err(|e| e.to_string())?;
        ensure(res.cost == n.saturating_sub(1), || format!("n={n}: cost {}", res.cost))?;
        ensure(replay(&res.trace).map_err(|e| e.to_string())? == t, || "replay differs".into())?;
    }
    Ok("100 trees, cost n-1".into())
}

fn generic_bound() -> Check {
    let mut r = rng(10);
    let opts = SynthOptions::with_strategy(Strategy::CodeGuided);
    for (count, max_n) in [(1000, 7), (500, 14)] {
        for _ in 0..count {
            let n = r.gen_range(1..=max_n);
            let g = random_graph(n, r.gen_range(0.1..0.9), &mut r);
            let res = synth(&g, opts).map_err(|e| e.to_string())?;
            let bound: Ratio = generic_upper(n);
            ensure(Ratio::from_integer(res.cost as i64) <= bound, || format!("n={n}: cost {} > {bound}", res.cost))?;
            ensure(replay(&res.trace).map_err(|e| e.to_string())? == g, || "replay differs".into())?;
        }
    }
    Ok("1000 graphs n<=7 and 500 graphs n<=14 within (n-1)(n+4)/6".into())
}

fn random_set(n: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).filter(|_| r.gen_bool(0.5)).collect()
}

fn random_pair(n: usize, r: &mut ChaCha8Rng) -> (usize, usize) {
    let v = r.gen_range(0..n);
    (v, (v + r.gen_range(1..n)) % n)
}

fn property_suites() -> Check {
    const CASES: usize = 1000;
    let mut r = rng(11);
    let cr = |g: &Graph, s: &[usize]| cutrank(g, s).map_err(|e| e.to_string());
    for _ in 0..CASES {
        let n = r.gen_range(2..=12);
        let g = random_graph(n, 0.5, &mut r);
        let s = random_set(n, &mut r);
        let v = r.gen_range(0..n);
        let h = g.local_complement(v).map_err(|e| e.to_string())?;
        ensure(cr(&g, &s)? == cr(&h, &s)?, || format!("LC invariance: {g:?} S={s:?} v={v}"))?;
    }
    for _ in 0..CASES {
        let n = r.gen_range(2..=12);
        let g = random_graph(n, 0.5, &mut r);
        let s = random_set(n, &mut r);
        let (v, w) = random_pair(n, &mut r);
        let op = match r.gen_range(0..3) {
            0 => GraphOp::Ec1(v, w),
            1 => GraphOp::Ec2(v, w),
            _ if !g.has_edge(v, w) => GraphOp::Ec3(v, w),
            _ => GraphOp::Ec2(w, v),
        };
        let before = cr(&g, &s)? as i64;
        let after = cr(&g.apply_op(op).map_err(|e| e.to_string())?, &s)? as i64;
        let same = s.contains(&v) == s.contains(&w);
        ensure(if same { before == after } else { (before - after).abs() <= 1 }, || format!("{op} on {g:?} S={s:?}"))?;
    }
    for _ in 0..CASES {
        let n = r.gen_range(2..=12);
        let g = random_graph(n, 0.5, &mut r);
        let mut s = random_set(n, &mut r);
        let mut u = r.gen_range(0..n);
        while DependentSet::from_vertices(&g, &s).is_none() {
            if !s.contains(&u) {
                s.push(u);
            }
            u = (u + 1) % n;
        }
        let dep = DependentSet::from_vertices(&g, &s).expect("loop ends on a dependent set");
        let grow = grow_vertex(&g, &dep).map_err(|e| e.to_string())?;
        let mut h = isolate(&g, grow.vertex);
        for op in &grow.ops {
            h.apply_op_mut(*op).map_err(|e| e.to_string())?;
        }
        ensure(h == g && grow.cost < dep.len(), || format!("grow on {g:?} S={s:?}"))?;
    }
    for _ in 0..CASES {
        let n = r.gen_range(1..=12);
        let m = random_word(n, &mut r);
        let v = r.gen_range(0..n);
        let lhs = circle_graph(&m.reverse_between(v).map_err(|e| e.to_string())?);
        let rhs = circle_graph(&m).local_complement(v).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("reversal at {v} of {m}"))?;
    }
    for n in 1..=5 {
        for g in all_graphs(n) {
            let supports: Vec<u64> =
                codewords(&code_from_graph(&g)).map_err(|e| e.to_string())?.map(|w| w.x | w.z).collect();
            for mask in 1u64..1 << n {
                let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let dependent = cr(&g, &s)? < s.len();
                let covered = supports.iter().any(|&sup| sup & !mask == 0);
                ensure(dependent == covered, || format!("codeword equivalence: {g:?} S={s:?}"))?;
            }
        }
    }
    for _ in 0..CASES {
        let n = r.gen_range(1..=12);
        let g = random_graph(n, r.gen_range(0.1..0.9), &mut r);
        let d = min_distance(&code_from_graph(&g)).map_err(|e| e.to_string())?;
        ensure(d <= mind_bound(n), || format!("min distance {d} on {g:?}"))?;
    }
    for n in 1..=6 {
        let mut seen: HashSet<Graph> = HashSet::new();
        for g in all_graphs(n) {
            if seen.contains(&g) {
                continue;
            }
            let orbit = lc_orbit(&g).map_err(|e| e.to_string())?;
            let min_deg = orbit.iter().filter_map(Graph::min_degree).min().unwrap_or(0);
            for h in &orbit {
                let d = min_distance(&code_from_graph(h)).map_err(|e| e.to_string())?;
                ensure(d == 1 + min_deg, || format!("orbit degree: {h:?}"))?;
            }
            seen.extend(orbit);
        }
    }
    Ok(format!("7 suites, {CASES} random cases each or exhaustive"))
}

fn end_to_end() -> Check {
    let mut r = rng(12);
    let mut corrected = 0;
    let mut up_to_pauli = 0;
    for i in 0..100u64 {
        let n = r.gen_range(1..=10);
        let g = random_graph(n, r.gen_range(0.2..0.8), &mut r);
        let res = synth(&g, SynthOptions::default()).map_err(|e| e.to_string())?;
        let circuit = trace_to_circuit(&res.trace).map_err(|e| e.to_string())?;
        let sim = simulate(&circuit, &mut MeasurePolicy::seeded(SEED + i)).map_err(|e| e.to_string())?;
        let check = check_graph_state(&sim.tableau, &g);
        ensure(check.is_match(), || format!("mismatch on {g:?}"))?;
        if let GraphStateCheck::UpToPauli { correction } = check {
            up_to_pauli += 1;
            if corrected < 20 {
                let mut t = sim.tableau.clone();
                t.apply_pauli(&correction).map_err(|e| e.to_string())?;
                ensure(check_graph_state(&t, &g) == GraphStateCheck::Exact, || format!("correction fails on {g:?}"))?;
                corrected += 1;
            }
        }
    }
    ensure(corrected == 20, || format!("only {corrected} outcomes needed a sign correction"))?;
    Ok(format!("100 graphs match ({up_to_pauli} up to Pauli), {corrected} exact after correction"))
}

fn main() {
    let circle_corpus = word_corpus(100, 100, 5);
    let criteria: Vec<Criterion> = vec![
        ("oracle table", Box::new(oracle_table)),
        ("two-qubit Clifford classes", Box::new(clifford_classes)),
        ("cycle complexities", Box::new(cycles)),
        ("interval synthesis", Box::new(interval_words)),
        ("circle synthesis", Box::new(|| circle_words(&circle_corpus))),
        ("containment synthesis", Box::new(|| containment_words(&circle_corpus))),
        ("rank-width ground truths", Box::new(rankwidth_truths)),
        ("lower-bound certificates", Box::new(lower_bound_certificates)),
        ("tree synthesis", Box::new(trees)),
        ("generic upper bound", Box::new(generic_bound)),
        ("property suites", Box::new(property_suites)),
        ("circuit verification", Box::new(end_to_end)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
