use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Human-readable `key: value` lines and aligned tables.
    Text,
    /// One `key=value` pair per line; table rows as space-separated pairs.
    Kv,
}

/// Ordered key/value output, optionally followed by table rows.
#[derive(Default)]
pub struct Report {
    fields: Vec<(String, String)>,
    rows: Vec<Vec<(String, String)>>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<(&str, String)>) {
        self.rows.push(cells.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Kv => {
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k}={v}");
                }
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
            OutputFormat::Text => {
                let pad = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{:<pad$}  {v}", format!("{k}:"), pad = pad + 1);
                }
                if let Some(first) = self.rows.first() {
                    let widths: Vec<usize> = (0..first.len())
                        .map(|i| {
                            self.rows
                                .iter()
                                .map(|r| r.get(i).map_or(0, |(_, v)| v.len()))
                                .chain(std::iter::once(first[i].0.len()))
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |cells: Vec<&str>| {
                        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                        parts.join("  ").trim_end().to_string()
                    };
                    let _ = writeln!(out, "{}", line(first.iter().map(|(k, _)| k.as_str()).collect()));
                    for row in &self.rows {
                        let _ = writeln!(out, "{}", line(row.iter().map(|(_, v)| v.as_str()).collect()));
                    }
                }
            }
        }
        out
    }
}
