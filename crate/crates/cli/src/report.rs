//! Result records and the three output encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use phi_core::LogCombination;
use rug::Float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogTerm {
    pub coeff: i64,
    pub prime: u64,
}

/// One table entry. Reals are decimal strings so no digits are lost in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Text(String),
    Exact(Vec<LogTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ToleranceFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, Cell>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, Cell>,
    pub status: Status,
}

/// Significant decimal digits carried by `bits` binary digits.
pub fn digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

impl Cell {
    pub fn real(x: &Float, bits: u32) -> Cell {
        if x.is_zero() {
            return Cell::Text("0".into());
        }
        Cell::Text(x.to_string_radix(10, Some(digits(bits))))
    }

    pub fn exact(l: &LogCombination) -> Cell {
        Cell::Exact(l.terms().map(|(prime, coeff)| LogTerm { coeff, prime }).collect())
    }

    pub fn opt_int(x: Option<u64>) -> Cell {
        x.map_or(Cell::Null, |v| Cell::Int(v as i64))
    }

    fn plain(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Exact(ts) if ts.is_empty() => "0".into(),
            Cell::Exact(ts) => ts.iter().map(|t| format!("{}*log({})", t.coeff, t.prime)).collect::<Vec<_>>().join(" + "),
        }
    }
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.into(),
            config: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            status: Status::Ok,
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Header, rows, then summary entries as `# key,value` lines.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        let esc = |s: String| if s.contains([',', '"']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s };
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| esc(c.plain())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k},{}", esc(v.plain()));
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "  {k} = {}", v.plain());
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()).collect();
            let mut width: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
            for r in &cells {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |r: &[String]| r.iter().zip(&width).map(|(c, &w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string();
            let _ = writeln!(out, "{}", line(&self.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k}: {}", v.plain());
        }
        let _ = writeln!(out, "status: {}", if self.status == Status::Ok { "ok" } else { "tolerance failure" });
        out
    }
}
