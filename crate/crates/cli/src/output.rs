//! Text, CSV and JSON rendering. CSV files start with a header row, quote
//! partitions and print floats with 17 significant digits.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{json, Value};

use snchar::bench::BenchRecord;
use snchar::character_engine::CharacterRow;
use snchar::combinatorics::Partition;
use snchar::verify::VerifyReport;
use snchar::KostkaRow;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

pub struct Entry {
    pub lambda: Partition,
    pub value: i64,
    pub residual: f64,
}

/// One conjugacy class worth of characters, from either engine.
pub struct Table {
    pub nu: Partition,
    pub entries: Vec<Entry>,
    pub norm_residual: f64,
    /// `None` for the exact recursion, which has no bond dimension.
    pub max_bond: Option<usize>,
}

impl Table {
    pub fn from_row(row: &CharacterRow) -> Self {
        Table {
            nu: row.nu.clone(),
            entries: row
                .entries
                .iter()
                .map(|(lambda, r)| Entry {
                    lambda: lambda.clone(),
                    value: r.value,
                    residual: r.residual,
                })
                .collect(),
            norm_residual: row.norm_residual,
            max_bond: Some(row.max_bond),
        }
    }

    pub fn exact(nu: Partition, entries: Vec<Entry>, centralizer: &BigUint) -> Self {
        let sum: BigUint = entries
            .iter()
            .map(|e| BigUint::from(e.value.unsigned_abs()).pow(2))
            .sum();
        let norm_residual = if &sum == centralizer { 0.0 } else { f64::INFINITY };
        Table {
            nu,
            entries,
            norm_residual,
            max_bond: None,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.nu.size(),
            "nu": self.nu.to_string(),
            "entries": self.entries.iter().map(|e| json!({
                "lambda": e.lambda.to_string(),
                "value": e.value,
                "residual": e.residual,
            })).collect::<Vec<_>>(),
            "norm_residual": self.norm_residual,
            "max_bond": self.max_bond,
        })
    }
}

fn quoted(p: &Partition) -> String {
    format!("\"{p}\"")
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// A single row renders as one JSON object; a table as `{"n", "rows"}`.
pub fn render_characters(tables: &[Table], format: TableFormat, as_table: bool) -> String {
    match format {
        TableFormat::Json if as_table => pretty(&json!({
            "n": tables.first().map(|t| t.nu.size()),
            "rows": tables.iter().map(Table::to_json).collect::<Vec<_>>(),
        })),
        TableFormat::Json => tables.iter().map(|t| pretty(&t.to_json())).collect(),
        TableFormat::Csv => {
            let mut out = String::from("nu,lambda,character,residual,norm_residual,max_bond\n");
            for t in tables {
                let bond = t.max_bond.map(|b| b.to_string()).unwrap_or_default();
                for e in &t.entries {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{bond}",
                        quoted(&t.nu),
                        quoted(&e.lambda),
                        e.value,
                        float(e.residual),
                        float(t.norm_residual)
                    );
                }
            }
            out
        }
    }
}

pub fn render_kostka(row: &KostkaRow, format: TableFormat) -> String {
    match format {
        TableFormat::Json => pretty(&json!({
            "n": row.n,
            "mu": row.mu.to_string(),
            "entries": row.entries.iter().map(|(l, r)| json!({
                "lambda": l.to_string(),
                "value": r.value,
                "residual": r.residual,
            })).collect::<Vec<_>>(),
            "max_bond": row.max_bond,
        })),
        TableFormat::Csv => {
            let mut out = String::from("mu,lambda,kostka,residual,max_bond\n");
            for (l, r) in &row.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    quoted(&row.mu),
                    quoted(l),
                    r.value,
                    float(r.residual),
                    row.max_bond
                );
            }
            out
        }
    }
}

pub fn render_samples(labels: &[Partition], as_json: bool) -> String {
    if as_json {
        pretty(&Value::from(labels.iter().map(|l| l.to_string()).collect::<Vec<_>>()))
    } else {
        labels.iter().map(|l| format!("{l}\n")).collect()
    }
}

pub fn render_verify(report: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict} {} n={}: {}", c.name, c.n, c.detail);
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", report.checks.len());
    out
}

pub fn render_bench(records: &[BenchRecord]) -> String {
    let mut out = format!("{}\n", BenchRecord::CSV_HEADER);
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
