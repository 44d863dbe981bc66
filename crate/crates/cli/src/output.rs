//! Plot-ready records and the human-readable table. Every real number is
//! printed with six fractional digits so that output files are stable.

use std::io::Write;

use hil_core::{PolicyKind, Report64};

/// Column order of the machine-readable record stream.
pub const COLUMNS: [&str; 11] = [
    "policy",
    "beta",
    "eta",
    "epsilon",
    "lambda_min",
    "avg_cost",
    "avg_regret",
    "stderr_cost",
    "offload_rate",
    "error_rate",
    "bound_avg",
];

/// One (policy, beta) result row.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub policy: PolicyKind,
    pub beta: f64,
    pub eta: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda_min: f64,
    pub report: Report64,
}

pub fn fixed6(v: f64) -> String {
    format!("{v:.6}")
}

fn optional(v: Option<f64>) -> String {
    v.map(fixed6).unwrap_or_default()
}

impl Record {
    pub fn fields(&self) -> [String; 11] {
        let r = &self.report;
        [
            self.policy.to_string(),
            fixed6(self.beta),
            optional(self.eta),
            optional(self.epsilon),
            fixed6(self.lambda_min),
            fixed6(r.avg_cost),
            fixed6(r.avg_regret),
            fixed6(r.stderr_cost),
            fixed6(r.offload_rate()),
            fixed6(r.error_rate()),
            optional(r.bound.map(|b| b.regret_bound_average)),
        ]
    }
}

pub fn write_records<W: Write>(out: W, records: &[Record]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `round,cumulative_regret` rows.
pub fn write_curve<W: Write>(out: W, curve: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["round", "cumulative_regret"])?;
    for (t, v) in curve.iter().enumerate() {
        w.write_record([(t + 1).to_string(), fixed6(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Aligned table: the record columns plus mean offload and error counts.
pub fn write_table<W: Write>(mut out: W, records: &[Record]) -> std::io::Result<()> {
    let mut rows: Vec<Vec<String>> = vec![COLUMNS
        .iter()
        .map(|c| c.to_string())
        .chain(["offloaded".into(), "misclassified".into(), "intervals".into()])
        .collect()];
    for r in records {
        let mut row = r.fields().to_vec();
        row.push(format!("{:.2}", r.report.offloaded_mean));
        row.push(format!("{:.2}", r.report.misclassified_mean));
        row.push(r.report.interval_count_max.to_string());
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|c| rows.iter().map(|row| row[c].len()).max().unwrap_or(0)).collect();
    for row in &rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}
