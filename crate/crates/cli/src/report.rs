//! Report rendering. CSV is the machine format; tables are derived from the
//! same rows.

use crate::sweep::{ReproductionReport, Solver, SweepReport, SweepRow};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 11] = [
    "lambda",
    "eta",
    "solver",
    "seed",
    "objective",
    "oracle_objective",
    "relative_gap",
    "threshold",
    "threshold_satisfied",
    "budget_residual",
    "allocation",
];

fn allocation_field(x: &[f64]) -> String {
    x.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

pub fn to_csv(rows: &[SweepRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.lambda.to_string(),
            r.eta.to_string(),
            r.solver.name().to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.objective.to_string(),
            r.oracle_objective.to_string(),
            r.relative_gap.to_string(),
            r.threshold.to_string(),
            r.threshold_satisfied.to_string(),
            r.budget_residual.to_string(),
            allocation_field(&r.allocation),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn fmt_alloc(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.2}")).collect();
    format!("({})", parts.join(", "))
}

fn floor_flag(ok: bool) -> &'static str {
    if ok {
        "met"
    } else {
        "VIOLATED"
    }
}

pub fn sweep_table(report: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>6} {:>6} {:>6} {:>5} {:>11} {:>11} {:>8} {:>10} {:>9}  allocation",
        "lambda", "eta", "solver", "seed", "objective", "oracle", "gap %", "floor", "floor?"
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>6} {:>5} {:>11.4} {:>11.4} {:>8.4} {:>10.4} {:>9}  {}",
            r.lambda,
            r.eta,
            r.solver.name(),
            r.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
            r.objective,
            r.oracle_objective,
            100.0 * r.relative_gap,
            r.threshold,
            floor_flag(r.threshold_satisfied),
            fmt_alloc(&r.allocation),
        );
    }
    if !report.summaries.is_empty() {
        let _ = writeln!(out, "\nsearch statistics over seeds");
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>5} {:>11} {:>11} {:>11} {:>11} {:>9} {:>9}",
            "lambda", "eta", "seeds", "min", "median", "max", "oracle", "med gap%", "best gap%"
        );
        for s in &report.summaries {
            let _ = writeln!(
                out,
                "{:>6} {:>6} {:>5} {:>11.4} {:>11.4} {:>11.4} {:>11.4} {:>9.4} {:>9.4}",
                s.lambda,
                s.eta,
                s.seeds,
                s.min_objective,
                s.median_objective,
                s.max_objective,
                s.oracle_objective,
                100.0 * s.median_gap,
                100.0 * s.best_gap,
            );
        }
    }
    out
}

pub fn reproduction_table(report: &ReproductionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "exact optimum vs published figures");
    let _ = writeln!(
        out,
        "{:>6} {:>34} {:>34} {:>10} {:>10} {:>8} {:>9}",
        "level", "published allocation", "exact allocation", "published", "exact", "dev %", "floor?"
    );
    for c in &report.comparisons {
        let _ = writeln!(
            out,
            "{:>6} {:>34} {:>34} {:>10.2} {:>10.4} {:>8.3} {:>9}{}",
            c.level,
            fmt_alloc(&c.published_allocation),
            fmt_alloc(&c.exact_allocation),
            c.published_objective,
            c.exact_objective,
            100.0 * c.relative_deviation,
            floor_flag(c.threshold_satisfied),
            if c.allocation_matches { "" } else { "  allocation differs" },
        );
    }
    let _ = writeln!(out);
    let only_summaries = SweepReport {
        rows: report
            .sweep
            .rows
            .iter()
            .filter(|r| r.solver == Solver::Exact)
            .cloned()
            .collect(),
        summaries: report.sweep.summaries.clone(),
    };
    out.push_str(&sweep_table(&only_summaries));
    out
}
