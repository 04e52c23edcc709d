//! Level sweeps over the exact solver and the competitive search.

use fuzzport_core::{
    reformulate, run, solve_exact, ConfidenceLevels, IcaConfig, PenaltyConfig, PortfolioInstance,
    SolveStatus,
};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Exact,
    Ica,
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Ica => "ica",
        }
    }
}

/// One solved `(lambda, eta)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub eta: f64,
    pub solver: Solver,
    pub seed: Option<u64>,
    pub allocation: Vec<f64>,
    pub objective: f64,
    pub oracle_objective: f64,
    /// `(oracle - objective) / |oracle|`.
    pub relative_gap: f64,
    pub threshold: f64,
    pub threshold_satisfied: bool,
    pub budget_residual: f64,
}

/// Seed statistics of the search at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSummary {
    pub lambda: f64,
    pub eta: f64,
    pub seeds: usize,
    pub min_objective: f64,
    pub median_objective: f64,
    pub max_objective: f64,
    pub oracle_objective: f64,
    pub median_gap: f64,
    pub best_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<LevelSummary>,
}

impl SweepReport {
    /// Whether every row meets its return floor.
    pub fn all_thresholds_met(&self) -> bool {
        self.rows.iter().all(|r| r.threshold_satisfied)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub levels: Vec<ConfidenceLevels>,
    pub solver: Solver,
    pub seeds: Vec<u64>,
    pub ica: IcaConfig,
    pub penalty: PenaltyConfig,
}

fn gap(oracle: f64, value: f64) -> f64 {
    if oracle == 0.0 {
        oracle - value
    } else {
        (oracle - value) / oracle.abs()
    }
}

pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn solve_level(
    instance: &PortfolioInstance,
    levels: ConfidenceLevels,
    solvers: &[Solver],
    cfg: &SweepConfig,
) -> fuzzport_core::Result<Vec<SweepRow>> {
    let lp = reformulate(instance, levels)?;
    let exact = solve_exact(&lp);
    if exact.status == SolveStatus::BudgetInfeasible {
        return Err(fuzzport_core::Error::BudgetInfeasible {
            total_fund: lp.total_fund,
            bound_sum: lp.upper_bounds.iter().sum(),
        });
    }
    let mut rows = Vec::new();
    if solvers.contains(&Solver::Exact) {
        rows.push(SweepRow {
            lambda: levels.lambda(),
            eta: levels.eta(),
            solver: Solver::Exact,
            seed: None,
            objective: exact.objective,
            oracle_objective: exact.objective,
            relative_gap: 0.0,
            threshold: lp.threshold,
            threshold_satisfied: exact.threshold_satisfied,
            budget_residual: exact.x.iter().sum::<f64>() - lp.total_fund,
            allocation: exact.x.clone(),
        });
    }
    if solvers.contains(&Solver::Ica) {
        let runs = cfg
            .seeds
            .par_iter()
            .map(|&seed| run(&lp, &cfg.penalty, &cfg.ica.with_seed(seed)))
            .collect::<Result<Vec<_>, _>>()?;
        for (report, &seed) in runs.into_iter().zip(&cfg.seeds) {
            rows.push(SweepRow {
                lambda: levels.lambda(),
                eta: levels.eta(),
                solver: Solver::Ica,
                seed: Some(seed),
                objective: report.best_objective,
                oracle_objective: exact.objective,
                relative_gap: gap(exact.objective, report.best_objective),
                threshold: lp.threshold,
                threshold_satisfied: report.residuals.threshold_residual >= 0.0,
                budget_residual: report.residuals.budget_residual,
                allocation: report.best_position,
            });
        }
    }
    Ok(rows)
}

fn summarize(rows: &[SweepRow]) -> Vec<LevelSummary> {
    let mut out: Vec<LevelSummary> = Vec::new();
    let ica: Vec<&SweepRow> = rows.iter().filter(|r| r.solver == Solver::Ica).collect();
    for chunk in ica.chunk_by(|a, b| a.lambda == b.lambda && a.eta == b.eta) {
        let mut values: Vec<f64> = chunk.iter().map(|r| r.objective).collect();
        values.sort_by(f64::total_cmp);
        let oracle = chunk[0].oracle_objective;
        let med = median(&values);
        let best = values[values.len() - 1];
        out.push(LevelSummary {
            lambda: chunk[0].lambda,
            eta: chunk[0].eta,
            seeds: values.len(),
            min_objective: values[0],
            median_objective: med,
            max_objective: best,
            oracle_objective: oracle,
            median_gap: gap(oracle, med),
            best_gap: gap(oracle, best),
        });
    }
    out
}

fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.eta.total_cmp(&b.eta))
            .then((a.solver == Solver::Ica).cmp(&(b.solver == Solver::Ica)))
            .then(a.seed.cmp(&b.seed))
    });
}

fn sweep(
    instance: &PortfolioInstance,
    cfg: &SweepConfig,
    solvers: &[Solver],
) -> fuzzport_core::Result<SweepReport> {
    let per_level = cfg
        .levels
        .par_iter()
        .map(|&lv| solve_level(instance, lv, solvers, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<SweepRow> = per_level.into_iter().flatten().collect();
    sort_rows(&mut rows);
    let summaries = summarize(&rows);
    Ok(SweepReport { rows, summaries })
}

/// Solves every level with the configured solver. Search rows always carry
/// the exact optimum for comparison.
pub fn solve_command(
    instance: &PortfolioInstance,
    cfg: &SweepConfig,
) -> fuzzport_core::Result<SweepReport> {
    sweep(instance, cfg, &[cfg.solver])
}

/// Levels and published allocations / objective values of the reference
/// four-level study on the bundled fixture.
pub const PUBLISHED_LEVELS: [f64; 4] = [0.1, 0.4, 0.7, 0.9];
pub const PUBLISHED_ALLOCATIONS: [[f64; 5]; 4] = [
    [60.0, 0.0, 20.0, 60.0, 60.0],
    [20.0, 0.0, 60.0, 60.0, 60.0],
    [20.0, 0.0, 60.0, 60.0, 60.0],
    [0.0, 60.0, 60.0, 20.0, 60.0],
];
pub const PUBLISHED_OBJECTIVES: [f64; 4] = [422.54, 289.3, 187.48, 95.56];

/// Deviation of one exact row from the published figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedComparison {
    pub level: f64,
    pub published_allocation: Vec<f64>,
    pub published_objective: f64,
    pub exact_allocation: Vec<f64>,
    pub exact_objective: f64,
    pub allocation_matches: bool,
    pub relative_deviation: f64,
    pub threshold_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub sweep: SweepReport,
    pub comparisons: Vec<PublishedComparison>,
}

/// Runs exact and search solvers side by side at the four published levels.
pub fn reproduce(
    instance: &PortfolioInstance,
    seeds: Vec<u64>,
    ica: IcaConfig,
    penalty: PenaltyConfig,
) -> fuzzport_core::Result<ReproductionReport> {
    let cfg = SweepConfig {
        levels: PUBLISHED_LEVELS
            .iter()
            .map(|&l| ConfidenceLevels::coupled(l))
            .collect::<Result<_, _>>()?,
        solver: Solver::Ica,
        seeds,
        ica,
        penalty,
    };
    let sweep = sweep(instance, &cfg, &[Solver::Exact, Solver::Ica])?;
    let comparisons = PUBLISHED_LEVELS
        .iter()
        .zip(PUBLISHED_ALLOCATIONS)
        .zip(PUBLISHED_OBJECTIVES)
        .filter_map(|((&level, alloc), ofv)| {
            let row = sweep
                .rows
                .iter()
                .find(|r| r.solver == Solver::Exact && r.lambda == level)?;
            Some(PublishedComparison {
                level,
                published_allocation: alloc.to_vec(),
                published_objective: ofv,
                exact_allocation: row.allocation.clone(),
                exact_objective: row.objective,
                allocation_matches: row.allocation == alloc,
                relative_deviation: (row.objective - ofv) / ofv,
                threshold_satisfied: row.threshold_satisfied,
            })
        })
        .collect();
    Ok(ReproductionReport { sweep, comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(solver: Solver, levels: &[f64], seeds: Vec<u64>) -> SweepConfig {
        SweepConfig {
            levels: levels.iter().map(|&l| ConfidenceLevels::coupled(l).unwrap()).collect(),
            solver,
            seeds,
            ica: IcaConfig::default(),
            penalty: PenaltyConfig::default(),
        }
    }

    #[test]
    fn exact_single_level() {
        let inst = PortfolioInstance::five_asset_example();
        let rep = solve_command(&inst, &cfg(Solver::Exact, &[0.1], vec![])).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(rep.rows[0].allocation, vec![60.0, 0.0, 20.0, 60.0, 60.0]);
        assert!(rep.summaries.is_empty());
    }

    #[test]
    fn threshold_flag_at_high_level() {
        let inst = PortfolioInstance::five_asset_example();
        let rep = solve_command(&inst, &cfg(Solver::Exact, &[0.7], vec![])).unwrap();
        assert!(!rep.rows[0].threshold_satisfied);
        assert!(!rep.all_thresholds_met());
    }

    #[test]
    fn search_rows_carry_oracle() {
        let inst = PortfolioInstance::five_asset_example();
        let rep = solve_command(&inst, &cfg(Solver::Ica, &[0.4, 0.1], vec![3, 1, 2])).unwrap();
        assert_eq!(rep.rows.len(), 6);
        assert_eq!(rep.rows[0].lambda, 0.1);
        let seeds: Vec<Option<u64>> = rep.rows.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, [1, 2, 3, 1, 2, 3].map(Some).to_vec());
        for r in &rep.rows {
            assert!(r.objective <= r.oracle_objective + 1e-9);
        }
        assert_eq!(rep.summaries.len(), 2);
        assert_eq!(rep.summaries[0].seeds, 3);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[1.0, 2.0, 3.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 3.0, 5.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn reproduction_compares_every_level() {
        let inst = PortfolioInstance::five_asset_example();
        let rep = reproduce(&inst, vec![7], IcaConfig::default(), PenaltyConfig::default()).unwrap();
        assert_eq!(rep.comparisons.len(), 4);
        assert!(rep.comparisons.iter().all(|c| c.allocation_matches));
        assert_eq!(rep.sweep.rows.len(), 8);
    }
}
