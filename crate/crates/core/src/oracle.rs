//! Exact solvers for the crisp LP.
//!
//! The feasible set is a box cut by a single budget hyperplane, so its
//! vertices have at most one coordinate strictly between its bounds. Filling
//! assets in order of decreasing coefficient reaches the optimal vertex.
//! [`brute_force`] enumerates a lattice of allocations as an independent
//! check on [`solve_exact`].

use crate::error::{Error, Result};
use crate::model::{dot, DeterministicLP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// The upper bounds cannot absorb the budget.
    BudgetInfeasible,
    /// The budget and box are satisfiable but the best return stays below
    /// the floor.
    ThresholdInfeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub threshold_satisfied: bool,
    pub status: SolveStatus,
}

impl ExactSolution {
    fn classify(lp: &DeterministicLP, x: Vec<f64>) -> Self {
        let objective = dot(&lp.coefficients, &x);
        let threshold_satisfied = objective >= lp.threshold;
        Self {
            x,
            objective,
            threshold_satisfied,
            status: if threshold_satisfied {
                SolveStatus::Optimal
            } else {
                SolveStatus::ThresholdInfeasible
            },
        }
    }

    fn budget_infeasible(lp: &DeterministicLP) -> Self {
        let x = lp.upper_bounds.clone();
        let objective = dot(&lp.coefficients, &x);
        Self {
            x,
            objective,
            threshold_satisfied: objective >= lp.threshold,
            status: SolveStatus::BudgetInfeasible,
        }
    }
}

fn budget_fits(lp: &DeterministicLP) -> bool {
    lp.upper_bounds.iter().sum::<f64>() >= lp.total_fund
}

/// Greedy fill by descending coefficient; ties go to the lower index.
pub fn solve_exact(lp: &DeterministicLP) -> ExactSolution {
    if !budget_fits(lp) {
        return ExactSolution::budget_infeasible(lp);
    }
    let mut order: Vec<usize> = (0..lp.n_assets()).collect();
    order.sort_by(|&i, &j| lp.coefficients[j].total_cmp(&lp.coefficients[i]).then(i.cmp(&j)));

    let mut x = vec![0.0; lp.n_assets()];
    let mut remaining = lp.total_fund;
    for j in order {
        if remaining <= 0.0 {
            break;
        }
        let take = lp.upper_bounds[j].min(remaining);
        x[j] = take;
        remaining -= take;
    }
    ExactSolution::classify(lp, x)
}

/// Largest number of assets [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_ASSETS: usize = 6;
/// Node budget of [`brute_force`].
pub const BRUTE_FORCE_NODE_LIMIT: u64 = 100_000_000;

/// Enumerates every allocation on the lattice `grid_step * Z^n` that spends
/// the budget exactly and returns the best one (first found on ties, in
/// lexicographic order of the allocation).
pub fn brute_force(lp: &DeterministicLP, grid_step: f64) -> Result<ExactSolution> {
    brute_force_limited(lp, grid_step, BRUTE_FORCE_NODE_LIMIT)
}

fn brute_force_limited(lp: &DeterministicLP, grid_step: f64, limit: u64) -> Result<ExactSolution> {
    let n = lp.n_assets();
    if n == 0 || n > BRUTE_FORCE_MAX_ASSETS {
        return Err(Error::Invalid {
            what: "brute force".into(),
            reason: format!("supports 1..={BRUTE_FORCE_MAX_ASSETS} assets, got {n}"),
        });
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::Domain {
            what: "grid_step",
            value: grid_step,
            domain: "(0, inf)",
        });
    }
    if !budget_fits(lp) {
        return Ok(ExactSolution::budget_infeasible(lp));
    }
    let units = |v: f64, what: &str| -> Result<u64> {
        let k = (v / grid_step).round();
        if (k * grid_step - v).abs() > 1e-9 * v.abs().max(1.0) {
            return Err(Error::Invalid {
                what: "brute force".into(),
                reason: format!("grid step {grid_step} does not divide {what} = {v}"),
            });
        }
        Ok(k as u64)
    };
    let caps = lp
        .upper_bounds
        .iter()
        .map(|&u| units(u, "upper bound"))
        .collect::<Result<Vec<_>>>()?;
    let budget = units(lp.total_fund, "total fund")?;

    // suffix[j] = capacity of assets j.. in lattice units
    let mut suffix = vec![0u64; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1] + caps[j];
    }

    let mut search = Search {
        lp,
        caps: &caps,
        suffix: &suffix,
        step: grid_step,
        current: vec![0; n],
        best: None,
        nodes: 0,
        limit,
    };
    search.descend(0, budget)?;
    let best = search.best.expect("feasible lattice point exists when capacity covers budget");
    let x = best.1.iter().map(|&k| k as f64 * grid_step).collect();
    Ok(ExactSolution::classify(lp, x))
}

struct Search<'a> {
    lp: &'a DeterministicLP,
    caps: &'a [u64],
    suffix: &'a [u64],
    step: f64,
    current: Vec<u64>,
    best: Option<(f64, Vec<u64>)>,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn descend(&mut self, j: usize, left: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::EnumerationLimit(self.nodes));
        }
        let n = self.caps.len();
        if j == n {
            if left == 0 {
                let value: f64 = self
                    .current
                    .iter()
                    .zip(&self.lp.coefficients)
                    .map(|(&k, c)| c * (k as f64 * self.step))
                    .sum();
                if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                    self.best = Some((value, self.current.clone()));
                }
            }
            return Ok(());
        }
        let lo = left.saturating_sub(self.suffix[j + 1]);
        let hi = self.caps[j].min(left);
        for k in lo..=hi {
            self.current[j] = k;
            self.descend(j + 1, left - k)?;
        }
        self.current[j] = 0;
        Ok(())
    }
}
