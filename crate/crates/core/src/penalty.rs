//! Exterior penalty handling for the budget equality and the return floor,
//! plus a deterministic projection onto the budget simplex slice.

use crate::error::{check_len, Error, Result};
use crate::model::{dot, DeterministicLP};

/// Penalty factors and exponents.
///
/// The penalized objective (maximization) is
/// `c.x - [ineq_factor * max(0, threshold - c.x)^ineq_exponent
///        + eq_factor * |sum x - M0|^eq_exponent]`,
/// with the return-floor term only when `enforce_threshold` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub eq_factor: f64,
    pub ineq_factor: f64,
    pub eq_exponent: f64,
    pub ineq_exponent: f64,
    pub enforce_threshold: bool,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            eq_factor: 1e3,
            ineq_factor: 1e3,
            eq_exponent: 2.0,
            ineq_exponent: 2.0,
            enforce_threshold: false,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [("eq_factor", self.eq_factor), ("ineq_factor", self.ineq_factor)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain {
                    what,
                    value: v,
                    domain: "(0, inf)",
                });
            }
        }
        for (what, v) in [("eq_exponent", self.eq_exponent), ("ineq_exponent", self.ineq_exponent)] {
            if v != 1.0 && v != 2.0 {
                return Err(Error::Domain {
                    what,
                    value: v,
                    domain: "{1, 2}",
                });
            }
        }
        Ok(())
    }
}

/// The penalized objective of `x`. Box bounds are not penalized.
pub fn penalized_objective(lp: &DeterministicLP, x: &[f64], cfg: &PenaltyConfig) -> f64 {
    let value = dot(&lp.coefficients, x);
    let budget_gap = (x.iter().sum::<f64>() - lp.total_fund).abs();
    let mut penalty = if budget_gap > 0.0 {
        cfg.eq_factor * budget_gap.powf(cfg.eq_exponent)
    } else {
        0.0
    };
    if cfg.enforce_threshold {
        let shortfall = lp.threshold - value;
        if shortfall > 0.0 {
            penalty += cfg.ineq_factor * shortfall.powf(cfg.ineq_exponent);
        }
    }
    value - penalty
}

/// Projects `x` onto `{ sum x = m0, 0 <= x <= upper }`.
///
/// Coordinates are clamped to the box, then a deficit is spread in
/// proportion to each coordinate's remaining headroom and a surplus is
/// withdrawn in proportion to current holdings. Points already within
/// `1e-9 * m0` of the budget are returned unchanged after clamping, so the
/// map is idempotent.
pub fn repair(x: &[f64], m0: f64, upper: &[f64]) -> Result<Vec<f64>> {
    check_len("upper bounds", x.len(), upper.len())?;
    let bound_sum: f64 = upper.iter().sum();
    if bound_sum < m0 {
        return Err(Error::BudgetInfeasible {
            total_fund: m0,
            bound_sum,
        });
    }
    let mut out: Vec<f64> = x
        .iter()
        .zip(upper)
        .map(|(&v, &u)| if v.is_nan() { 0.0 } else { v.clamp(0.0, u) })
        .collect();
    let tol = 1e-9 * m0.abs();
    for _ in 0..64 {
        let gap = m0 - out.iter().sum::<f64>();
        if gap.abs() <= tol {
            return Ok(out);
        }
        if gap > 0.0 {
            let headroom: f64 = out.iter().zip(upper).map(|(v, u)| u - v).sum();
            let gap = gap.min(headroom);
            for (v, &u) in out.iter_mut().zip(upper) {
                *v = (*v + gap * (u - *v) / headroom).min(u);
            }
        } else {
            let mass: f64 = out.iter().sum();
            let kept = (mass + gap).max(0.0);
            for v in out.iter_mut() {
                *v = *v * kept / mass;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{reformulate, ConfidenceLevels, PortfolioInstance};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn lp(level: f64) -> DeterministicLP {
        reformulate(
            &PortfolioInstance::five_asset_example(),
            ConfidenceLevels::coupled(level).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn feasible_point_is_unpenalized() {
        let lp = lp(0.1);
        let x = [60.0, 0.0, 20.0, 60.0, 60.0];
        let cfg = PenaltyConfig {
            enforce_threshold: true,
            ..Default::default()
        };
        assert_eq!(penalized_objective(&lp, &x, &cfg), lp.objective(&x).unwrap());
    }

    #[test]
    fn unit_budget_gap() {
        // The 0.9 LP cannot reach its floor; the floor term must stay out
        // unless enforced.
        let lp = lp(0.9);
        let x = [0.0, 60.0, 60.0, 21.0, 60.0];
        let cfg = PenaltyConfig::default();
        let value = lp.objective(&x).unwrap();
        assert_abs_diff_eq!(penalized_objective(&lp, &x, &cfg), value - 1000.0, epsilon = 1e-9);

        let enforced = PenaltyConfig {
            enforce_threshold: true,
            ..cfg
        };
        let shortfall = lp.threshold - value;
        assert_abs_diff_eq!(
            penalized_objective(&lp, &x, &enforced),
            value - 1000.0 - 1000.0 * shortfall * shortfall,
            epsilon = 1e-6
        );
    }

    #[test]
    fn empty_portfolio_penalty() {
        let lp = lp(0.1);
        let cfg = PenaltyConfig::default();
        assert_abs_diff_eq!(penalized_objective(&lp, &[0.0; 5], &cfg), -4e7, epsilon = 1e-6);
    }

    #[test]
    fn linear_exponents() {
        let lp = lp(0.5);
        let cfg = PenaltyConfig {
            eq_exponent: 1.0,
            eq_factor: 10.0,
            ..Default::default()
        };
        let x = [40.0, 40.0, 40.0, 40.0, 37.0];
        let value = lp.objective(&x).unwrap();
        assert_abs_diff_eq!(penalized_objective(&lp, &x, &cfg), value - 30.0, epsilon = 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(PenaltyConfig::default().validate().is_ok());
        let bad = PenaltyConfig {
            eq_exponent: 3.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PenaltyConfig {
            ineq_factor: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn repair_examples() {
        let u = [60.0; 5];
        let x = [60.0, 0.0, 20.0, 60.0, 60.0];
        assert_eq!(repair(&x, 200.0, &u).unwrap(), x.to_vec());
        assert_eq!(repair(&[100.0; 5], 200.0, &u).unwrap(), vec![40.0; 5]);
        assert_eq!(repair(&[0.0; 5], 200.0, &u).unwrap(), vec![40.0; 5]);
        assert!(matches!(
            repair(&[0.0; 3], 200.0, &[60.0; 3]),
            Err(Error::BudgetInfeasible { .. })
        ));
    }

    #[test]
    fn repair_fills_by_headroom() {
        let out = repair(&[50.0, 10.0, 0.0], 100.0, &[60.0, 60.0, 60.0]).unwrap();
        // deficit 40 over headroom (10, 50, 60)
        assert_abs_diff_eq!(out[0], 50.0 + 40.0 * 10.0 / 120.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1], 10.0 + 40.0 * 50.0 / 120.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[2], 40.0 * 60.0 / 120.0, epsilon = 1e-12);
    }

    #[test]
    fn penalty_dominance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(2..6);
            let lp = DeterministicLP {
                coefficients: (0..n).map(|_| rng.random_range(-2.0..3.0)).collect(),
                total_fund: 100.0,
                upper_bounds: vec![60.0; n],
                threshold: 0.0,
                levels: ConfidenceLevels::coupled(0.5).unwrap(),
            };
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..60.0)).collect();
            let y = repair(&raw, 100.0, &lp.upper_bounds).unwrap();
            let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..60.0)).collect();
            let sx: f64 = x.iter().sum();
            if (sx - 100.0).abs() < 1.0 {
                x[0] = (x[0] + 5.0).min(60.0);
                if (x.iter().sum::<f64>() - 100.0).abs() < 1.0 {
                    continue;
                }
            }
            let mut cfg = PenaltyConfig {
                eq_factor: 1e-6,
                ..Default::default()
            };
            let mut flipped = false;
            for _ in 0..200 {
                if penalized_objective(&lp, &y, &cfg) > penalized_objective(&lp, &x, &cfg) {
                    flipped = true;
                    break;
                }
                cfg.eq_factor *= 2.0;
            }
            assert!(flipped, "no finite factor separated {x:?} from {y:?}");
        }
    }

    proptest! {
        #[test]
        fn repair_is_feasible_and_idempotent(
            parts in prop::collection::vec((-50.0..150.0f64, 1.0..100.0f64), 1..8),
            frac in 0.01..1.0f64,
        ) {
            let x: Vec<f64> = parts.iter().map(|p| p.0).collect();
            let u: Vec<f64> = parts.iter().map(|p| p.1).collect();
            let m0 = frac * u.iter().sum::<f64>();
            let once = repair(&x, m0, &u).unwrap();
            for (v, b) in once.iter().zip(&u) {
                prop_assert!(*v >= 0.0 && *v <= *b);
            }
            prop_assert!((once.iter().sum::<f64>() - m0).abs() <= 1e-9 * m0);
            let twice = repair(&once, m0, &u).unwrap();
            let bits = |v: &[f64]| v.iter().map(|f| f.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&once), bits(&twice));
        }
    }
}
