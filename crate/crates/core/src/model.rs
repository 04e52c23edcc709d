//! Portfolio instances and their reduction to a crisp linear program.
//!
//! The chance constraints `Pr{ N(Z(t) >= f) >= eta } >= lambda` become the
//! linear inequality `c . x >= f` with per-asset coefficients
//!
//! ```text
//! c_j = r0_j + T*(1 - lambda) * r2_j - L*(1 - eta) * beta_j
//! ```
//!
//! where `T*` is the factor quantile and `L*` the pseudo-inverse of the left
//! reference function. The return floor against the target becomes
//! `c . x >= r0_0 + T*(1 - lambda) * r2_0 - beta_0 * L*(1 - eta)`.

use crate::error::{check_len, Error, Result};
use crate::fuzzy::{weighted_sum, FuzzyRandomReturn, LRFuzzyNumber, ReferenceFunction};
use crate::necessity::necessity_geq_scalar;
use crate::normal::RandomFactor;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// A fuzzy random portfolio selection problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioInstance {
    assets: Vec<FuzzyRandomReturn>,
    target: FuzzyRandomReturn,
    total_fund: f64,
    upper_bounds: Vec<f64>,
    factor: RandomFactor,
}

impl PortfolioInstance {
    pub fn new(
        assets: Vec<FuzzyRandomReturn>,
        target: FuzzyRandomReturn,
        total_fund: f64,
        upper_bounds: Vec<f64>,
        factor: RandomFactor,
    ) -> Result<Self> {
        if assets.is_empty() {
            return Err(Error::Invalid {
                what: "portfolio instance".into(),
                reason: "at least one asset is required".into(),
            });
        }
        check_len("upper_bounds", assets.len(), upper_bounds.len())?;
        if !(total_fund.is_finite() && total_fund > 0.0) {
            return Err(Error::Domain {
                what: "total_fund",
                value: total_fund,
                domain: "(0, inf)",
            });
        }
        if let Some(&u) = upper_bounds.iter().find(|u| !(u.is_finite() && **u > 0.0)) {
            return Err(Error::Domain {
                what: "upper bound",
                value: u,
                domain: "(0, inf)",
            });
        }
        let bound_sum: f64 = upper_bounds.iter().sum();
        if bound_sum < total_fund {
            return Err(Error::BudgetInfeasible {
                total_fund,
                bound_sum,
            });
        }
        Ok(Self {
            assets,
            target,
            total_fund,
            upper_bounds,
            factor,
        })
    }

    pub fn assets(&self) -> &[FuzzyRandomReturn] {
        &self.assets
    }

    pub fn target(&self) -> &FuzzyRandomReturn {
        &self.target
    }

    pub fn total_fund(&self) -> f64 {
        self.total_fund
    }

    pub fn upper_bounds(&self) -> &[f64] {
        &self.upper_bounds
    }

    pub fn factor(&self) -> &RandomFactor {
        &self.factor
    }

    pub fn n_assets(&self) -> usize {
        self.assets.len()
    }

    /// Five risky assets with a budget of 200, per-asset caps of 60, a
    /// standard normal factor and a target of `200 * (1.25 + 0.25 t, 0.2)`.
    pub fn five_asset_example() -> Self {
        let rows = [
            (1.3, 1.45, 0.6, 0.2, 0.2),
            (1.2, 1.25, 0.5, 0.15, 0.15),
            (1.35, 1.4, 0.5, 0.15, 0.15),
            (1.4, 1.5, 0.6, 0.25, 0.25),
            (1.45, 1.6, 0.6, 0.25, 0.25),
        ];
        let assets = rows
            .iter()
            .map(|&(r0, r1, r2, b, g)| FuzzyRandomReturn::new(r0, r1, r2, b, g).unwrap())
            .collect();
        let target = FuzzyRandomReturn::new(250.0, 250.0, 50.0, 40.0, 40.0).unwrap();
        Self::new(assets, target, 200.0, vec![60.0; 5], RandomFactor::STANDARD).unwrap()
    }
}

/// Probability level `lambda` and necessity level `eta`, both in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConfidenceLevels {
    lambda: f64,
    eta: f64,
}

impl ConfidenceLevels {
    pub fn new(lambda: f64, eta: f64) -> Result<Self> {
        for (what, v) in [("lambda", lambda), ("eta", eta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain {
                    what,
                    value: v,
                    domain: "(0, 1)",
                });
            }
        }
        Ok(Self { lambda, eta })
    }

    /// `lambda = eta = level`.
    pub fn coupled(level: f64) -> Result<Self> {
        Self::new(level, level)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// The crisp problem: maximize `c . x` subject to `sum x = M0`,
/// `0 <= x <= U`, and `c . x >= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicLP {
    pub coefficients: Vec<f64>,
    pub total_fund: f64,
    pub upper_bounds: Vec<f64>,
    pub threshold: f64,
    pub levels: ConfidenceLevels,
}

impl DeterministicLP {
    pub fn n_assets(&self) -> usize {
        self.coefficients.len()
    }

    /// `c . x`. This is also the left-hand side of the return floor.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        check_len("allocation", self.coefficients.len(), x.len())?;
        Ok(dot(&self.coefficients, x))
    }

    pub fn residuals(&self, x: &[f64], tol: &Tolerances) -> Result<ResidualReport> {
        let value = self.objective(x)?;
        let budget_residual = x.iter().sum::<f64>() - self.total_fund;
        let threshold_residual = value - self.threshold;
        let bound_violations: Vec<f64> = x
            .iter()
            .zip(&self.upper_bounds)
            .map(|(&xi, &u)| (xi - u).max(-xi).max(0.0))
            .collect();
        let feasible = budget_residual.abs() <= tol.equality
            && threshold_residual >= -tol.inequality
            && bound_violations.iter().all(|&v| v <= tol.bounds);
        Ok(ResidualReport {
            budget_residual,
            threshold_residual,
            bound_violations,
            feasible,
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduces `instance` at `levels` to its crisp LP using linear left shoulders.
pub fn reformulate(instance: &PortfolioInstance, levels: ConfidenceLevels) -> Result<DeterministicLP> {
    reformulate_with(instance, levels, ReferenceFunction::Linear)
}

/// As [`reformulate`], with an explicit left reference function.
pub fn reformulate_with(
    instance: &PortfolioInstance,
    levels: ConfidenceLevels,
    left_ref: ReferenceFunction,
) -> Result<DeterministicLP> {
    let t_star = instance.factor.quantile(1.0 - levels.lambda)?;
    let l_star = left_ref.pseudo_inverse(1.0 - levels.eta)?;
    let crisp = |r: &FuzzyRandomReturn| r.r0() + t_star * r.r2() - l_star * r.beta();
    Ok(DeterministicLP {
        coefficients: instance.assets.iter().map(crisp).collect(),
        total_fund: instance.total_fund,
        upper_bounds: instance.upper_bounds.clone(),
        threshold: crisp(&instance.target),
        levels,
    })
}

/// `c . x`.
pub fn objective(lp: &DeterministicLP, x: &[f64]) -> Result<f64> {
    lp.objective(x)
}

/// Feasibility tolerances for [`residuals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub equality: f64,
    pub inequality: f64,
    pub bounds: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-6,
            inequality: 1e-9,
            bounds: 1e-9,
        }
    }
}

/// Constraint residuals of an allocation.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ResidualReport {
    /// `sum x - M0`.
    pub budget_residual: f64,
    /// `c . x - threshold`; nonnegative when the return floor holds.
    pub threshold_residual: f64,
    /// Per-asset distance outside `[0, U_j]`.
    pub bound_violations: Vec<f64>,
    pub feasible: bool,
}

pub fn residuals(lp: &DeterministicLP, x: &[f64], tol: &Tolerances) -> Result<ResidualReport> {
    lp.residuals(x, tol)
}

/// Outcome of [`necessity_certificate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateRecord {
    /// The level `f` that was tested.
    pub level: f64,
    /// Fraction of draws with `N(Z(t) >= f) >= eta`.
    pub probability: f64,
    /// Binomial standard error of `probability` at the target `lambda`.
    pub std_error: f64,
    pub samples: usize,
    pub lambda: f64,
    /// `probability >= lambda`.
    pub meets_level: bool,
}

/// Monte Carlo estimate of `Pr{ N(Z(t) >= f) >= eta }` for the portfolio
/// return `Z(t) = sum_j R_j(t) x_j`, drawing `t` from the instance factor.
///
/// Used to check the crisp reduction empirically, not to solve.
pub fn necessity_certificate<R: Rng + ?Sized>(
    instance: &PortfolioInstance,
    levels: ConfidenceLevels,
    x: &[f64],
    f: f64,
    samples: usize,
    rng: &mut R,
) -> Result<CertificateRecord> {
    check_len("allocation", instance.n_assets(), x.len())?;
    let samples = samples.max(1);
    let normal = Normal::new(instance.factor.mean(), instance.factor.std_dev())
        .expect("factor parameters are validated");
    let mut hits = 0usize;
    let mut observed: Vec<LRFuzzyNumber> = Vec::with_capacity(x.len());
    for _ in 0..samples {
        let t = normal.sample(rng);
        observed.clear();
        observed.extend(instance.assets.iter().map(|a| a.observe(t)));
        let z = weighted_sum(&observed, x)?;
        if necessity_geq_scalar(&z, f) >= levels.eta {
            hits += 1;
        }
    }
    let probability = hits as f64 / samples as f64;
    let lambda = levels.lambda;
    Ok(CertificateRecord {
        level: f,
        probability,
        std_error: (lambda * (1.0 - lambda) / samples as f64).sqrt(),
        samples,
        lambda,
        meets_level: probability >= lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // T*(0.9) and L*(0.9) for the closed-form expectations below.
    const Q90: f64 = 1.2815515655446004;

    fn closed_form(level: f64, q: f64) -> (Vec<f64>, f64) {
        let inst = PortfolioInstance::five_asset_example();
        // L*(1 - eta) = eta for the linear reference.
        let l_star = level;
        let c = inst
            .assets()
            .iter()
            .map(|a| a.r0() + q * a.r2() - l_star * a.beta())
            .collect();
        (c, 250.0 + q * 50.0 - 40.0 * l_star)
    }

    #[test]
    fn reformulate_low_levels() {
        let inst = PortfolioInstance::five_asset_example();
        let lp = reformulate(&inst, ConfidenceLevels::coupled(0.1).unwrap()).unwrap();
        let expected = [2.0490, 1.8258, 1.9758, 2.1440, 2.1940];
        for (c, e) in lp.coefficients.iter().zip(expected) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-4);
        }
        assert_abs_diff_eq!(lp.threshold, 310.08, epsilon = 1e-2);
        let (c, thr) = closed_form(0.1, Q90);
        for (a, b) in lp.coefficients.iter().zip(c) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(lp.threshold, thr, epsilon = 1e-10);
    }

    #[test]
    fn reformulate_midpoint_drops_quantile() {
        let inst = PortfolioInstance::five_asset_example();
        let lp = reformulate(&inst, ConfidenceLevels::coupled(0.5).unwrap()).unwrap();
        let expected = [1.2, 1.125, 1.275, 1.275, 1.325];
        for (c, e) in lp.coefficients.iter().zip(expected) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn reformulate_high_levels() {
        let inst = PortfolioInstance::five_asset_example();
        let lp = reformulate(&inst, ConfidenceLevels::coupled(0.9).unwrap()).unwrap();
        let expected = [0.3510, 0.4242, 0.5742, 0.4060, 0.4560];
        for (c, e) in lp.coefficients.iter().zip(expected) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-4);
        }
        assert_abs_diff_eq!(lp.threshold, 149.92, epsilon = 1e-2);
    }

    #[test]
    fn reformulate_is_deterministic() {
        let inst = PortfolioInstance::five_asset_example();
        let lv = ConfidenceLevels::new(0.37, 0.61).unwrap();
        let a = reformulate(&inst, lv).unwrap();
        let b = reformulate(&inst, lv).unwrap();
        let bits = |lp: &DeterministicLP| lp.coefficients.iter().map(|c| c.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a.threshold.to_bits(), b.threshold.to_bits());
    }

    #[test]
    fn objective_examples() {
        let inst = PortfolioInstance::five_asset_example();
        let lp = reformulate(&inst, ConfidenceLevels::coupled(0.1).unwrap()).unwrap();
        assert_eq!(lp.objective(&[0.0; 5]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            lp.objective(&[60.0, 0.0, 20.0, 60.0, 60.0]).unwrap(),
            422.7,
            epsilon = 0.1
        );
        let lp9 = reformulate(&inst, ConfidenceLevels::coupled(0.9).unwrap()).unwrap();
        assert_abs_diff_eq!(
            objective(&lp9, &[0.0, 60.0, 60.0, 20.0, 60.0]).unwrap(),
            95.4,
            epsilon = 0.1
        );
        assert!(lp.objective(&[1.0]).is_err());
    }

    #[test]
    fn residual_examples() {
        let inst = PortfolioInstance::five_asset_example();
        let lp = reformulate(&inst, ConfidenceLevels::coupled(0.1).unwrap()).unwrap();
        let tol = Tolerances::default();
        let r = residuals(&lp, &[60.0, 0.0, 20.0, 60.0, 60.0], &tol).unwrap();
        assert_eq!(r.budget_residual, 0.0);
        assert!(r.bound_violations.iter().all(|&v| v == 0.0));
        assert!(r.feasible);

        let r = residuals(&lp, &[70.0, 0.0, 10.0, 60.0, 60.0], &tol).unwrap();
        assert_eq!(r.bound_violations[0], 10.0);
        assert!(!r.feasible);

        let lp9 = reformulate(&inst, ConfidenceLevels::coupled(0.9).unwrap()).unwrap();
        let r = residuals(&lp9, &[0.0, 60.0, 60.0, 20.0, 60.0], &tol).unwrap();
        assert!(r.threshold_residual < 0.0);
        assert!(!r.feasible);
    }

    #[test]
    fn instance_validation() {
        let a = FuzzyRandomReturn::new(1.0, 1.0, 0.1, 0.1, 0.1).unwrap();
        let sn = RandomFactor::STANDARD;
        assert!(matches!(
            PortfolioInstance::new(vec![a, a, a], a, 400.0, vec![100.0; 3], sn),
            Err(Error::BudgetInfeasible { .. })
        ));
        assert!(PortfolioInstance::new(vec![], a, 1.0, vec![], sn).is_err());
        assert!(PortfolioInstance::new(vec![a], a, 1.0, vec![1.0, 2.0], sn).is_err());
        assert!(PortfolioInstance::new(vec![a], a, 1.0, vec![0.0], sn).is_err());
        assert!(ConfidenceLevels::new(0.0, 0.5).is_err());
        assert!(ConfidenceLevels::new(0.5, 1.0).is_err());
    }

    #[test]
    fn certificate_examples() {
        let inst = PortfolioInstance::five_asset_example();
        let x = [60.0, 0.0, 20.0, 60.0, 60.0];
        let lv = ConfidenceLevels::coupled(0.4).unwrap();
        let lp = reformulate(&inst, lv).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);

        let low = necessity_certificate(&inst, lv, &x, -1e6, 2000, &mut rng).unwrap();
        assert_eq!(low.probability, 1.0);
        let high = necessity_certificate(&inst, lv, &x, 1e6, 2000, &mut rng).unwrap();
        assert_eq!(high.probability, 0.0);

        let f = lp.objective(&x).unwrap();
        let edge = necessity_certificate(&inst, lv, &x, f, 10_000, &mut rng).unwrap();
        assert!((edge.probability - 0.4).abs() <= 0.05, "{edge:?}");
    }
}
