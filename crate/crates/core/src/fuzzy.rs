//! LR fuzzy numbers and fuzzy random returns.
//!
//! An LR fuzzy number `(a0, a1, beta, gamma)_LR` has membership 1 on its
//! peak `[a0, a1]`, a left shoulder `L((a0 - x) / beta)` and a right
//! shoulder `R((x - a1) / gamma)`. The shoulders are shaped by
//! [`ReferenceFunction`]s; the linear reference `x -> 1 - x` gives the
//! familiar trapezoid.

use crate::error::{check_len, Error, Result};

/// A strictly decreasing continuous map `[0, 1] -> [0, 1]` with
/// `f(0) = 1` and `f(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ReferenceFunction {
    /// `x -> 1 - x`.
    #[default]
    Linear,
    /// `x -> 1 - x^p` for `p > 0`.
    Power(f64),
}

impl ReferenceFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if exponent.is_finite() && exponent > 0.0 {
            Ok(Self::Power(exponent))
        } else {
            Err(Error::Domain {
                what: "power exponent",
                value: exponent,
                domain: "(0, inf)",
            })
        }
    }

    /// Evaluates the function. Arguments below 0 map to 1, above 1 map to 0.
    pub fn evaluate(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= 1.0 {
            return 0.0;
        }
        match *self {
            Self::Linear => 1.0 - x,
            Self::Power(p) => 1.0 - x.powf(p),
        }
    }

    /// `sup { t in [0, 1] | evaluate(t) >= alpha }`.
    pub fn pseudo_inverse(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "[0, 1]",
            });
        }
        Ok(match *self {
            Self::Linear => 1.0 - alpha,
            Self::Power(p) => (1.0 - alpha).powf(1.0 / p),
        })
    }
}

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// An LR fuzzy number `(a0, a1, beta, gamma)_LR`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LRFuzzyNumber {
    a0: f64,
    a1: f64,
    beta: f64,
    gamma: f64,
    left_ref: ReferenceFunction,
    right_ref: ReferenceFunction,
}

impl LRFuzzyNumber {
    /// Builds a number with linear shoulders.
    pub fn new(a0: f64, a1: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::with_references(
            a0,
            a1,
            beta,
            gamma,
            ReferenceFunction::Linear,
            ReferenceFunction::Linear,
        )
    }

    pub fn with_references(
        a0: f64,
        a1: f64,
        beta: f64,
        gamma: f64,
        left_ref: ReferenceFunction,
        right_ref: ReferenceFunction,
    ) -> Result<Self> {
        if ![a0, a1, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(invalid("LR fuzzy number", "parameters must be finite"));
        }
        if a0 > a1 {
            return Err(invalid(
                "LR fuzzy number",
                format!("left peak {a0} exceeds right peak {a1}"),
            ));
        }
        if beta < 0.0 || gamma < 0.0 {
            return Err(invalid(
                "LR fuzzy number",
                format!("spreads must be nonnegative, got beta={beta}, gamma={gamma}"),
            ));
        }
        Ok(Self {
            a0,
            a1,
            beta,
            gamma,
            left_ref,
            right_ref,
        })
    }

    /// A crisp number, i.e. `(v, v, 0, 0)`.
    pub fn crisp(v: f64) -> Result<Self> {
        Self::new(v, v, 0.0, 0.0)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn left_ref(&self) -> ReferenceFunction {
        self.left_ref
    }

    pub fn right_ref(&self) -> ReferenceFunction {
        self.right_ref
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.a0 - self.beta,
            hi: self.a1 + self.gamma,
        }
    }

    /// Membership degree of `x`. A zero spread turns its shoulder into a
    /// step that is closed on the peak side.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a0 {
            if self.beta == 0.0 {
                0.0
            } else {
                self.left_ref.evaluate((self.a0 - x) / self.beta)
            }
        } else if x > self.a1 {
            if self.gamma == 0.0 {
                0.0
            } else {
                self.right_ref.evaluate((x - self.a1) / self.gamma)
            }
        } else {
            1.0
        }
    }

    /// The level set `{x | membership(x) >= alpha}` for `alpha in (0, 1]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "(0, 1]",
            });
        }
        Ok(Interval {
            lo: self.a0 - self.beta * self.left_ref.pseudo_inverse(alpha)?,
            hi: self.a1 + self.gamma * self.right_ref.pseudo_inverse(alpha)?,
        })
    }
}

/// Sums `x_j * obs_j` under the extension principle. Peaks and spreads
/// combine as dot products with `x`.
///
/// All observations must share their reference functions, since only then
/// is the sum again an LR number of the same shape. An empty list yields the
/// crisp zero.
pub fn weighted_sum(observations: &[LRFuzzyNumber], x: &[f64]) -> Result<LRFuzzyNumber> {
    check_len("weights", observations.len(), x.len())?;
    if let Some(&w) = x.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::Domain {
            what: "weight",
            value: w,
            domain: "[0, inf)",
        });
    }
    let (left_ref, right_ref) = match observations.first() {
        Some(o) => (o.left_ref, o.right_ref),
        None => (ReferenceFunction::Linear, ReferenceFunction::Linear),
    };
    if observations
        .iter()
        .any(|o| o.left_ref != left_ref || o.right_ref != right_ref)
    {
        return Err(invalid(
            "weighted sum",
            "observations use different reference functions",
        ));
    }
    let mut acc = [0.0f64; 4];
    for (o, &w) in observations.iter().zip(x) {
        acc[0] += o.a0 * w;
        acc[1] += o.a1 * w;
        acc[2] += o.beta * w;
        acc[3] += o.gamma * w;
    }
    LRFuzzyNumber::with_references(acc[0], acc[1], acc[2], acc[3], left_ref, right_ref)
}

/// A fuzzy random return `(r0 + t*r2, r1 + t*r2, beta, gamma)_LR`, where `t`
/// is a draw of the market factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyRandomReturn {
    r0: f64,
    r1: f64,
    r2: f64,
    beta: f64,
    gamma: f64,
}

impl FuzzyRandomReturn {
    pub fn new(r0: f64, r1: f64, r2: f64, beta: f64, gamma: f64) -> Result<Self> {
        let what = "fuzzy random return";
        if ![r0, r1, r2, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(invalid(what, "parameters must be finite"));
        }
        if r0 > r1 {
            return Err(invalid(what, format!("r0 = {r0} exceeds r1 = {r1}")));
        }
        if r2 < 0.0 {
            return Err(invalid(what, format!("r2 = {r2} is negative")));
        }
        if beta < 0.0 {
            return Err(invalid(what, format!("beta = {beta} is negative")));
        }
        if gamma < 0.0 {
            return Err(invalid(what, format!("gamma = {gamma} is negative")));
        }
        Ok(Self {
            r0,
            r1,
            r2,
            beta,
            gamma,
        })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The fuzzy number realized when the factor takes the value `t`.
    pub fn observe(&self, t: f64) -> LRFuzzyNumber {
        let shift = t * self.r2;
        LRFuzzyNumber {
            a0: self.r0 + shift,
            a1: self.r1 + shift,
            beta: self.beta,
            gamma: self.gamma,
            left_ref: ReferenceFunction::Linear,
            right_ref: ReferenceFunction::Linear,
        }
    }
}

fn invalid(what: &str, reason: impl Into<String>) -> Error {
    Error::Invalid {
        what: what.to_string(),
        reason: reason.into(),
    }
}
