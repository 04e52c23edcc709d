//! The market factor distribution and its quantile function.

use crate::error::{Error, Result};
use libm::erfc;

/// A normally distributed market factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomFactor {
    mean: f64,
    std_dev: f64,
}

impl Default for RandomFactor {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl RandomFactor {
    pub const STANDARD: Self = Self {
        mean: 0.0,
        std_dev: 1.0,
    };

    pub fn new(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::Domain {
                what: "factor mean",
                value: mean,
                domain: "finite reals",
            });
        }
        if !(std_dev.is_finite() && std_dev > 0.0) {
            return Err(Error::Domain {
                what: "factor std_dev",
                value: std_dev,
                domain: "(0, inf)",
            });
        }
        Ok(Self { mean, std_dev })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    pub fn cdf(&self, t: f64) -> f64 {
        standard_cdf((t - self.mean) / self.std_dev)
    }

    /// `inf { t | cdf(t) >= p }` for `p in (0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.mean + self.std_dev * standard_quantile(p)?)
    }
}

/// Standard normal CDF via the complementary error function, which keeps
/// full relative precision deep in the lower tail.
pub fn standard_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile by bisection on [`standard_cdf`].
///
/// The upper half is obtained by reflection so that every bisection runs in
/// the lower tail where `1 - p` is representable exactly.
pub fn standard_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "probability",
            value: p,
            domain: "(0, 1)",
        });
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // cdf(-40) underflows below every positive double.
    let (mut lo, mut hi) = (-40.0f64, 0.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if standard_cdf(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Quantile of `factor` at `p`.
pub fn normal_quantile(p: f64, factor: &RandomFactor) -> Result<f64> {
    factor.quantile(p)
}
