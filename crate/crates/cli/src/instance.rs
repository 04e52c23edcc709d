//! JSON instance files.
//!
//! ```json
//! {
//!   "assets": [ { "r0": 1.3, "r1": 1.45, "r2": 0.6, "beta": 0.2, "gamma": 0.2 }, ... ],
//!   "target": { "r0": 250.0, "r1": 250.0, "r2": 50.0, "beta": 40.0, "gamma": 40.0 },
//!   "total_fund": 200.0,
//!   "upper_bounds": [60.0, ...],
//!   "factor": { "mean": 0.0, "std_dev": 1.0 }
//! }
//! ```

use fuzzport_core::{FuzzyRandomReturn, PortfolioInstance, RandomFactor};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// The bundled five-asset example.
pub const PAPER_TABLE1: &str = include_str!("../fixtures/paper_table1.json");

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{field}`: {reason}")]
    Validation { field: String, reason: String },
    #[error("total_fund {total_fund} exceeds the sum of upper bounds {bound_sum}")]
    BudgetInfeasible { total_fund: f64, bound_sum: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReturnRecord {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRecord {
    pub mean: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub assets: Vec<ReturnRecord>,
    pub target: ReturnRecord,
    pub total_fund: f64,
    pub upper_bounds: Vec<f64>,
    pub factor: FactorRecord,
}

fn reject(field: impl Into<String>, reason: impl Into<String>) -> InstanceError {
    InstanceError::Validation {
        field: field.into(),
        reason: reason.into(),
    }
}

fn check_return(field: &str, r: &ReturnRecord) -> Result<FuzzyRandomReturn, InstanceError> {
    for (name, v) in [
        ("r0", r.r0),
        ("r1", r.r1),
        ("r2", r.r2),
        ("beta", r.beta),
        ("gamma", r.gamma),
    ] {
        if !v.is_finite() {
            return Err(reject(format!("{field}.{name}"), "must be finite"));
        }
    }
    if r.r0 > r.r1 {
        return Err(reject(
            format!("{field}.r0"),
            format!("r0 = {} exceeds r1 = {}", r.r0, r.r1),
        ));
    }
    for (name, v) in [("r2", r.r2), ("beta", r.beta), ("gamma", r.gamma)] {
        if v < 0.0 {
            return Err(reject(format!("{field}.{name}"), format!("must be nonnegative, got {v}")));
        }
    }
    FuzzyRandomReturn::new(r.r0, r.r1, r.r2, r.beta, r.gamma)
        .map_err(|e| reject(field, e.to_string()))
}

impl InstanceFile {
    pub fn validate(&self) -> Result<PortfolioInstance, InstanceError> {
        if self.assets.is_empty() {
            return Err(reject("assets", "at least one asset is required"));
        }
        let assets = self
            .assets
            .iter()
            .enumerate()
            .map(|(j, r)| check_return(&format!("assets[{j}]"), r))
            .collect::<Result<Vec<_>, _>>()?;
        let target = check_return("target", &self.target)?;
        if self.upper_bounds.len() != self.assets.len() {
            return Err(reject(
                "upper_bounds",
                format!(
                    "has {} entries for {} assets",
                    self.upper_bounds.len(),
                    self.assets.len()
                ),
            ));
        }
        for (j, &u) in self.upper_bounds.iter().enumerate() {
            if !(u.is_finite() && u > 0.0) {
                return Err(reject(format!("upper_bounds[{j}]"), format!("must be positive, got {u}")));
            }
        }
        if !(self.total_fund.is_finite() && self.total_fund > 0.0) {
            return Err(reject(
                "total_fund",
                format!("must be positive, got {}", self.total_fund),
            ));
        }
        let bound_sum: f64 = self.upper_bounds.iter().sum();
        if bound_sum < self.total_fund {
            return Err(InstanceError::BudgetInfeasible {
                total_fund: self.total_fund,
                bound_sum,
            });
        }
        let factor = RandomFactor::new(self.factor.mean, self.factor.std_dev)
            .map_err(|e| reject("factor", e.to_string()))?;
        PortfolioInstance::new(
            assets,
            target,
            self.total_fund,
            self.upper_bounds.clone(),
            factor,
        )
        .map_err(|e| reject("instance", e.to_string()))
    }

    pub fn from_instance(p: &PortfolioInstance) -> Self {
        let rec = |r: &FuzzyRandomReturn| ReturnRecord {
            r0: r.r0(),
            r1: r.r1(),
            r2: r.r2(),
            beta: r.beta(),
            gamma: r.gamma(),
        };
        Self {
            assets: p.assets().iter().map(rec).collect(),
            target: rec(p.target()),
            total_fund: p.total_fund(),
            upper_bounds: p.upper_bounds().to_vec(),
            factor: FactorRecord {
                mean: p.factor().mean(),
                std_dev: p.factor().std_dev(),
            },
        }
    }
}

pub fn parse_instance(text: &str) -> Result<PortfolioInstance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.validate()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<PortfolioInstance, InstanceError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

pub fn write_instance(p: &PortfolioInstance) -> String {
    let mut out = serde_json::to_string_pretty(&InstanceFile::from_instance(p))
        .expect("instance records always serialize");
    out.push('\n');
    out
}

pub fn paper_table1() -> PortfolioInstance {
    parse_instance(PAPER_TABLE1).expect("bundled fixture is valid")
}
