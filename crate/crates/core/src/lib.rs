//! Portfolio selection with fuzzy random returns under necessity-based
//! chance constraints.
//!
//! The crate reduces the chance-constrained model to a crisp linear program
//! ([`model::reformulate`]), searches it with an imperialist competitive
//! algorithm ([`ica::run`]) under exterior penalties ([`penalty`]), and
//! referees the search with an exact solver ([`oracle::solve_exact`]).

pub mod error;
pub mod fuzzy;
pub mod ica;
pub mod model;
pub mod necessity;
pub mod normal;
pub mod oracle;
pub mod penalty;

pub use error::{Error, Result};
pub use fuzzy::{weighted_sum, FuzzyRandomReturn, Interval, LRFuzzyNumber, ReferenceFunction};
pub use ica::{run, Country, Empire, IcaConfig, IcaState, RunReport, TraceRecord};
pub use model::{
    necessity_certificate, objective, reformulate, reformulate_with, residuals, CertificateRecord,
    ConfidenceLevels, DeterministicLP, PortfolioInstance, ResidualReport, Tolerances,
};
pub use necessity::{necessity_geq_fuzzy, necessity_geq_scalar};
pub use normal::{normal_quantile, RandomFactor};
pub use oracle::{brute_force, solve_exact, ExactSolution, SolveStatus};
pub use penalty::{penalized_objective, repair, PenaltyConfig};
