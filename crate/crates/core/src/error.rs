use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Two inputs that must agree in length did not.
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A structural invariant of a value was violated.
    #[error("invalid {what}: {reason}")]
    Invalid { what: String, reason: String },

    /// The budget cannot be spent within the box bounds.
    #[error("budget {total_fund} exceeds the sum of upper bounds {bound_sum}")]
    BudgetInfeasible { total_fund: f64, bound_sum: f64 },

    /// Lattice enumeration would exceed its node budget.
    #[error("enumeration aborted after {0} nodes")]
    EnumerationLimit(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { what, expected, got })
    }
}
