//! Error type shared by all modules of the crate.

use num_bigint::BigUint;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A composite cofactor resisted factoring within the iteration budget.
    #[error("factoring budget exhausted on cofactor {cofactor} after {budget} iterations; increase the budget")]
    FactorBudget { cofactor: BigUint, budget: u64 },

    /// Exact division in Z[i] failed.
    #[error("{numerator} is not divisible by {divisor} in Z[i]")]
    NotDivisible { numerator: String, divisor: String },

    /// A precondition on the arguments does not hold.
    #[error("{0}")]
    Domain(String),

    /// A surface description lacks place data needed for a check.
    #[error("no place data above {0}; add places covering this prime")]
    MissingPlaces(u64),

    /// Structured-input parse or validation failure, with the field path.
    #[error("spec error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A 2-adic unit is no longer known to the minimum of three bits.
    #[error("2-adic precision dropped to {effective} bits (minimum 3)")]
    Precision { effective: i64 },

    /// Cancellation exceeded the working precision, so the valuation of the
    /// result cannot be determined.
    #[error("2-adic valuation indeterminate at {precision} bits of precision")]
    IndeterminateValuation { precision: u32 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
