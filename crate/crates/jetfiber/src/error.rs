//! Error type shared across the engine.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// The Gröbner/reduction step budget ran out. Callers may retry with a
    /// larger `--budget`; results are never silently truncated.
    #[error("step budget exhausted after {steps} reduction steps")]
    BudgetExceeded { steps: u64 },

    /// Point enumeration would exceed the supported search-space size.
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable index {index} exceeds the session order bound m = {m}")]
    IndexOutOfRange { index: u32, m: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A triangular certificate could not be completed; the generators that
    /// resisted elimination are reported verbatim.
    #[error("triangular certificate failed; non-triangular generators remain: {remaining:?}")]
    Certificate { remaining: Vec<String> },

    /// A cross-check between two independent computations disagreed, or a
    /// claimed identity failed to verify.
    #[error("verification failed: {0}")]
    Verification(String),

    /// Structural limits of the engine (variable count, exponent size, ...).
    #[error("engine limit exceeded: {0}")]
    Limit(String),
}

impl EngineError {
    /// Process exit code used by the CLI: 1 verification failure,
    /// 2 budget exhaustion, 3 usage/precondition error.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::BudgetExceeded { .. } | EngineError::EnumerationBudget(_) => 2,
            EngineError::Verification(_) | EngineError::Certificate { .. } => 1,
            _ => 3,
        }
    }
}
