use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} exceeds the compiled limit of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("operation requires a nonempty affine subspace")]
    EmptySubspace,

    #[error("point lies in the subspace, no separating functional exists")]
    PointInSubspace,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} = {value} is beyond the enumeration guard of {guard}")]
    Guard {
        what: &'static str,
        value: usize,
        guard: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("search exhausted its budget without a result: {0}")]
    NotFound(String),

    #[error("no polynomial within error bound after {retries} retries (best error {best_errors}/{total}, needed <= {bound})")]
    RetryBudgetExhausted {
        retries: usize,
        best_errors: u64,
        total: u64,
        bound: u64,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
