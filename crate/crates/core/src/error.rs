use thiserror::Error;

/// Errors raised by constructions and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A mask, table or map has the wrong length for the structure it refers to.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Input data violates a structural invariant (order axioms, lattice laws, ...).
    #[error("{0}")]
    Invalid(String),

    /// An operation was called outside its domain.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An enumeration hit its configured cap.
    #[error("resource cap `{cap}` exceeded (limit {limit})")]
    Resource { cap: &'static str, limit: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable code used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Invalid(_) => "invalid",
            Error::Precondition(_) => "precondition",
            Error::Resource { .. } => "resource",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
