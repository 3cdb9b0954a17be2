use thiserror::Error;

/// Errors surfaced by fallible operations across the crate.
///
/// Pure-math operations that are total (Smith form, Howell form, kernels)
/// return values directly; `Error` covers contract violations such as shape
/// mismatches or elements fed to a ring they do not belong to.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("modulus mismatch: {0}")]
    ModulusMismatch(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("owner mismatch: {0}")]
    OwnerMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the group has no product split declared; sharp/circ twists need one")]
    SplitUndeclared,

    #[error("not a quotient of the ring's group: {0}")]
    NotAQuotient(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("rejection budget exhausted after {0} attempts")]
    RejectionBudget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
