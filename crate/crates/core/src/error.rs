use thiserror::Error;

/// Errors raised by constructions. Certification failures that are an
/// expected outcome of a check are returned as a failed [`crate::Report`]
/// instead; these variants cover refused constructions and bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("characteristic {0} is neither 0 nor a supported prime")]
    InvalidField(u64),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("twist rejected: s_({i},{j})(sigma, delta) does not vanish")]
    RejectedTwist { i: usize, j: usize },

    #[error("twisting map rejected: {0}")]
    TwistAxioms(String),

    #[error("module compatibility rejected: s_({i},{j})(phi, f) does not vanish")]
    RejectedCompat { i: usize, j: usize },

    #[error("compatibility chain rejected in degree {degree}: s_({i},{j})(sigma_{degree}, delta_{degree}) does not vanish")]
    RejectedTauChain { degree: usize, i: usize, j: usize },

    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),

    #[error("no lift exists in degree {degree} for generator {generator}")]
    NoLift { degree: usize, generator: usize },

    #[error("construction failed in degree {degree}: {detail}")]
    Construction { degree: usize, detail: String },

    #[error("degree {requested} requested but only {available} stored")]
    Range { requested: usize, available: usize },

    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
