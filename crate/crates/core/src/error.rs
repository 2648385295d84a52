use thiserror::Error;

/// Errors surfaced by the public operations.
///
/// `CapExceeded` maps to CLI exit status 2, `DegenerateForm` to exit
/// status 3; everything else is a usage or internal-consistency error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("flavor mismatch: {0} vs {1}")]
    FlavorMismatch(String, String),

    #[error("truncation order mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),

    #[error("series exponential requires a zero constant term")]
    NonzeroConstantTerm,

    #[error("coefficient is not invertible in the scalar ring: {0}")]
    NonInvertibleCoefficient(String),

    #[error("series has a non-invertible leading coefficient: {0}")]
    NonInvertibleSeries(String),

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("polynomial division left a nonzero remainder: {0}")]
    NonzeroRemainder(String),

    #[error("input is not antisymmetric under variable exchange")]
    NotAntisymmetric,

    #[error("degenerate bilinear form: {0}")]
    DegenerateForm(String),

    #[error("potential is not admissible here: {0}")]
    InvalidPotential(String),

    #[error("truncation bookkeeping violated: {0}")]
    TruncationBookkeeping(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
