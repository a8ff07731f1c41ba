use thiserror::Error;

/// Errors raised by the library. CLI exit codes are derived from
/// [`Error::is_domain`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} must be nonzero")]
    ZeroVector(&'static str),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid manifold spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    #[error("rho is trivial (every lambda vanishes)")]
    RhoTrivial,

    #[error("outside the domain: {0}")]
    NotInDomain(String),

    #[error("n = {n} exceeds the enumeration cap {cap} (set NAKAMURA_MAX_N to override)")]
    TooLarge { n: usize, cap: usize },

    #[error("search space of {size} matrices exceeds the cap {cap}")]
    SearchTooLarge { size: u128, cap: u128 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not in SL(n,Z): det = {0}")]
    NotSpecialLinear(String),

    #[error("eigenvalues are not all real and positive: {0}")]
    NonPositiveSpectrum(String),

    #[error("unsupported characteristic polynomial: {0}")]
    UnsupportedCharPoly(String),

    #[error("certified relation {index} fails the float check (residual {residual:e})")]
    BadCertificate { index: usize, residual: f64 },

    #[error("spec has no lattice data")]
    MissingLattice,

    #[error("outside the automorphism theorem hypotheses: lambda_{0} vanishes")]
    OutsideAutHypotheses(usize),

    #[error("I - M is singular")]
    SingularMatrix,

    #[error("p = {p} is outside 1..={max}")]
    OutOfRange { p: usize, max: usize },

    #[error("candidate does not verify: {}", .0.join("; "))]
    UnverifiedCandidate(Vec<String>),

    #[error("affine subgroup only: candidate carries exponential modes")]
    AffineOnly,

    #[error("non-integral result: {0}")]
    NonIntegral(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for violations of mathematical preconditions, false for
    /// malformed input.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
