use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix has a negative off-diagonal entry {value} at ({row}, {col})")]
    NotEssentiallyNonnegative { row: usize, col: usize, value: f64 },

    #[error("matrix is reducible")]
    NotIrreducible,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("xi = {xi} lies in the spectrum (singular resolvent)")]
    SingularResolvent { xi: f64 },

    #[error("dimension {n} exceeds the oracle limit {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("alpha = {0} is outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("diffusion coefficient {value} at x = {x} is not strictly positive")]
    NonPositiveDiffusion { x: f64, value: f64 },

    #[error("kernel entry ({row}, {col}) = {value} is negative")]
    NegativeKernel { row: usize, col: usize, value: f64 },

    #[error("grid is not uniformly spaced")]
    NonUniformGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("spectral radius vanishes at theta = {theta}")]
    ZeroSpectralRadius { theta: f64 },

    #[error("spectral bound does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("spectral bound is not monotone on [{lo}, {hi}]")]
    NotMonotoneOnBracket { lo: f64, hi: f64 },

    #[error("semigroup norm overflow at t = {t}")]
    OverflowRisk { t: f64 },

    #[error("at {name} = {value}: {source}")]
    AtParameter {
        name: &'static str,
        value: f64,
        source: Box<Error>,
    },
}

impl Error {
    /// Short variant name, as printed by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotEssentiallyNonnegative { .. } => "NotEssentiallyNonnegative",
            Error::NotIrreducible => "NotIrreducible",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SingularResolvent { .. } => "SingularResolvent",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::InvalidAlpha(_) => "InvalidAlpha",
            Error::NonPositiveDiffusion { .. } => "NonPositiveDiffusion",
            Error::NegativeKernel { .. } => "NegativeKernel",
            Error::NonUniformGrid => "NonUniformGrid",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::ZeroSpectralRadius { .. } => "ZeroSpectralRadius",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::NotMonotoneOnBracket { .. } => "NotMonotoneOnBracket",
            Error::OverflowRisk { .. } => "OverflowRisk",
            Error::AtParameter { source, .. } => source.name(),
        }
    }

    /// Strips any parameter context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtParameter { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at(self, name: &'static str, value: f64) -> Error {
        Error::AtParameter {
            name,
            value,
            source: Box::new(self),
        }
    }
}
