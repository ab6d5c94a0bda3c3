use thiserror::Error;

/// Errors raised by grid construction, norms and condition evaluators.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-integrable weight: {0}")]
    NonIntegrableWeight(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("band exceeds Nyquist frequency: {0}")]
    Nyquist(String),
    #[error("quadrature budget unmet: {0}")]
    QuadratureBudget(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical budget (quadrature truncation, Nyquist guard).
    pub fn is_numerical_budget(&self) -> bool {
        matches!(self, Error::Nyquist(_) | Error::QuadratureBudget(_))
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NonIntegrableWeight(_) => "non_integrable_weight",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::Nyquist(_) => "nyquist",
            Error::QuadratureBudget(_) => "quadrature_budget",
            Error::UnknownName(_) => "unknown_name",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p out of (1,inf): {p}")));
    }
    Ok(())
}
