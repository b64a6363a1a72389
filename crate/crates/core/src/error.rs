use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no para-complex square root: re+im and re-im must both be non-negative")]
    NoRoot,
    #[error("para-complex number is not invertible (re^2 = im^2)")]
    NotInvertible,
    #[error("point lies outside the sampled domain: {0}")]
    OutOfGrid(String),
    #[error("initial frame violates the null-frame Gram relations (max deviation {0:e})")]
    BadInitialFrame(f64),
    #[error("frame data is inconsistent: {0}")]
    BadFrame(String),
    #[error("curve parameter is not distinguished: k0 = {0:e}")]
    NonDistinguishedParameter(f64),
    #[error("degenerate metric at sample point")]
    DegenerateMetric,
    #[error("ruling is not light-cone valued (g(B,B) = {0:e})")]
    NotNull(f64),
    #[error("ruling vanishes at s = {0}")]
    ZeroRuling(f64),
    #[error("beta changes sign or vanishes inside the span")]
    MixedBeta,
    #[error("degenerate point: g12 = {0:e}")]
    DegeneratePoint(f64),
    #[error("invalid null chart: {0}")]
    ChartInvalid(String),
    #[error("derivative triple is not closed (residual {0:e})")]
    NotClosed(f64),
    #[error("matrix is not in SO(2,1)")]
    NotLorentz,
    #[error("constant direction has c3 = 0")]
    ZeroC3,
    #[error("alpha vanishes at s = {0}")]
    AlphaVanishes(f64),
    #[error("ruling is not normalized to beta = 1/2 (beta = {0})")]
    BetaNotHalf(f64),
    #[error("beta vanishes at s = {0}")]
    BetaZero(f64),
    #[error("third ruling component vanishes at s = {0}")]
    ZeroB3(f64),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("construction check failed: {0}")]
    Construction(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Degenerate-domain errors map to their own process exit code in the CLI.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::ChartInvalid(_) | Error::DegeneratePoint(_) | Error::DegenerateMetric | Error::ZeroRuling(_) | Error::MixedBeta
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
