use thiserror::Error;

/// Errors raised by covop operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("window radii differ: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    #[error("index ({n}, {m}) outside window of radius {radius}")]
    IndexOutOfWindow { n: i64, m: i64, radius: usize },

    #[error("non-finite matrix entry at ({n}, {m})")]
    NonFinite { n: i64, m: i64 },

    #[error("unsupported (p, q) norm pair ({p}, {q})")]
    UnsupportedNormPair { p: String, q: String },

    #[error("power iteration did not converge: last estimate {last}, relative gap {gap:e}")]
    NoConvergence { last: f64, gap: f64 },

    #[error("empty arc [{a}, {b})")]
    EmptyArc { a: f64, b: f64 },

    #[error("window radius {requested} exceeds the declared dense radius {declared}")]
    RadiusExceeded { requested: usize, declared: usize },

    #[error("unknown structure-matrix family `{0}`")]
    UnknownFamily(String),

    #[error("step-function pieces overlap")]
    OverlappingPieces,

    #[error("|z| = {modulus} is outside the open disk of radius 1/π")]
    OutsideDisk { modulus: f64 },

    #[error("matrix is not positive semidefinite with unit diagonal: {0}")]
    NotObservableMatrix(String),

    #[error("unknown sweep quantity `{0}`")]
    UnknownQuantity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, used as the CLI's failure tag.
    pub fn name(&self) -> &'static str {
        match self {
            Error::WindowMismatch { .. } => "WindowMismatch",
            Error::IndexOutOfWindow { .. } => "IndexOutOfWindow",
            Error::NonFinite { .. } => "NonFinite",
            Error::UnsupportedNormPair { .. } => "UnsupportedNormPair",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::EmptyArc { .. } => "EmptyArc",
            Error::RadiusExceeded { .. } => "RadiusExceeded",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::OverlappingPieces => "OverlappingPieces",
            Error::OutsideDisk { .. } => "OutsideDisk",
            Error::NotObservableMatrix(_) => "NotObservableMatrix",
            Error::UnknownQuantity(_) => "UnknownQuantity",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
