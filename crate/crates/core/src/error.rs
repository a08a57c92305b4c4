use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number: {0}")]
    InvalidSpin(String),
    #[error("invalid half-integer: {0}")]
    InvalidHalfInteger(String),
    #[error("inconsistent angular momentum arguments: {0}")]
    InconsistentAngularMomenta(String),
    #[error("{name} = {value} is out of range {lo}..={hi}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("rotation axis is not a unit vector (|n| = {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("expected {expected} amplitudes for spin {spin}, got {got}")]
    DimensionMismatch {
        spin: String,
        expected: usize,
        got: usize,
    },
    #[error("state vector cannot be normalized (norm {norm:e})")]
    Unnormalizable { norm: f64 },
    #[error("unknown catalog state '{0}'")]
    UnknownCatalogState(String),
    #[error("catalog state '{id}' is not defined for j = {spin}")]
    CatalogSpinMismatch { id: String, spin: String },
    #[error("unsupported generator '{0}' (expected identity or square)")]
    UnsupportedGenerator(String),
    #[error("quadrature grid too small: need n_theta >= {need_theta} and n_phi >= {need_phi}, got {n_theta} x {n_phi}")]
    UndersizedGrid {
        need_theta: usize,
        need_phi: usize,
        n_theta: usize,
        n_phi: usize,
    },
    #[error("Dicke linear system is singular for j = {spin} (condition number {condition:e})")]
    SingularSystem { spin: String, condition: f64 },
    #[error("no sign change on [{lo}, {hi}] (g(lo) = {g_lo:e}, g(hi) = {g_hi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },
    #[error("invalid angle grid: {0}")]
    InvalidGrid(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("profile length {got} does not match floor(j) = {expected}")]
    ProfileLength { expected: usize, got: usize },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("serialization error: {0}")]
    Serialization(String),
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
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
