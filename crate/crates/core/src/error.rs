use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {t} outside domain [{lo}, {hi}]")]
    ParameterOutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("evaluation at (t={t}, x={x}) left [0,1]: value {value}")]
    EvaluationEscaped { t: f64, x: f64, value: f64 },

    #[error("degenerate critical point near x={x} at parameter t={t}")]
    DegenerateCritical { t: f64, x: f64 },

    #[error("polynomial does not map [0,1] into itself: P({x}) = {value}")]
    NotIntervalMap { x: f64, value: f64 },

    #[error("derivative along the critical orbit vanishes at index {index}")]
    ZeroDerivativeOnOrbit { index: usize },

    #[error("inverse derivatives are not contracting over the last {window} terms (ratio {ratio})")]
    TailNotContracting { window: usize, ratio: f64 },

    #[error("orbit of length {available} is too short (needed {needed})")]
    OrbitTooShort { needed: usize, available: usize },

    #[error("distortion sum is infinite before time {time}")]
    InfiniteDistortion { time: usize },

    #[error("no sampled orbit produced a qualifying segment")]
    NoSegmentsFound,

    #[error("parameter {t} is not in the requested boundary class")]
    NotInBoundaryClass { t: f64 },

    #[error("balls {i} and {j} share a center")]
    DuplicateCenters { i: usize, j: usize },

    #[error("ball family is not special (violating pair {i}, {j})")]
    NotSpecial { i: usize, j: usize },

    #[error("could not generate a special family: {0}")]
    GenerationFailed(String),

    #[error("theta must be positive, got {0}")]
    InvalidTheta(f64),

    #[error("critical index {index} out of range ({count} critical points)")]
    NoSuchCritical { index: usize, count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
