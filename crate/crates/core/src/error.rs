use thiserror::Error;

/// Domain errors raised by the lab's operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown class label `{0}`")]
    UnknownLabel(String),
    #[error("expected {expected} classes, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("class `{0}` is not flagged ample")]
    NotAmple(String),
    #[error("polarization has vanishing top self-intersection")]
    DegeneratePolarization,
    #[error("class has vanishing top self-intersection")]
    DegenerateClass,
    #[error("dimension {0} is too low for this operation")]
    DimensionTooLow(usize),
    #[error("class is not the anti-canonical class")]
    NotAnticanonical,
    #[error("subobject rank {rank} outside [1, {max}]")]
    BadRank { rank: usize, max: usize },
    #[error("missing pairing for monomial {0:?}")]
    MissingPairing(Vec<String>),
    #[error("invalid intersection data: {0}")]
    InvalidData(String),

    #[error("fan is not smooth: {0}")]
    NotSmooth(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("polytope is empty or not full-dimensional")]
    EmptyPolytope,
    #[error("no lattice points at level {0}")]
    NoSections(u32),

    #[error("metric is not Kahler at grid node {node}")]
    NotKahler { node: usize },
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("radial Poisson problem failed: {0}")]
    PoissonFailure(String),
    #[error("Newton iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("point lies outside the chart: {0}")]
    OutOfChart(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::WrongArity { .. } => "WrongArity",
            Error::NotAmple(_) => "NotAmple",
            Error::DegeneratePolarization => "DegeneratePolarization",
            Error::DegenerateClass => "DegenerateClass",
            Error::DimensionTooLow(_) => "DimensionTooLow",
            Error::NotAnticanonical => "NotAnticanonical",
            Error::BadRank { .. } => "BadRank",
            Error::MissingPairing(_) => "MissingPairing",
            Error::InvalidData(_) => "InvalidData",
            Error::NotSmooth(_) => "NotSmooth",
            Error::NotComplete(_) => "NotComplete",
            Error::EmptyPolytope => "EmptyPolytope",
            Error::NoSections(_) => "NoSections",
            Error::NotKahler { .. } => "NotKahler",
            Error::ClassMismatch(_) => "ClassMismatch",
            Error::PoissonFailure(_) => "PoissonFailure",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::OutOfChart(_) => "OutOfChart",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
