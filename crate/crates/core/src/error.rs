use thiserror::Error;

use crate::partitions::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ParseError: {0}")]
    Parse(String),

    #[error("NotAPartition: {0} is not weakly decreasing")]
    NotAPartition(String),

    #[error("SizeMismatch: {left} has {left_size} boxes but {right} has {right_size}")]
    SizeMismatch {
        left: Partition,
        left_size: usize,
        right: Partition,
        right_size: usize,
    },

    #[error("NotNested: {dp} is not dominated by {d}")]
    NotNested { dp: Partition, d: Partition },

    #[error("DegenerateAmbient: the ambient partition {0} has a single column (zero orbit)")]
    DegenerateAmbient(Partition),

    #[error("DimensionMismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ShapeError: {0}")]
    Shape(String),

    #[error("NotOnFiber: moment map is nonzero at vertex {vertex}")]
    NotOnFiber { vertex: usize },

    #[error("NotStable: {0}")]
    NotStable(String),

    #[error("IncidenceViolation: {0}")]
    IncidenceViolation(String),

    #[error("NotNilpotent: matrix power {power} is nonzero")]
    NotNilpotent { power: usize },

    #[error("ExactnessFailure: reflection at vertex {vertex} expected kernel/cokernel dimension {expected}, found {found}")]
    ExactnessFailure {
        vertex: usize,
        expected: usize,
        found: usize,
    },

    #[error("SamplingExhausted: no usable sample in {trials} trials")]
    SamplingExhausted { trials: usize },

    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// Short variant name, used as the leading token of CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::NotAPartition(_) => "NotAPartition",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::NotNested { .. } => "NotNested",
            Error::DegenerateAmbient(_) => "DegenerateAmbient",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Shape(_) => "ShapeError",
            Error::NotOnFiber { .. } => "NotOnFiber",
            Error::NotStable(_) => "NotStable",
            Error::IncidenceViolation(_) => "IncidenceViolation",
            Error::NotNilpotent { .. } => "NotNilpotent",
            Error::ExactnessFailure { .. } => "ExactnessFailure",
            Error::SamplingExhausted { .. } => "SamplingExhausted",
            Error::InternalInconsistency(_) => "InternalInconsistency",
        }
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_))
    }
}
