use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix determinant {0} is not positive")]
    InvalidDeterminant(f64),
    #[error("no logarithm in the chosen branch (identity or parabolic with trace -2)")]
    NoBranch,
    #[error("element is not semisimple (parabolic or identity)")]
    NotSemisimple,
    #[error("element is not elliptic")]
    NotElliptic,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("elliptic elements share a fixed point")]
    CoincidentFixedPoints,
    #[error("direction is degenerate: trace form of s with itself vanishes")]
    DegenerateDirection,
    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("non-manifold gluing: {0}")]
    NonManifold(String),
    #[error("surface is disconnected")]
    Disconnected,
    #[error("triangle {triangle} violates the triangle inequality on edges ({}, {}, {}) with lengths ({}, {}, {})", edges[0], edges[1], edges[2], lengths[0], lengths[1], lengths[2])]
    TriangleInequality {
        triangle: usize,
        edges: [String; 3],
        lengths: [f64; 3],
    },
    #[error("edge {edge:?} has non-positive or non-finite length {length}")]
    NonPositiveLength { edge: String, length: f64 },
    #[error("NotAdmissible: angle data has chi = {chi} > 0")]
    NotAdmissible { chi: f64 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("WallAngle: vertex {vertex} has cone angle {theta} too close to a positive multiple of 2pi")]
    WallAngle { vertex: usize, theta: f64 },
    #[error("numerical collapse: {0}")]
    NumericalCollapse(String),

    #[error("edge {0:?} cannot be flipped in this configuration")]
    UnflippableConfiguration(String),
    #[error("flip algorithm did not terminate after {0} flips")]
    NonTermination(usize),
}

impl Error {
    /// Variant name, used as a stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDeterminant(_) => "InvalidDeterminant",
            Error::NoBranch => "NoBranch",
            Error::NotSemisimple => "NotSemisimple",
            Error::NotElliptic => "NotElliptic",
            Error::NotHyperbolic => "NotHyperbolic",
            Error::CoincidentFixedPoints => "CoincidentFixedPoints",
            Error::DegenerateDirection => "DegenerateDirection",
            Error::NoSolution(_) => "NoSolution",
            Error::Parse(_) => "Parse",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::DuplicateEdge(_) => "DuplicateEdge",
            Error::NonManifold(_) => "NonManifold",
            Error::Disconnected => "Disconnected",
            Error::TriangleInequality { .. } => "TriangleInequality",
            Error::NonPositiveLength { .. } => "NonPositiveLength",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::OutOfRange(_) => "OutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::WallAngle { .. } => "WallAngle",
            Error::NumericalCollapse(_) => "NumericalCollapse",
            Error::UnflippableConfiguration(_) => "UnflippableConfiguration",
            Error::NonTermination(_) => "NonTermination",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
