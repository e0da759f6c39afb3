use alloc::string::String;

use crate::space::SpaceKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected a unit vector, found norm {norm}")]
    NotUnitNorm { norm: f64 },

    #[error("point is off the hyperboloid: <x,x>_M = {minkowski_norm}, x0 = {x0}")]
    OffHyperboloid { minkowski_norm: f64, x0: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("frame is not orthonormal: max |U^T U - I| = {deviation}")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("graph is disconnected: vertex {to} is unreachable from vertex {from}")]
    Disconnected { from: usize, to: usize },

    #[error("not a tree: {reason}")]
    NotATree { reason: &'static str },

    #[error("invalid graph: {reason}")]
    InvalidGraph { reason: String },

    #[error("geodesic not unique (antipodal points)")]
    GeodesicNotUnique,

    #[error("{operation} is not supported for {kind} spaces")]
    Unsupported {
        operation: &'static str,
        kind: SpaceKind,
    },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("point representation does not match a {kind} space")]
    WrongRepresentation { kind: SpaceKind },

    #[error("invalid distance matrix: {reason}")]
    InvalidDistanceMatrix { reason: String },

    #[error("side lengths ({a}, {b}, {c}) violate the triangle inequality")]
    TriangleInequality { a: f64, b: f64, c: f64 },

    #[error("perimeter {perimeter} is not below 2·D_κ = {bound}")]
    PerimeterTooLarge { perimeter: f64, bound: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,
}

impl Error {
    /// True for errors caused by malformed input data (as opposed to
    /// unsupported operations or solver failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Unsupported { .. } | Error::NoConvergence)
    }
}
