use thiserror::Error;

use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0} (supported: 1..=4)")]
    UnsupportedDimension(usize),

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("halfspace normal has zero length")]
    ZeroNormal,

    #[error("negative ball radius {0}")]
    NegativeRadius(f64),

    #[error("convex piece is empty (max violation {violation:.3e})")]
    InfeasiblePiece { violation: f64 },

    #[error("polytope needs at least one vertex")]
    EmptyPolytope,

    #[error("closed set needs at least one piece")]
    EmptySet,

    #[error("point lies outside the set (violation {violation:.3e})")]
    NotInSet { violation: f64 },

    #[error("point lies in the solution set; ψ is undefined there")]
    InSolutionSet,

    #[error("problem has no declared solution set")]
    MissingSolutionSet,

    #[error("operation requires a {expected} problem, got {got}")]
    WrongKind { expected: &'static str, got: &'static str },

    #[error("diagonal subdifferential is not a singleton ({0} vertices)")]
    NotSmooth(usize),

    #[error("hypothesis not established: {0}")]
    Hypothesis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("no convergence after {iterations} sweeps (best gap {gap:.3e})")]
    NoConvergence { iterations: usize, gap: f64, best: Box<(Point, Point)> },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
