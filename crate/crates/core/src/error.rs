use thiserror::Error;

/// Errors produced by geometric primitives and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("point dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("points {0} and {1} coincide exactly")]
    CoincidentPoints(usize, usize),

    #[error("dilation is undefined for coincident endpoints")]
    UndefinedDilation,

    #[error("level set is empty: dilation level {0} < 1")]
    EmptyLevelSet(f64),

    #[error("ellipse foci coincide")]
    CoincidentFoci,

    #[error("operation requires dimension {expected}, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },

    #[error("conic pair is degenerate or ill-conditioned")]
    DegenerateConicPair,

    #[error("reference point is not strictly interior")]
    NotInterior,

    #[error("annulus index undefined: point coincides with the annulus center")]
    UndefinedAnnulusIndex,

    #[error("constants undefined: gamma threshold {0} must exceed 3")]
    ConstantsUndefined(f64),

    #[error("derived neighbor count {0:e} exceeds the overflow guard")]
    ConstantsOverflow(f64),

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("convex subsolver failed to converge: {0}")]
    SolverStalled(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
