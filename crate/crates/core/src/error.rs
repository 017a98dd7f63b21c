use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("axis {axis} out of range for a {dim}-dimensional lattice")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("operation requires a real-valued field")]
    NotReal,

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("exponential weight overflows f64 (exponent {0})")]
    Overflow(f64),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("problem is not parabolic (chi = {chi})")]
    NotParabolic { chi: f64 },

    #[error("parameter ordering violated: {0}")]
    Ordering(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("zero field has no well-defined norm ratio")]
    ZeroField,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("time {0} is not a grid node")]
    NotANode(f64),

    #[error("time {tau} outside trajectory span [{start}, {end}]")]
    OutsideSpan { tau: f64, start: f64, end: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
