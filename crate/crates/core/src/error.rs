use thiserror::Error;

/// Errors raised by the covering oracles, the cut-out machinery and the
/// estimators built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("invalid interval union: {0}")]
    InvalidIntervals(String),

    #[error("invalid ball: radius must be positive, got {0}")]
    InvalidBall(f64),

    #[error("scale ordering violated: {0}")]
    ScaleOrdering(String),

    #[error("center {0} is not a point of the set")]
    CenterNotInSet(f64),

    #[error("unnormalized gap sequence: total length {0}")]
    Unnormalized(f64),

    #[error("invalid gap sequence: {0}")]
    InvalidGaps(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("horizon too small: level {needed} required but K_max = {horizon}; increase K_max")]
    HorizonTooSmall { needed: usize, horizon: usize },

    #[error("level {level} is out of range (depth {depth})")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("not uniformly perfect: inf s_(k+1)/s_k = {0:e}")]
    NotUniformlyPerfect(f64),

    #[error("scale {scale:e} below resolution {resolution:e}; deepen approximation")]
    Resolution { scale: f64, resolution: f64 },

    #[error("theta {0} must lie strictly inside (0, 1)")]
    Theta(f64),

    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
