use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment map constraint violated: max |mu| = {max} exceeds tolerance {tolerance}")]
    MomentMapConstraint { max: f64, tolerance: f64 },

    #[error("zero set is empty")]
    EmptyZeroSet,

    #[error("annulus contains {found} samples, need at least {needed}")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("power-law fit rejected: R^2 = {r_squared} below threshold {threshold}")]
    PoorFit { r_squared: f64, threshold: f64 },

    #[error("loop touches the zero set at site {site}")]
    LoopTouchesZeroSet { site: usize },

    #[error("loop step {step} is not resolvable: angle {angle} >= {limit}")]
    Unresolvable { step: usize, angle: f64, limit: f64 },

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("component {0} has no orientation")]
    UnorientedComponent(usize),

    #[error("component {component} is not a curve: its period lattice has rank {rank}")]
    NotACurve { component: usize, rank: usize },

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
