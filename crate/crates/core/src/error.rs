use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular inversion: entry at index 0 is zero")]
    SingularInversion,

    #[error("frequency {gamma} violates the spectral band |gamma| < {limit}")]
    BandViolation { gamma: f64, limit: f64 },

    #[error("mode n = {n} sits on the band edge (vanishing denominator)")]
    BoundaryMode { n: u64 },

    #[error("resonant denominator at lattice index k = {k}")]
    Resonance { k: u64 },

    #[error("no admissible indicial root: {0}")]
    IndicialUnsolvable(String),

    #[error("pole encountered at z = {z}")]
    Pole { z: Complex64 },

    #[error("root and pole lists share the point z = {z}")]
    CommonRootPole { z: Complex64 },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("overflow during integration at x = {x}")]
    Overflow { x: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
