use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("normalization error: squared norm {norm} is not positive and finite")]
    Normalization { norm: f64 },

    #[error("range error: {0}")]
    Range(String),

    #[error("node count mismatch: expected {expected} nodes, found {found} (grid too coarse?)")]
    NodeMismatch { expected: usize, found: usize },

    #[error("domain too small: edge amplitude {edge_amplitude:.3e} exceeds {limit:.1e} of the peak")]
    DomainTooSmall { edge_amplitude: f64, limit: f64 },

    #[error("no bound state n={n}: eigenvalue {energy} is not below the continuum edge {continuum}")]
    NoBoundState { n: usize, energy: f64, continuum: f64 },

    #[error("no discrete energy for the {0} family")]
    NoDiscreteEnergy(&'static str),

    #[error("solution overflowed past 1e300 after x = {last_x}")]
    Growth { last_x: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
