//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by geometry construction, simulation, estimation and I/O.
#[derive(Error, Debug)]
pub enum Error {
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("degenerate seeds: {0}")]
    DegenerateSeeds(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("point ({0}, {1}) lies outside the window")]
    OutOfDomain(f64, f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("simulation overflow: {0}")]
    SimulationOverflow(String),
    #[error("insufficient points: need at least {need}, have {have}")]
    InsufficientPoints { need: usize, have: usize },
    #[error("degenerate pilot intensity: {0}")]
    DegeneratePilot(String),
    #[error("bandwidth selection failed: {0}")]
    SelectionFailure(String),
    #[error("invalid intensity: {0}")]
    InvalidIntensity(String),
    #[error("infinite edge-correction weight for displacement ({0}, {1})")]
    InfiniteWeight(f64, f64),
    #[error("config error: {0}")]
    Config(String),
    #[error("optimizer failed to converge: {0}")]
    NonConvergence(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code class for the CLI: 2 config/input, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            UnsupportedGeometry(_) | DegenerateSeeds(_) | InvalidPartition(_)
            | OutOfDomain(..) | Domain(_) | Config(_) | Parse(_)
            | InsufficientPoints { .. } => 2,
            SimulationOverflow(_) | DegeneratePilot(_) | SelectionFailure(_)
            | InvalidIntensity(_) | InfiniteWeight(..) | NonConvergence(_)
            | Sampling(_) => 3,
            Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
