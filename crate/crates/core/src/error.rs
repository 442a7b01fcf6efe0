use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value {value} at node {node} (r = {r})")]
    Evaluation { node: usize, r: f64, value: f64 },

    #[error("ODE integration failed at x = {x}: {reason}")]
    Integration { x: f64, reason: String },

    #[error("root not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("grid too small for channel l = {ell}: {reason}")]
    GridExtension { ell: usize, reason: String },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("in channel l = {ell}: {source}")]
    Channel {
        ell: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("at Z = {z}: {source}")]
    AtCharge {
        z: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("corrupt cache entry {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_channel(self, ell: usize) -> Self {
        Error::Channel {
            ell,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_charge(self, z: u32) -> Self {
        Error::AtCharge {
            z,
            source: Box::new(self),
        }
    }

    /// Module-qualified origin, used in CLI messages.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Evaluation { .. }
            | Error::Integration { .. }
            | Error::Bracket { .. }
            | Error::Grid(_) => "numerics",
            Error::Domain(_) | Error::Divergence(_) => "model",
            Error::GridExtension { .. } | Error::Channel { .. } => "spectrum",
            Error::AtCharge { .. } => "bounds",
            Error::Argument(_) | Error::Config(_) => "config",
            Error::CacheCorrupt { .. } => "cache",
            Error::Io(_) => "io",
        }
    }
}
