use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameter or scenario configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A camera was queried after it failed.
    #[error("camera of drone {0} is not operational")]
    CameraFault(usize),

    /// Pose, similarity or flow estimation failed on degenerate input.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// A pixel window reaches outside the frame.
    #[error("window of half-width {half} at ({x}, {y}) exceeds {width}x{height} frame")]
    Bounds {
        x: usize,
        y: usize,
        half: usize,
        width: usize,
        height: usize,
    },

    /// Evaluation point coincides with an obstacle inside the repulsion cutoff.
    #[error("potential singularity: point coincides with an obstacle")]
    Singularity,

    /// No drone has a working camera.
    #[error("total camera failure: no drone can localize the swarm")]
    TotalFailure,

    /// Leader election requested while every camera works.
    #[error("no blind drone: the swarm should stay in homogeneous mode")]
    NoBlindDrone,

    /// No observation available to build an estimate.
    #[error("estimate unavailable: {0}")]
    EstimateUnavailable(String),

    /// Landing metrics need at least one touchdown.
    #[error("metrics unavailable: run has no touchdowns")]
    MetricsUnavailable,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn estimation(msg: impl Into<String>) -> Self {
        Error::Estimation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
