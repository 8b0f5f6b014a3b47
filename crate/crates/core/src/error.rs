use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("topology: {0}")]
    Topology(String),

    #[error("degenerate element {id}: signed area {area:e}")]
    DegenerateElement { id: usize, area: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("boundary path is not closed (gap {gap:e})")]
    OpenPath { gap: f64 },

    #[error("boundary path is clockwise (signed area {area:e})")]
    Orientation { area: f64 },

    #[error("point ({x}, {y}) lies outside element {element}")]
    Containment { element: usize, x: f64, y: f64 },

    #[error("clipping failed: {0}")]
    Clip(String),

    #[error("upstream element {element} is invalid: {reason}")]
    Upstream { element: usize, reason: String },

    #[error("characteristic trace failed at ({x}, {y}): {reason}")]
    Trace { x: f64, y: f64, reason: String },

    #[error("ill-conditioned least-squares fit for element {element} (min singular value {sigma:e})")]
    Conditioning { element: usize, sigma: f64 },

    #[error("remap closure violated for element {element}: covered {covered:e} vs upstream {upstream:e}")]
    Closure {
        element: usize,
        covered: f64,
        upstream: f64,
    },

    #[error("step failed for element {element}")]
    Step {
        element: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
