use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate mesh: edge {edge} has length {length:e} <= threshold {threshold:e}")]
    DegenerateMesh {
        edge: usize,
        length: f64,
        threshold: f64,
    },

    #[error("mesh collapse after step: edge {edge} has length {length:e} <= threshold {threshold:e}")]
    MeshCollapse {
        edge: usize,
        length: f64,
        threshold: f64,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation not supported in dimension {0}")]
    UnsupportedDimension(usize),

    #[error("turning angles sum to {turns} turns, not an integer")]
    InconsistentRotation { turns: f64 },

    #[error("monitor evaluated to {value} at vertex {vertex}; it must be positive")]
    InvalidMonitor { vertex: usize, value: f64 },

    #[error("solver failure: no usable pivot in column {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("solver accuracy: scaled residual {residual:e} exceeds {tolerance:e}")]
    Accuracy { residual: f64, tolerance: f64 },

    #[error("circle radius reached {radius} at t = {t}")]
    BlowDown { t: f64, radius: f64 },

    #[error("analytic reference unavailable: {0}")]
    UnsupportedReference(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("eoc undefined at row {row}: errors must be positive")]
    UndefinedEoc { row: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
