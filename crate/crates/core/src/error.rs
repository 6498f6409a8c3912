use thiserror::Error;

/// Errors raised by the lattice complex, its operators, and the limit harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid index map: {0}")]
    InvalidIndexMap(String),

    #[error("a degree-0 cube has no boundary")]
    NoBoundary,

    #[error("a top-degree cube (degree {0}) has no cofaces")]
    NoCofaces(usize),

    #[error("operator `{op}` is not defined on degree {degree} in dimension {ambient_dim}")]
    DegreeOutOfRange {
        op: &'static str,
        degree: usize,
        ambient_dim: usize,
    },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("mesh mismatch: {0} vs {1}")]
    MeshMismatch(f64, f64),

    #[error("mesh size must be finite and positive, got {0}")]
    InvalidMesh(f64),

    #[error("direction {0} is already present in the multi-index")]
    DirectionPresent(usize),

    #[error("spectral parameter must have nonzero imaginary part, got {re}{im:+}i")]
    RealSpectralParameter { re: f64, im: f64 },

    #[error("slope undefined: need at least 3 mesh sizes, got {0}")]
    SlopeUndefined(usize),

    #[error("mesh sizes must be strictly decreasing")]
    MeshListNotDecreasing,

    #[error(
        "period N = {0} is too small: N >= 3 is required so that no cube is glued to itself \
         (quotients with N < 3 create loops and doubled edges)"
    )]
    PeriodTooSmall(usize),

    #[error("window plateau must lie in (0, 1/2), got {0}")]
    InvalidWindow(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
