use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite sample at node {index}")]
    NonFinite { index: usize },

    #[error("sample count {got} does not match grid node count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid exponent {0}: must satisfy p >= 1")]
    InvalidExponent(f64),

    #[error("grid too coarse: {nodes} nodes, need at least {required}")]
    GridTooCoarse { nodes: usize, required: usize },

    #[error("fractional order {alpha} outside (-{dimension}, 2]")]
    FractionalOrder { alpha: f64, dimension: usize },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("|t| = {t} exceeds the validated propagation horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("time {0} is not a snapshot time of the trajectory")]
    NotSnapshotTime(f64),

    #[error("empty time interval [{start}, {end}]")]
    EmptyInterval { start: f64, end: f64 },

    #[error("radius {0} is outside the closed-form region |x| <= 1")]
    OutsideClosedForm(f64),

    #[error("snapshot resolution too coarse: interval {index} closed with mass {mass} > {limit}")]
    ResolutionTooCoarse { index: usize, mass: f64, limit: f64 },

    #[error("interval mass {mass} outside the admissible window [{low}, {high}]")]
    HypothesisViolated { mass: f64, low: f64, high: f64 },

    #[error("every interval is exceptional; no chain can be formed")]
    AllExceptional,

    #[error("pair (q, r) = ({q}, {r}) is not admissible in dimension {dimension}")]
    NotAdmissible { q: String, r: String, dimension: usize },

    #[error("trajectory store: {0}")]
    Store(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
