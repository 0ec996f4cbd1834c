use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("invalid inversion point: {0}")]
    InvalidInversionPoint(String),
    #[error("an S3 curve needs an inversion point to reach R3")]
    MissingInversionPoint,
    #[error("point maps to infinity under stereographic projection{}", .t.map(|t| format!(" (t = {t})")).unwrap_or_default())]
    PointAtInfinity { t: Option<f64> },
    #[error("a closed polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("non-generic projection direction: {0}")]
    NonGenericDirection(String),
    #[error("no generic projection direction found in {0} draws")]
    GenericityExhausted(usize),
    #[error("{0} crossings exceed the state-sum limit")]
    TooManyCrossings(usize),
    #[error("invalid Gauss code: {0}")]
    InvalidGaussCode(String),
    #[error("projection directions disagree: {0}")]
    InconsistentProjections(String),
    #[error("expected a hexagon, got {0} vertices")]
    NotAHexagon(usize),
    #[error("invariant unstable under refinement: {0}")]
    UnstableInvariant(String),
    #[error("invalid six-tuple: {0}")]
    InvalidTuple(String),
    #[error("degenerate chord between points {0} and {1}")]
    DegenerateChord(usize, usize),
    #[error("points are not coplanar (normalized residual {0:e})")]
    NotCoplanar(f64),
    #[error("window contains another configuration parameter")]
    WindowTooLarge,
    #[error("unclassifiable planar configuration: {0}")]
    UnclassifiableConfig(String),
    #[error("missing crossing: {0}")]
    MissingCrossing(String),
    #[error("one-sided set outside the covered cases: {0}")]
    UncoveredCase(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("parameters {0} and {1} merged")]
    OrderingCollapse(usize, usize),
    #[error("tangent space has dimension {0}, expected 1")]
    TangentDegenerate(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
