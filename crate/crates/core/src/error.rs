use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("points {0} and {1} coincide within tolerance")]
    DegenerateCoincident(usize, usize),
    #[error("spheres around the two points meet in at most one point")]
    DegenerateEmptyOrPoint,
    #[error("point lies on the circle axis")]
    AxisDegenerate,
    #[error("point at distance {0} from the apex, expected 1")]
    NotOnSphere(f64),
    #[error("circumradius {0} is not below 1")]
    NotFullDimensional(f64),
    #[error("no unit ball separates the point from the set")]
    NotSeparable,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("configuration is not tight; inessential labels {0:?}")]
    NotTight(Vec<usize>),
    #[error("tolerance conflict: {0}")]
    ToleranceConflict(String),
    #[error("non-generic structure not supported: {0}")]
    NonGenericUnsupported(String),
    #[error("input is not extremal: {0}")]
    NotExtremalInput(String),
    #[error("extremality criteria disagree: e(V)=2n-2 is {count_says}, tight and V=vert B(V) is {structure_says}")]
    GhsCrossCheckFailure { count_says: bool, structure_says: bool },
    #[error("self-duality check failed: {0}")]
    DualityFailure(String),
    #[error("facet {0} has no interior barycenter")]
    BarycenterFallback(usize),
    #[error("order {0} too small, need at least 3")]
    InvalidOrder(usize),
    #[error("complex too large for exhaustive enumeration ({0} faces in one tier)")]
    TooLarge(usize),
    #[error("arc selection is not pairwise adjacent: {0}")]
    InvalidArcSelection(String),
    #[error("reuleaux tuning needs odd n, got {0}")]
    InvalidParity(usize),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("truncation failed re-verification: {0}")]
    TruncationTooCoarse(String),
    #[error("placements on edge {0} and its dual edge {1}")]
    DualEdgeConflict(usize, usize),
    #[error("points {0} and {1} are duplicates")]
    DuplicatePoints(usize, usize),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit status: 2 for failed cross-checks, 3 for tolerance or
    /// genericity trouble, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::GhsCrossCheckFailure { .. } | Error::DualityFailure(_) | Error::InternalInvariantViolation(_) => 2,
            Error::ToleranceConflict(_) | Error::NonGenericUnsupported(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
