use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("points are antipodal; the connecting great-circle arc is not unique")]
    AntipodalPoints,
    #[error("points coincide; the connecting arc has zero length")]
    CoincidentPoints,
    #[error("point is not on the unit sphere (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("quadrature did not reach relative tolerance {tolerance:e} after {panels} panels")]
    QuadratureNonconvergence { tolerance: f64, panels: usize },
    #[error("node {node} has degree {degree}, expected 2")]
    DegreeViolation { node: u64, degree: usize },
    #[error("segment set splits into more than one cycle ({visited} of {total} segments reached)")]
    Disconnected { visited: usize, total: usize },
    #[error("segment endpoints at node {node} disagree by {gap:e}")]
    EndpointMismatch { node: u64, gap: f64 },
    #[error("unknown design family `{0}`")]
    UnknownFamily(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("design set has odd size {0}; the construction needs an even number of points")]
    OddSetSize(usize),
    #[error("weights must be positive and sum to 1 (sum {sum})")]
    WeightInvariantViolation { sum: f64 },
    #[error("base curve reaches the south pole (min first coordinate {min})")]
    SouthPoleViolation { min: f64 },
    #[error("phase function does not close: theta(0) - theta(1) = {gap} is not a multiple of 2pi")]
    PhaseClosureViolation { gap: f64 },
    #[error("theta1(0) = {value} lies in the excluded set m*pi - 2n*pi/t")]
    PhaseExclusionViolation { value: f64 },
    #[error("smoothing windows overlap: budget {delta} too large for the curve")]
    BudgetTooSmall { delta: f64 },
    #[error("fibers are orthogonal; the horizontal lift endpoint is not unique")]
    OrthogonalFibers,
    #[error("start point already lies on the target fiber")]
    SameFiber,
    #[error("projective points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("point {third} lies on the interior of tree edge ({a}, {b})")]
    EdgeThroughPoint { a: usize, b: usize, third: usize },
    #[error("tree edge ({0}, {1}) has length pi/2; its lift is not unique")]
    EdgeTooLong(usize, usize),
    #[error("could not obtain a simple cycle after {0} phase re-draws")]
    SimplicityFailure(usize),
    #[error("delta {delta} outside the admissible interval (0, {max})")]
    DeltaOutOfRange { delta: f64, max: f64 },
    #[error("design fails verification at strength {t} (max defect {max_defect:e})")]
    StrengthViolation { t: usize, max_defect: f64 },
    #[error("gon members do not form a regular polygon on a planar section: {0}")]
    GonNotSubset(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
