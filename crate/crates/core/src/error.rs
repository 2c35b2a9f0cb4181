use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate basis: residual of vector {index} is {residual:e}")]
    DegenerateBasis { index: usize, residual: f64 },
    #[error("constant undefined: {0}")]
    ConstantUndefined(String),
    #[error("subspaces too far apart for an inverse projection (dgras = {0})")]
    AngleTooLarge(f64),
    #[error("vector not in domain: {0}")]
    NotInDomain(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no common ray found for the two cones")]
    IntersectionNotWitnessed,
    #[error("subspace leaves the cone: min |Q_H v| = {min_ratio} < delta = {delta}")]
    NotInCone { min_ratio: f64, delta: f64 },
    #[error("no convergence after {0} stages")]
    MaxStagesExceeded(usize),
    #[error("simplex has zero diameter")]
    ZeroDiameter,
    #[error("{0} vertices exceed the permutation budget")]
    TooManyVertices(usize),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("empty point set")]
    EmptySet,
    #[error("too few points: need {needed}, have {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("ball contains no cloud points")]
    EmptyBall,
    #[error("too few points at radius {radius}: {got} < {needed}")]
    InsufficientPoints { radius: f64, needed: usize, got: usize },
    #[error("fiber at node {node:?} has spread {spread} (threshold {threshold})")]
    MultiSheet { node: Vec<f64>, spread: f64, threshold: f64 },
    #[error("only {0} usable node pairs")]
    InsufficientPairs(usize),
    #[error("{tuples:e} tuples exceed the enumeration budget {budget:e}")]
    BudgetExceeded { tuples: f64, budget: f64 },
    #[error("p = {p} is not above the critical exponent m(m+2) = {critical}")]
    SubcriticalExponent { p: f64, critical: f64 },
    #[error("no valid h0 for delta = {0}")]
    NoValidH0(f64),
    #[error("no cloud point near axis target {axis} at stage {stage}")]
    TargetPointMissing { stage: usize, axis: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
