use thiserror::Error;

/// Errors raised by the symbolic layer (expressions, normal ordering, PDOs).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error("continuum and discrete operators mixed in one product")]
    MixedModes,
    #[error("axis {axis} exceeds momentum dimension {dim}")]
    AxisOutOfRange { axis: u8, dim: u8 },
    #[error("bound label `{0}` does not occur in its term")]
    UnusedBound(String),
    #[error("label `{0}` is bound, cannot differentiate with respect to it")]
    LabelNotFree(String),
    #[error("discrete operators carry no momentum derivative")]
    DiscreteDerivative,
    #[error("PDO operands use different mass parameters ({0} vs {1})")]
    MassMismatch(String, String),
    #[error("PDO operands use different dimensions ({0} vs {1})")]
    DimensionMismatch(u8, u8),
    #[error("momentum dimension must be 1, 2 or 3, got {0}")]
    BadDimension(u8),
}

/// Parser rejection with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Errors from the numerical block-operator layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("operator kind {0} is not defined for dimension {1}")]
    KindDimension(String, u8),
    #[error("coupling requires distinct blocks, got {0} and {0}")]
    SameBlock(usize),
    #[error("block index {0} out of range (species count {1})")]
    BlockOutOfRange(usize, usize),
    #[error("total dimension {0} exceeds the cap of {1}")]
    DimensionCap(usize, usize),
    #[error("nested bracket depth {0} exceeds the cap of {1}")]
    DepthCap(usize, usize),
    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("atom `{0}` has no numeric value bound")]
    UnboundAtom(String),
    #[error("operator is not self-adjoint (max deviation {0:e})")]
    NotSelfAdjoint(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Invalid(String),
}

/// Errors from the mass-formula laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MassError {
    #[error("singular system: row {row} depends on rows {depends_on:?}")]
    Singular { row: usize, depends_on: Vec<usize> },
    #[error("rank-deficient design matrix (rank {rank} < {columns} parameters)")]
    RankDeficient { rank: usize, columns: usize },
    #[error("negative squared mass {0}: unphysical parameter region")]
    NegativeMassSquared(f64),
    #[error("missing quantum number {0}")]
    MissingQuantumNumber(&'static str),
    #[error("eigenvalue lambda at position {0} is zero")]
    ZeroLambda(usize),
    #[error("length mismatch: {0} masses vs {1} lambdas")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("csv: {0}")]
    Csv(String),
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("{0}")]
    Invalid(String),
}

/// Errors from the spectral-measure module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("intervals [{0}, {1}] and [{2}, {3}] overlap")]
    Overlap(f64, f64, f64, f64),
    #[error("atom at {0} lies inside interval [{1}, {2}]")]
    AtomInInterval(f64, f64, f64),
    #[error("density on [{0}, {1}] is negative near m = {2}")]
    NegativeDensity(f64, f64, f64),
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("measure is not normalized (total {0})")]
    NotNormalized(f64),
    #[error("{0}")]
    Invalid(String),
}
