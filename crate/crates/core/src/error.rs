use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty valuation")]
    EmptyValuation,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid stochastic matrix: {0}")]
    NotStochastic(String),
    #[error("dobrushin coefficient needs at least two rows")]
    TooFewRows,
    #[error("oracle size limit: {0}")]
    OracleSizeLimit(String),
    #[error("multiple invariant measures")]
    MultipleInvariantMeasures,
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("row sum violation at {location}: sum is {sum}")]
    RowSum { location: String, sum: String },
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("policy count {count} exceeds the cap {cap}")]
    PolicyCap { count: u128, cap: u128 },
    #[error("non-finite entries in matrix game")]
    NonFiniteGame,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degenerate: all mass on diagonal")]
    AllMassOnDiagonal,
    #[error("game is not unichain")]
    NotUnichain,
    #[error("game is not irreducible")]
    NotIrreducible,
    #[error("search size cap exceeded: {0}")]
    SearchCap(String),
    #[error("assumption violated (rational transitions with integer payments required): {0}")]
    Assumption(String),
    #[error("multichain policy pair: final classes {0:?}")]
    Multichain(Vec<Vec<usize>>),
    #[error("no pure saddle point found")]
    NoSaddle,
    #[error("iteration budget exceeded: predicted {predicted} iterations, allowed {allowed}")]
    IterationBudget { predicted: u64, allowed: u64 },
    #[error("spectral radius did not converge")]
    SpectralNonConvergence,
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
