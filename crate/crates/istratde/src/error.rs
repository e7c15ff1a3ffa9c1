use thiserror::Error;

/// Errors surfaced by the optimizer core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pool restriction is empty")]
    EmptyPoolRestriction,

    #[error("pool index {0} out of range (pool has {1} entries)")]
    InvalidPoolIndex(usize, usize),

    #[error("population size {got} is below the minimum {min}")]
    PopulationTooSmall { min: usize, got: usize },

    #[error("invalid bounds: lower bound {lb} must be strictly below upper bound {ub}")]
    InvalidBounds { lb: f64, ub: f64 },

    #[error("not enough distinct individuals: need {needed} besides the target, population has {available}")]
    InsufficientPopulation { needed: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least two individuals to compute normalized ranks")]
    TooFewIndividuals,

    #[error("rank-sum samples need at least 3 values, got {0}")]
    SampleTooSmall(usize),

    #[error("cannot summarize an empty sample")]
    EmptySample,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("problem dimension must be at least 1")]
    UnsupportedDimension,

    #[error("budget of {limit} evaluations cannot cover initialization of {n} individuals")]
    BudgetExhaustedBeforeInit { limit: u64, n: usize },

    #[error("parameter {name} = {value} lies outside [{min}, {max}]")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
