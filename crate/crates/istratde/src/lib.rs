//! Differential evolution with individual-level strategy diversity.
//!
//! Each individual receives a random, immutable mutation/crossover recipe
//! from a 192-configuration pool at initialization, together with its own
//! control parameters, and keeps them for the whole run. The crate bundles
//! the pooled-strategy optimizer, a classic DE/rand/1/bin baseline, a
//! shifted-rotated benchmark suite with known optima, deterministic parallel
//! execution, run diagnostics, and rank-sum statistics for comparing runs.
//!
//! The numeric core is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `*64` aliases below pin the common `f64` choice.
//!
//! ```
//! use istratde::{make_problem, run_istratde, Budget, FunctionId};
//!
//! let problem = make_problem::<f64>(FunctionId::Rastrigin, 5, 7, false).unwrap();
//! let result = run_istratde(&problem, 40, Budget::MaxEvaluations(4_000), 1, None).unwrap();
//! assert!(result.trace.best_so_far.windows(2).all(|w| w[1] <= w[0]));
//! ```

mod algorithms;
mod benchmarks;
mod diagnostics;
mod engine;
mod error;
mod operators;
mod population;
mod real;
mod rng;
mod stats;
mod strategy;

pub use algorithms::{
    run_canonical_de, run_canonical_de_with, run_fixed_distribution, run_fixed_distribution_with,
    run_istratde, run_istratde_with, Budget, RunOptions, RunResult,
};
pub use benchmarks::{
    determinant, evaluate, make_problem, orthogonality_error, random_rotation, round_reported,
    BenchmarkProblem, FunctionId, REPORT_THRESHOLD,
};
pub use diagnostics::{elitism_proportion, normalized_ranks, RunTrace, ELITISM_EPSILON};
pub use engine::{derive_stream, evaluate_population};
pub use error::{Error, Result};
pub use operators::{
    crossover_arith, crossover_bin, crossover_exp, mutate_generalized, mutate_named, repair_bounds,
    repair_bounds_in_place, select_base, select_greedy, BaseRef, NamedMutation, PopulationRanking,
    TrialVector,
};
pub use population::{init_population, Population, MIN_CLASSIC_POPULATION, MIN_POOL_POPULATION};
pub use real::{cast, Real};
pub use rng::RngStream;
pub use stats::{summarize, wilcoxon_rank_sum, RankSumReport, Verdict};
pub use strategy::{
    enumerate_pool, fixed_config, pool_index, sample_strategy, strategies_digest, BaseVectorKind,
    CrossoverKind, StrategyConfig, StrategyDistribution, StrategyTuple, PBEST_FRACTION, POOL_SIZE,
};

/// `f64` instantiations of the generic core types.
pub type Problem64 = BenchmarkProblem<f64>;
pub type Population64 = Population<f64>;
pub type StrategyConfig64 = StrategyConfig<f64>;
pub type TrialVector64 = TrialVector<f64>;
pub type RunResult64 = RunResult<f64>;
pub type RunTrace64 = RunTrace<f64>;
