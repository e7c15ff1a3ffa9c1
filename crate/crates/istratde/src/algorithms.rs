//! Generation-loop drivers.
//!
//! All drivers share one synchronous-update loop: every reproduction in a
//! generation reads the immutable generation-g snapshot, trials are
//! evaluated as a batch, and replacements commit at the generation barrier.
//! This deliberately differs from the textbook in-place update; it makes a
//! run a pure function of `(problem, n, budget, seed)`, independent of
//! thread count and individual ordering.

use crate::benchmarks::BenchmarkProblem;
use crate::diagnostics::{elitism_from_fitness, normalized_ranks, RunTrace, ELITISM_EPSILON};
use crate::engine::{derive_stream, evaluate_population, indexed_map};
use crate::error::{Error, Result};
use crate::operators::{
    crossover_arith, crossover_bin, crossover_exp, mutate_generalized, mutate_named,
    repair_bounds_in_place, select_greedy, NamedMutation, PopulationRanking,
};
use crate::population::{
    init_population, init_with_sampler, Population, MIN_CLASSIC_POPULATION, MIN_POOL_POPULATION,
};
use crate::real::{cast, Real};
use crate::strategy::{
    strategies_digest, BaseVectorKind, CrossoverKind, StrategyConfig, StrategyDistribution,
    StrategyTuple,
};

/// Stopping rule. Evaluation counting includes the initial population, and
/// a generation only starts if it fits inside the remaining budget, so an
/// evaluation budget is never overshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Budget {
    MaxEvaluations(u64),
    MaxGenerations(u64),
}

/// Execution knobs that do not change results: the worker count for
/// reproduction and evaluation, and how many leading individuals get rank
/// snapshots in the trace (zero disables tracking).
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub workers: usize,
    pub rank_tracking: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            rank_tracking: 0,
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone)]
pub struct RunResult<R: Real> {
    pub best_vector: Vec<R>,
    pub best_value: R,
    pub trace: RunTrace<R>,
    pub evaluations_used: u64,
    pub generations_used: u64,
    /// Final population state, for post-hoc diagnostics.
    pub population: Population<R>,
    /// Digest of the per-individual strategies right after initialization;
    /// must match the digest of `population.strategies()` at any later
    /// generation.
    pub initial_strategy_digest: u64,
}

#[derive(Debug, Clone, Copy)]
enum ReproStyle<R: Real> {
    /// Each individual reproduces with its own frozen strategy.
    Pooled,
    /// Every individual runs rand/1/bin with shared control parameters.
    Canonical { f: R, cr: R },
}

/// Pool-strategy run: one frozen strategy per individual, sampled uniformly
/// from the full or restricted pool at initialization.
pub fn run_istratde<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    budget: Budget,
    seed: u64,
    pool_restriction: Option<&[usize]>,
) -> Result<RunResult<R>> {
    run_istratde_with(
        problem,
        n,
        budget,
        seed,
        pool_restriction,
        &RunOptions::default(),
    )
}

pub fn run_istratde_with<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    budget: Budget,
    seed: u64,
    pool_restriction: Option<&[usize]>,
    opts: &RunOptions,
) -> Result<RunResult<R>> {
    check_budget(budget, n)?;
    let pop = init_population(problem, n, seed, pool_restriction, opts.workers)?;
    run_loop(problem, pop, budget, seed, opts, ReproStyle::Pooled)
}

/// Classic DE/rand/1/bin with shared `f` in [0, 2] and `cr` in [0, 1].
pub fn run_canonical_de<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    f: R,
    cr: R,
    budget: Budget,
    seed: u64,
) -> Result<RunResult<R>> {
    run_canonical_de_with(problem, n, f, cr, budget, seed, &RunOptions::default())
}

pub fn run_canonical_de_with<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    f: R,
    cr: R,
    budget: Budget,
    seed: u64,
    opts: &RunOptions,
) -> Result<RunResult<R>> {
    if f < R::zero() || f > cast::<R>(2.0) {
        return Err(Error::InvalidParameter {
            name: "f",
            value: f.to_f64().unwrap_or(f64::NAN),
            min: 0.0,
            max: 2.0,
        });
    }
    if cr < R::zero() || cr > R::one() {
        return Err(Error::InvalidParameter {
            name: "cr",
            value: cr.to_f64().unwrap_or(f64::NAN),
            min: 0.0,
            max: 1.0,
        });
    }
    check_budget(budget, n)?;
    let tuple = StrategyTuple {
        bl: BaseVectorKind::Rand,
        br: BaseVectorKind::Rand,
        dn: 1,
        cs: CrossoverKind::Binomial,
    };
    let pop = init_with_sampler(
        problem,
        n,
        seed,
        MIN_CLASSIC_POPULATION,
        opts.workers,
        |_| StrategyConfig::with_classic_range(tuple, f, cr),
    )?;
    run_loop(
        problem,
        pop,
        budget,
        seed,
        opts,
        ReproStyle::Canonical { f, cr },
    )
}

/// Pool-strategy run whose discrete components are sampled from explicit
/// categorical distributions instead of the uniform pool.
pub fn run_fixed_distribution<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    budget: Budget,
    seed: u64,
    dist: &StrategyDistribution,
) -> Result<RunResult<R>> {
    run_fixed_distribution_with(problem, n, budget, seed, dist, &RunOptions::default())
}

pub fn run_fixed_distribution_with<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    budget: Budget,
    seed: u64,
    dist: &StrategyDistribution,
    opts: &RunOptions,
) -> Result<RunResult<R>> {
    dist.validate()?;
    check_budget(budget, n)?;
    let pop = init_with_sampler(problem, n, seed, MIN_POOL_POPULATION, opts.workers, |rng| {
        dist.sample(rng)
    })?;
    run_loop(problem, pop, budget, seed, opts, ReproStyle::Pooled)
}

fn check_budget(budget: Budget, n: usize) -> Result<()> {
    if let Budget::MaxEvaluations(limit) = budget {
        if limit < n as u64 {
            return Err(Error::BudgetExhaustedBeforeInit { limit, n });
        }
    }
    Ok(())
}

fn run_loop<R: Real>(
    problem: &BenchmarkProblem<R>,
    mut pop: Population<R>,
    budget: Budget,
    seed: u64,
    opts: &RunOptions,
    style: ReproStyle<R>,
) -> Result<RunResult<R>> {
    let n = pop.len();
    let initial_strategy_digest = strategies_digest(pop.strategies());
    let mut evaluations_used = n as u64;
    let mut generations_used = 0u64;
    let mut trace = RunTrace::new(opts.rank_tracking > 0);
    record_generation(
        &mut trace,
        &pop,
        problem,
        evaluations_used,
        opts.rank_tracking,
    );

    loop {
        let proceed = match budget {
            Budget::MaxGenerations(g) => generations_used < g,
            Budget::MaxEvaluations(limit) => evaluations_used + n as u64 <= limit,
        };
        if !proceed {
            break;
        }

        // Reproduction reads only the generation-g snapshot; each individual
        // draws from its own stream, so order and parallelism are invisible.
        let ranking = PopulationRanking::compute(&pop);
        let trials: Result<Vec<Vec<R>>> = indexed_map(opts.workers, n, |i| {
            reproduce_one(problem, &pop, &ranking, i, seed, style)
        })
        .into_iter()
        .collect();
        let trials = trials?;
        let trial_fitness = evaluate_population(problem, &trials, opts.workers)?;

        // Commit replacements at the generation barrier.
        for (i, (coords, fu)) in trials.into_iter().zip(trial_fitness).enumerate() {
            let replaced = select_greedy(&pop.vectors[i], pop.fitness[i], &coords, fu).2;
            if replaced {
                pop.vectors[i] = coords;
                pop.fitness[i] = fu;
            }
        }
        pop.generation += 1;
        evaluations_used += n as u64;
        generations_used += 1;
        record_generation(
            &mut trace,
            &pop,
            problem,
            evaluations_used,
            opts.rank_tracking,
        );
    }

    let best_index = pop.best_index();
    Ok(RunResult {
        best_vector: pop.vectors[best_index].clone(),
        best_value: pop.fitness[best_index],
        trace,
        evaluations_used,
        generations_used,
        population: pop,
        initial_strategy_digest,
    })
}

/// One reproduction event: mutate with the individual's recipe, cross over,
/// clamp to the box. Consumes only the stream `(seed, g + 1, i)`.
fn reproduce_one<R: Real>(
    problem: &BenchmarkProblem<R>,
    pop: &Population<R>,
    ranking: &PopulationRanking,
    target: usize,
    seed: u64,
    style: ReproStyle<R>,
) -> Result<Vec<R>> {
    let mut rng = derive_stream(seed, pop.generation() + 1, target as u64).rng();
    let parent = pop.vector(target);
    let trial = match style {
        ReproStyle::Pooled => {
            let strategy = pop.strategies()[target];
            let mutant = mutate_generalized(pop, ranking, target, &strategy, &mut rng)?;
            match strategy.cs() {
                CrossoverKind::Binomial => crossover_bin(parent, &mutant, strategy.cr(), &mut rng)?,
                CrossoverKind::Exponential => {
                    crossover_exp(parent, &mutant, strategy.cr(), &mut rng)?
                }
                CrossoverKind::Arithmetic => crossover_arith(parent, &mutant, &mut rng)?,
            }
        }
        ReproStyle::Canonical { f, cr } => {
            let mutant = mutate_named(NamedMutation::Rand1, pop, ranking, target, f, &mut rng)?;
            crossover_bin(parent, &mutant, cr, &mut rng)?
        }
    };
    let mut coords = trial.coords;
    let (lb, ub) = problem.bounds();
    repair_bounds_in_place(&mut coords, lb, ub);
    Ok(coords)
}

fn record_generation<R: Real>(
    trace: &mut RunTrace<R>,
    pop: &Population<R>,
    problem: &BenchmarkProblem<R>,
    evaluations: u64,
    rank_tracking: usize,
) {
    let best = pop.fitness()[pop.best_index()];
    trace.best_so_far.push(best);
    trace.evaluations.push(evaluations);
    trace.elitism_proportion.push(elitism_from_fitness(
        pop.fitness(),
        problem.optimum_value(),
        cast::<R>(ELITISM_EPSILON),
    ));
    if let Some(snapshots) = trace.rank_snapshots.as_mut() {
        let tracked: Vec<usize> = (0..rank_tracking.min(pop.len())).collect();
        let ranks = normalized_ranks(pop.fitness(), &tracked)
            .expect("populations always have at least two individuals");
        snapshots.push((pop.generation(), ranks));
    }
}
