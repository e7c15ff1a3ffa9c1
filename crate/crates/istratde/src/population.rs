//! Population state and initialization.

use rand_chacha::ChaCha8Rng;

use crate::benchmarks::BenchmarkProblem;
use crate::engine::evaluate_population;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::RngStream;
use crate::strategy::{sample_strategy, StrategyConfig};

/// Smallest population the full strategy pool can run on: the worst-case
/// recipe needs two `rand` bases plus four difference pairs, all distinct
/// from the target, so ten distinct non-target indices must exist.
pub const MIN_POOL_POPULATION: usize = 11;

/// Smallest population for the classic single-difference baseline, which
/// draws three distinct non-target indices.
pub const MIN_CLASSIC_POPULATION: usize = 4;

/// One generation of solution vectors with their fitness values and frozen
/// per-individual strategies.
#[derive(Debug, Clone)]
pub struct Population<R: Real> {
    pub(crate) vectors: Vec<Vec<R>>,
    pub(crate) fitness: Vec<R>,
    pub(crate) strategies: Vec<StrategyConfig<R>>,
    pub(crate) generation: u64,
}

impl<R: Real> Population<R> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn vectors(&self) -> &[Vec<R>] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> &[R] {
        &self.vectors[index]
    }

    pub fn fitness(&self) -> &[R] {
        &self.fitness
    }

    pub fn strategies(&self) -> &[StrategyConfig<R>] {
        &self.strategies
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Index of the lowest-fitness individual; ties break to the lowest
    /// index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.fitness.len() {
            if self.fitness[i] < self.fitness[best] {
                best = i;
            }
        }
        best
    }
}

/// Initializes a population for the pooled-strategy algorithms: vectors
/// coordinatewise uniform in the box, fitness evaluated, one strategy
/// sampled per individual from the (optionally restricted) pool.
///
/// Individual `i` consumes the stream `(master_seed, 0, i)`: first its `dim`
/// coordinates, then its strategy draws.
pub fn init_population<R: Real>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    master_seed: u64,
    pool_restriction: Option<&[usize]>,
    workers: usize,
) -> Result<Population<R>> {
    init_with_sampler(
        problem,
        n,
        master_seed,
        MIN_POOL_POPULATION,
        workers,
        |rng| sample_strategy(rng, pool_restriction),
    )
}

/// Shared initializer: the strategy sampler is the only thing the drivers
/// disagree on.
pub(crate) fn init_with_sampler<R, S>(
    problem: &BenchmarkProblem<R>,
    n: usize,
    master_seed: u64,
    min_population: usize,
    workers: usize,
    mut sampler: S,
) -> Result<Population<R>>
where
    R: Real,
    S: FnMut(&mut ChaCha8Rng) -> Result<StrategyConfig<R>>,
{
    if n < min_population {
        return Err(Error::PopulationTooSmall {
            min: min_population,
            got: n,
        });
    }
    let (lb, ub) = problem.bounds();
    if lb >= ub {
        return Err(Error::InvalidBounds {
            lb: lb.to_f64().unwrap_or(f64::NAN),
            ub: ub.to_f64().unwrap_or(f64::NAN),
        });
    }
    let dim = problem.dim();
    let width = ub - lb;
    let mut vectors = Vec::with_capacity(n);
    let mut strategies = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = RngStream::new(master_seed, 0, i as u64).rng();
        let coords: Vec<R> = (0..dim)
            .map(|_| lb + R::sample_unit(&mut rng) * width)
            .collect();
        vectors.push(coords);
        strategies.push(sampler(&mut rng)?);
    }
    let fitness = evaluate_population(problem, &vectors, workers)?;
    Ok(Population {
        vectors,
        fitness,
        strategies,
        generation: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{make_problem, BenchmarkProblem, FunctionId};

    #[test]
    fn init_rejects_small_populations() {
        let p = make_problem::<f64>(FunctionId::Sphere, 3, 1, false).unwrap();
        let err = init_population(&p, 10, 7, None, 1).unwrap_err();
        assert_eq!(err, Error::PopulationTooSmall { min: 11, got: 10 });
    }

    #[test]
    fn init_rejects_degenerate_boxes() {
        let p =
            BenchmarkProblem::<f64>::from_parts(FunctionId::Sphere, 2.0, 2.0, vec![2.0, 2.0], None)
                .unwrap();
        let err = init_population(&p, 16, 7, None, 1).unwrap_err();
        assert_eq!(err, Error::InvalidBounds { lb: 2.0, ub: 2.0 });
    }

    #[test]
    fn init_fills_the_box_with_finite_fitness() {
        let p = make_problem::<f64>(FunctionId::Rastrigin, 10, 5, false).unwrap();
        let pop = init_population(&p, 100, 42, None, 1).unwrap();
        assert_eq!(pop.len(), 100);
        assert_eq!(pop.dim(), 10);
        assert_eq!(pop.generation(), 0);
        let (lb, ub) = p.bounds();
        for v in pop.vectors() {
            assert!(v.iter().all(|&c| c >= lb && c <= ub));
        }
        assert!(pop.fitness().iter().all(|f| f.is_finite()));
    }

    #[test]
    fn init_is_deterministic() {
        let p = make_problem::<f64>(FunctionId::Ackley, 4, 5, false).unwrap();
        let a = init_population(&p, 12, 9, None, 1).unwrap();
        let b = init_population(&p, 12, 9, None, 1).unwrap();
        assert_eq!(a.vectors(), b.vectors());
        assert_eq!(a.fitness(), b.fitness());
        assert_eq!(a.strategies(), b.strategies());
    }

    #[test]
    fn restricted_init_only_uses_listed_tuples() {
        let p = make_problem::<f64>(FunctionId::Sphere, 3, 1, false).unwrap();
        let pool = crate::strategy::enumerate_pool();
        let allowed = [4usize, 100, 191];
        let pop = init_population(&p, 50, 11, Some(&allowed), 1).unwrap();
        for s in pop.strategies() {
            assert!(allowed.iter().any(|&k| pool[k] == s.tuple()));
        }
    }

    #[test]
    fn best_index_breaks_ties_low() {
        let p = make_problem::<f64>(FunctionId::Sphere, 1, 1, false).unwrap();
        let mut pop = init_population(&p, 12, 3, None, 1).unwrap();
        pop.fitness = vec![3.0, 1.0, 1.0, 9.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0];
        assert_eq!(pop.best_index(), 1);
    }
}
