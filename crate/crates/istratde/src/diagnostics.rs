//! Run diagnostics: convergence traces, the elite-fraction curve, and
//! normalized fitness ranks.

use crate::error::{Error, Result};
use crate::population::Population;
use crate::real::Real;

/// Default tolerance for counting an individual as having reached the
/// optimum.
pub const ELITISM_EPSILON: f64 = 1e-8;

/// Per-generation record of one run.
///
/// `best_so_far` is non-increasing by construction of greedy selection;
/// `evaluations` is the cumulative evaluation count after each generation;
/// `elitism_proportion` is the fraction of the population within
/// [`ELITISM_EPSILON`] of the optimum. Rank snapshots are recorded only when
/// tracking is enabled.
#[derive(Debug, Clone, Default)]
pub struct RunTrace<R: Real> {
    pub best_so_far: Vec<R>,
    pub evaluations: Vec<u64>,
    pub elitism_proportion: Vec<f64>,
    pub rank_snapshots: Option<Vec<(u64, Vec<f64>)>>,
}

impl<R: Real> RunTrace<R> {
    pub(crate) fn new(track_ranks: bool) -> Self {
        Self {
            best_so_far: Vec::new(),
            evaluations: Vec::new(),
            elitism_proportion: Vec::new(),
            rank_snapshots: track_ranks.then(Vec::new),
        }
    }

    pub fn generations(&self) -> usize {
        self.best_so_far.len()
    }
}

/// Fraction of individuals whose fitness is within `epsilon` of the known
/// optimum value.
pub fn elitism_proportion<R: Real>(pop: &Population<R>, optimum_value: R, epsilon: R) -> f64 {
    elitism_from_fitness(pop.fitness(), optimum_value, epsilon)
}

pub(crate) fn elitism_from_fitness<R: Real>(fitness: &[R], optimum_value: R, epsilon: R) -> f64 {
    if fitness.is_empty() {
        return 0.0;
    }
    let hits = fitness
        .iter()
        .filter(|&&f| f - optimum_value < epsilon)
        .count();
    hits as f64 / fitness.len() as f64
}

/// Normalized fitness ranks for the tracked indices.
///
/// The unique best maps to 0 and the unique worst to 1; ties receive
/// midranks. rank(i) = (#strictly smaller + 0.5 * ties excluding self)
/// divided by N - 1.
pub fn normalized_ranks<R: Real>(fitness: &[R], tracked: &[usize]) -> Result<Vec<f64>> {
    let n = fitness.len();
    if n < 2 {
        return Err(Error::TooFewIndividuals);
    }
    let all = rank_all(fitness);
    Ok(tracked.iter().map(|&i| all[i]).collect())
}

/// Midrank positions for every index, normalized by N - 1.
fn rank_all<R: Real>(fitness: &[R]) -> Vec<f64> {
    let n = fitness.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        fitness[a]
            .partial_cmp(&fitness[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ranks = vec![0.0; n];
    let denom = (n - 1) as f64;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && fitness[order[end]] == fitness[order[start]] {
            end += 1;
        }
        // Tied block [start, end): smaller = start, ties excluding self =
        // end - start - 1.
        let rank = (start as f64 + 0.5 * (end - start - 1) as f64) / denom;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}
