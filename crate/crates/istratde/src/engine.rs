//! Deterministic parallel execution substrate.
//!
//! Work is fanned out over a thread pool, but every result is written to a
//! pre-assigned slot computed from immutable inputs, so any worker count
//! (including 1) produces bit-identical output.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::iter::{IntoParallelIterator, ParallelIterator};
use rayon::ThreadPool;

use crate::benchmarks::{evaluate, BenchmarkProblem};
use crate::error::Result;
use crate::real::Real;
use crate::rng::RngStream;

/// Derives the independent random stream for one reproduction event.
///
/// Pure function of its inputs; the `(generation, individual_index)` grid is
/// collision-free because the triple is packed injectively into the stream
/// key.
pub fn derive_stream(master_seed: u64, generation: u64, individual_index: u64) -> RngStream {
    RngStream::new(master_seed, generation, individual_index)
}

/// Lazily built pools, one per requested worker count, reused across calls.
fn pool_for(workers: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = pools.lock().expect("thread-pool registry poisoned");
    guard
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("failed to build evaluation thread pool"),
            )
        })
        .clone()
}

/// Runs an indexed map either sequentially (`workers <= 1`) or on a pool of
/// the requested size. Output order always matches input order.
pub(crate) fn indexed_map<T, F>(workers: usize, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers <= 1 {
        (0..len).map(f).collect()
    } else {
        pool_for(workers).install(|| (0..len).into_par_iter().map(f).collect())
    }
}

/// Evaluates a batch of vectors row-by-row. Rows are independent, so the
/// output is bit-identical for any worker count.
pub fn evaluate_population<R: Real>(
    problem: &BenchmarkProblem<R>,
    vectors: &[Vec<R>],
    workers: usize,
) -> Result<Vec<R>> {
    let results = indexed_map(workers, vectors.len(), |i| evaluate(problem, &vectors[i]));
    results.into_iter().collect()
}
