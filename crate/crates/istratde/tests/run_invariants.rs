//! Whole-run invariants: determinism across worker counts, trace
//! monotonicity, feasibility, and the single-threaded reference oracle for
//! one generation of the parallel engine.

use istratde::{
    crossover_arith, crossover_bin, crossover_exp, derive_stream, evaluate, init_population,
    make_problem, mutate_generalized, repair_bounds, run_canonical_de_with, run_istratde_with,
    Budget, CrossoverKind, FunctionId, PopulationRanking, RunOptions,
};

fn vector_bits(vectors: &[Vec<f64>]) -> Vec<u64> {
    vectors.iter().flatten().map(|c| c.to_bits()).collect()
}

/// Straight-line single-threaded reference: initialization plus one
/// generation of the pooled algorithm, no batching, no thread pools.
fn reference_generation_one(
    problem: &istratde::Problem64,
    n: usize,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let pop = init_population(problem, n, seed, None, 1).unwrap();
    let ranking = PopulationRanking::compute(&pop);
    let (lb, ub) = problem.bounds();
    let mut vectors: Vec<Vec<f64>> = pop.vectors().to_vec();
    let mut fitness: Vec<f64> = pop.fitness().to_vec();
    for i in 0..n {
        let mut rng = derive_stream(seed, 1, i as u64).rng();
        let strategy = pop.strategies()[i];
        let mutant = mutate_generalized(&pop, &ranking, i, &strategy, &mut rng).unwrap();
        let parent = pop.vector(i);
        let trial = match strategy.cs() {
            CrossoverKind::Binomial => crossover_bin(parent, &mutant, strategy.cr(), &mut rng),
            CrossoverKind::Exponential => crossover_exp(parent, &mutant, strategy.cr(), &mut rng),
            CrossoverKind::Arithmetic => crossover_arith(parent, &mutant, &mut rng),
        }
        .unwrap();
        let repaired = repair_bounds(&trial.coords, lb, ub);
        let trial_fitness = evaluate(problem, &repaired).unwrap();
        if trial_fitness <= fitness[i] {
            vectors[i] = repaired;
            fitness[i] = trial_fitness;
        }
    }
    (vectors, fitness)
}

#[test]
fn parallel_engine_matches_the_straight_line_reference() {
    let problem = make_problem::<f64>(FunctionId::Rastrigin, 3, 5, false).unwrap();
    let seed = 99u64;
    let (ref_vectors, ref_fitness) = reference_generation_one(&problem, 12, seed);
    for workers in [1usize, 4, 8] {
        let result = run_istratde_with(
            &problem,
            12,
            Budget::MaxGenerations(1),
            seed,
            None,
            &RunOptions {
                workers,
                rank_tracking: 0,
            },
        )
        .unwrap();
        assert_eq!(
            vector_bits(result.population.vectors()),
            vector_bits(&ref_vectors),
            "vectors diverge at {workers} workers"
        );
        let fitness_bits: Vec<u64> = result
            .population
            .fitness()
            .iter()
            .map(|f| f.to_bits())
            .collect();
        let ref_bits: Vec<u64> = ref_fitness.iter().map(|f| f.to_bits()).collect();
        assert_eq!(
            fitness_bits, ref_bits,
            "fitness diverges at {workers} workers"
        );
    }
}

#[test]
fn full_runs_are_identical_across_worker_counts() {
    let problem = make_problem::<f64>(FunctionId::Ackley, 5, 2, true).unwrap();
    let baseline = run_istratde_with(
        &problem,
        14,
        Budget::MaxEvaluations(1_400),
        7,
        None,
        &RunOptions {
            workers: 1,
            rank_tracking: 3,
        },
    )
    .unwrap();
    for workers in [2usize, 4] {
        let other = run_istratde_with(
            &problem,
            14,
            Budget::MaxEvaluations(1_400),
            7,
            None,
            &RunOptions {
                workers,
                rank_tracking: 3,
            },
        )
        .unwrap();
        assert_eq!(
            vector_bits(baseline.population.vectors()),
            vector_bits(other.population.vectors())
        );
        assert_eq!(baseline.trace.best_so_far, other.trace.best_so_far);
        assert_eq!(
            baseline.trace.elitism_proportion,
            other.trace.elitism_proportion
        );
        assert_eq!(baseline.trace.rank_snapshots, other.trace.rank_snapshots);
    }
}

#[test]
fn traces_are_monotone_and_feasible_across_algorithms() {
    for function in [FunctionId::Sphere, FunctionId::Rastrigin, FunctionId::Levy] {
        let problem = make_problem::<f64>(function, 4, 3, false).unwrap();
        let (lb, ub) = problem.bounds();
        for seed in 0..4u64 {
            let pooled = run_istratde_with(
                &problem,
                12,
                Budget::MaxGenerations(30),
                seed,
                None,
                &RunOptions::default(),
            )
            .unwrap();
            let classic = run_canonical_de_with(
                &problem,
                12,
                0.5,
                0.9,
                Budget::MaxGenerations(30),
                seed,
                &RunOptions::default(),
            )
            .unwrap();
            for result in [&pooled, &classic] {
                for pair in result.trace.best_so_far.windows(2) {
                    assert!(pair[1] <= pair[0], "best-so-far increased");
                }
                for pair in result.trace.elitism_proportion.windows(2) {
                    assert!(pair[1] >= pair[0] - 1e-15, "elitism proportion decreased");
                }
                for v in result.population.vectors() {
                    assert!(v.iter().all(|&c| c >= lb && c <= ub));
                }
                assert_eq!(
                    result.trace.evaluations.last().copied().unwrap(),
                    result.evaluations_used
                );
            }
        }
    }
}

#[test]
fn evaluations_trace_is_strictly_increasing() {
    let problem = make_problem::<f64>(FunctionId::Griewank, 3, 1, false).unwrap();
    let result = run_istratde_with(
        &problem,
        12,
        Budget::MaxGenerations(20),
        0,
        None,
        &RunOptions::default(),
    )
    .unwrap();
    for pair in result.trace.evaluations.windows(2) {
        assert!(pair[1] > pair[0]);
    }
    assert_eq!(result.trace.evaluations[0], 12);
}

#[test]
fn the_core_also_runs_in_single_precision() {
    let problem = make_problem::<f32>(FunctionId::Sphere, 3, 1, false).unwrap();
    let result = run_istratde_with(
        &problem,
        12,
        Budget::MaxGenerations(40),
        2,
        None,
        &RunOptions::default(),
    )
    .unwrap();
    assert!(result.best_value.is_finite());
    assert!(result.best_value < 1.0f32);
    for pair in result.trace.best_so_far.windows(2) {
        assert!(pair[1] <= pair[0]);
    }
}
