//! Runs the pooled-strategy optimizer against the classic baseline on a
//! shifted Rastrigin instance and prints a rank-sum comparison.
//!
//! ```text
//! cargo run --release --example compare_baselines
//! ```

use istratde::{
    make_problem, round_reported, run_canonical_de, run_istratde, summarize, wilcoxon_rank_sum,
    Budget, FunctionId, REPORT_THRESHOLD,
};

fn main() -> istratde::Result<()> {
    let problem = make_problem::<f64>(FunctionId::Rastrigin, 10, 42, false)?;
    let budget = Budget::MaxEvaluations(100_000);
    let runs = 11u64;

    let mut pooled = Vec::new();
    let mut classic = Vec::new();
    for seed in 0..runs {
        let result = run_istratde(&problem, 100, budget, seed, None)?;
        pooled.push(round_reported(
            result.best_value,
            problem.optimum_value(),
            REPORT_THRESHOLD,
        ));
        let result = run_canonical_de(&problem, 100, 0.5, 0.9, budget, seed)?;
        classic.push(round_reported(
            result.best_value,
            problem.optimum_value(),
            REPORT_THRESHOLD,
        ));
    }

    let (pooled_mean, pooled_sd) = summarize(&pooled)?;
    let (classic_mean, classic_sd) = summarize(&classic)?;
    println!("pooled strategies: mean {pooled_mean:.3e} (sd {pooled_sd:.3e})");
    println!("classic rand/1/bin: mean {classic_mean:.3e} (sd {classic_sd:.3e})");

    let comparison = wilcoxon_rank_sum(&pooled, &classic, 0.05)?;
    println!(
        "rank-sum: U = {:.1}, p = {:.3e}, pooled is {:?} at alpha = 0.05",
        comparison.u_statistic, comparison.p_value, comparison.verdict
    );
    Ok(())
}
