use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use istratde::{Budget, FunctionId, StrategyDistribution};
use istratde_harness::{
    compare_experiments, default_worker_count, pool_census, population_scaling_sweep, read_summary,
    run_experiment, write_census, Algorithm, ExperimentSpec, HarnessError, ProblemSpec, Result,
};

/// Experiment runner for pool-strategy differential evolution.
///
/// Exit codes: 0 on success, 2 on configuration errors, 1 on runtime errors.
#[derive(Debug, Parser)]
#[command(name = "istratde", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment (repeated independent runs of one algorithm).
    Run(RunArgs),
    /// Compare two experiment summaries with the rank-sum test.
    Compare(CompareArgs),
    /// Run the experiment across several population sizes at equal budget.
    Sweep(SweepArgs),
    /// Tally strategy draws to inspect sampling uniformity.
    PoolCensus(CensusArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    #[value(name = "istratde")]
    Istratde,
    #[value(name = "canonical_de")]
    CanonicalDe,
    #[value(name = "fixed_distribution")]
    FixedDistribution,
    #[value(name = "restricted_pool")]
    RestrictedPool,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(value: AlgorithmArg) -> Self {
        match value {
            AlgorithmArg::Istratde => Algorithm::Istratde,
            AlgorithmArg::CanonicalDe => Algorithm::CanonicalDe,
            AlgorithmArg::FixedDistribution => Algorithm::FixedDistribution,
            AlgorithmArg::RestrictedPool => Algorithm::RestrictedPool,
        }
    }
}

#[derive(Debug, Args)]
struct ProtocolArgs {
    /// Objective function.
    #[arg(long)]
    function: FunctionId,

    /// Problem dimension.
    #[arg(long)]
    dim: usize,

    /// Population size.
    #[arg(long)]
    pop: usize,

    /// Evaluation budget (counts the initial population).
    #[arg(long, conflicts_with = "budget_gens")]
    budget_fes: Option<u64>,

    /// Generation budget.
    #[arg(long)]
    budget_gens: Option<u64>,

    /// Independent repetitions; repetition r uses seed `seed + r`.
    #[arg(long, default_value_t = 1)]
    runs: usize,

    /// Master seed (also seeds problem construction).
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Apply a seeded random rotation to the problem.
    #[arg(long, default_value_t = false)]
    rotate: bool,

    /// Comma-separated pool indices for the restricted-pool variant.
    #[arg(long, value_delimiter = ',')]
    pool_indices: Option<Vec<usize>>,

    /// Worker threads (default: ISTRATDE_WORKERS or 1).
    #[arg(long)]
    workers: Option<usize>,

    /// Record every k-th generation in trace CSVs.
    #[arg(long, default_value_t = 1)]
    trace_stride: usize,

    /// Track normalized ranks for the first k individuals (0 disables).
    #[arg(long, default_value_t = 0)]
    track_ranks: usize,

    /// Scale factor for canonical_de.
    #[arg(long, default_value_t = 0.5)]
    de_f: f64,

    /// Crossover rate for canonical_de.
    #[arg(long, default_value_t = 0.9)]
    de_cr: f64,

    /// Base-vector weights (rand,best,pbest,current) for fixed_distribution.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    dist_vector: Option<Vec<f64>>,

    /// Difference-count weights (dn=1..4) for fixed_distribution.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    dist_pairs: Option<Vec<f64>>,

    /// Crossover weights (bin,exp,arith) for fixed_distribution.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    dist_crossover: Option<Vec<f64>>,
}

impl ProtocolArgs {
    fn budget(&self) -> Result<Budget> {
        match (self.budget_fes, self.budget_gens) {
            (Some(fes), None) => Ok(Budget::MaxEvaluations(fes)),
            (None, Some(gens)) => Ok(Budget::MaxGenerations(gens)),
            _ => Err(HarnessError::InvalidSpec(
                "exactly one of --budget-fes and --budget-gens is required".into(),
            )),
        }
    }

    fn distribution(&self) -> Option<StrategyDistribution> {
        match (&self.dist_vector, &self.dist_pairs, &self.dist_crossover) {
            (None, None, None) => None,
            (vector, pairs, crossover) => {
                let mut dist = StrategyDistribution::uniform();
                if let Some(v) = vector {
                    dist.vector_kind = [v[0], v[1], v[2], v[3]];
                }
                if let Some(p) = pairs {
                    dist.diff_count = [p[0], p[1], p[2], p[3]];
                }
                if let Some(c) = crossover {
                    dist.crossover = [c[0], c[1], c[2]];
                }
                Some(dist)
            }
        }
    }

    fn spec(&self, algorithm: Algorithm) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::new(
            algorithm,
            ProblemSpec {
                function: self.function,
                dim: self.dim,
                seed: self.seed,
                rotate: self.rotate,
            },
            self.pop,
            self.budget()?,
        );
        spec.runs = self.runs;
        spec.master_seed = self.seed;
        spec.trace_stride = self.trace_stride;
        spec.rank_tracking = self.track_ranks;
        spec.workers = self.workers.unwrap_or_else(default_worker_count);
        spec.de_f = self.de_f;
        spec.de_cr = self.de_cr;
        spec.pool_indices = self.pool_indices.clone();
        spec.distribution = match algorithm {
            Algorithm::FixedDistribution => Some(
                self.distribution()
                    .unwrap_or_else(StrategyDistribution::uniform),
            ),
            _ => self.distribution(),
        };
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Algorithm to run.
    #[arg(long)]
    algo: AlgorithmArg,

    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Output directory for trace CSVs and summary.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// First summary.json (its perspective defines the verdict).
    #[arg(long)]
    a: PathBuf,

    /// Second summary.json.
    #[arg(long)]
    b: PathBuf,

    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Write the comparison record here (stdout always gets a one-liner).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Algorithm to sweep.
    #[arg(long, default_value = "istratde")]
    algo: AlgorithmArg,

    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Comma-separated population sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,

    /// Output directory; per-size results land in pop-<N> subdirectories.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Number of strategy draws.
    #[arg(long, default_value_t = 100_000)]
    draws: u64,

    /// Stream seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Optional comma-separated pool restriction.
    #[arg(long, value_delimiter = ',')]
    pool_indices: Option<Vec<usize>>,

    /// Output file for the census JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.protocol.spec(args.algo.into())?;
            let summary = run_experiment(&spec, &args.out)?;
            println!(
                "{} on {} {}D: mean {:.6e} (sd {:.6e}) over {} runs -> {}",
                spec.algorithm,
                spec.problem.function,
                spec.problem.dim,
                summary.mean,
                summary.std_dev,
                spec.runs,
                args.out.display()
            );
            Ok(())
        }
        Command::Compare(args) => {
            let a = read_summary(&args.a)?;
            let b = read_summary(&args.b)?;
            let record = compare_experiments(&a, &b, args.alpha)?;
            println!(
                "{} vs {}: {} (p = {:.4e}, U = {:.1}, alpha = {})",
                record.a_algorithm,
                record.b_algorithm,
                record.symbol,
                record.p_value,
                record.u_statistic,
                record.alpha
            );
            if let Some(path) = args.out {
                let text = serde_json::to_string_pretty(&record).map_err(HarnessError::from)?;
                std::fs::write(&path, text + "\n").map_err(HarnessError::from)?;
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let spec = args.protocol.spec(args.algo.into())?;
            let fe_budget = match spec.budget {
                Budget::MaxEvaluations(fes) => fes,
                Budget::MaxGenerations(_) => {
                    return Err(HarnessError::InvalidSpec(
                        "sweep requires --budget-fes".into(),
                    ))
                }
            };
            let report = population_scaling_sweep(&spec, &args.sizes, fe_budget, &args.out)?;
            for row in &report.sizes {
                println!(
                    "pop {:>6}: mean {:.6e} (sd {:.6e}) median {:.6e} normalized {:.3}",
                    row.population, row.mean, row.std_dev, row.median, row.normalized_mean
                );
            }
            Ok(())
        }
        Command::PoolCensus(args) => {
            let report = pool_census(args.draws, args.seed, args.pool_indices.as_deref())?;
            println!(
                "{} draws over {} tuples: expected {:.2} per tuple, count sd {:.2}",
                report.draws,
                report
                    .pool_indices
                    .as_ref()
                    .map_or(istratde::POOL_SIZE, Vec::len),
                report.expected_per_tuple,
                report.count_std_dev
            );
            if let Some(path) = args.out {
                write_census(&report, &path)?;
            }
            Ok(())
        }
    }
}
