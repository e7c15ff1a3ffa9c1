//! Experiment harness: configuration, multi-run orchestration, and file
//! emission.
//!
//! A run writes one trace CSV per repetition plus one `summary.json`. The
//! trace schema is `generation,evaluations,best_error,elitism_proportion`
//! with non-decreasing generation/evaluations columns and a non-increasing
//! best-error column. Summaries echo the full spec, so a result directory is
//! reproducible from its own header; everything except the recorded
//! wall-clock is a pure function of the spec.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use istratde::{
    make_problem, round_reported, run_canonical_de_with, run_fixed_distribution_with,
    run_istratde_with, sample_strategy, summarize, wilcoxon_rank_sum, Budget, FunctionId,
    Problem64, RngStream, RunOptions, RunResult64, StrategyDistribution, Verdict, POOL_SIZE,
    REPORT_THRESHOLD,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Core(#[from] istratde::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("mismatched protocol: {0}")]
    MismatchedProtocol(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// Process exit code: configuration problems exit 2, runtime failures 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::InvalidSpec(_) | HarnessError::MismatchedProtocol(_) => 2,
            HarnessError::Core(istratde::Error::InvalidParameter { .. })
            | HarnessError::Core(istratde::Error::InvalidDistribution(_)) => 2,
            _ => 1,
        }
    }
}

/// Which driver an experiment exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Istratde,
    CanonicalDe,
    FixedDistribution,
    RestrictedPool,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Algorithm::Istratde => "istratde",
            Algorithm::CanonicalDe => "canonical_de",
            Algorithm::FixedDistribution => "fixed_distribution",
            Algorithm::RestrictedPool => "restricted_pool",
        };
        f.write_str(name)
    }
}

/// Plain-text problem record; a problem is reproducible from these four
/// fields alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub function: FunctionId,
    pub dim: usize,
    pub seed: u64,
    pub rotate: bool,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem64> {
        Ok(make_problem::<f64>(
            self.function,
            self.dim,
            self.seed,
            self.rotate,
        )?)
    }
}

/// Full description of one experiment: the algorithm, the problem, the
/// budget, and the repetition protocol. Repetition `r` runs with seed
/// `master_seed + r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub algorithm: Algorithm,
    pub problem: ProblemSpec,
    pub population: usize,
    pub budget: Budget,
    pub runs: usize,
    pub master_seed: u64,
    #[serde(default = "default_stride")]
    pub trace_stride: usize,
    #[serde(default)]
    pub rank_tracking: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Scale factor for the classic baseline.
    #[serde(default = "default_de_f")]
    pub de_f: f64,
    /// Crossover rate for the classic baseline.
    #[serde(default = "default_de_cr")]
    pub de_cr: f64,
    /// Pool restriction for `restricted_pool` (indices into the documented
    /// enumeration order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool_indices: Option<Vec<usize>>,
    /// Component distributions for `fixed_distribution`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<StrategyDistribution>,
}

fn default_stride() -> usize {
    1
}

fn default_workers() -> usize {
    1
}

fn default_de_f() -> f64 {
    0.5
}

fn default_de_cr() -> f64 {
    0.9
}

impl ExperimentSpec {
    /// A ready-to-run spec with protocol defaults.
    pub fn new(
        algorithm: Algorithm,
        problem: ProblemSpec,
        population: usize,
        budget: Budget,
    ) -> Self {
        Self {
            algorithm,
            problem,
            population,
            budget,
            runs: 1,
            master_seed: 0,
            trace_stride: 1,
            rank_tracking: 0,
            workers: 1,
            de_f: 0.5,
            de_cr: 0.9,
            pool_indices: None,
            distribution: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(HarnessError::InvalidSpec("runs must be >= 1".into()));
        }
        if self.trace_stride == 0 {
            return Err(HarnessError::InvalidSpec(
                "trace stride must be >= 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(HarnessError::InvalidSpec("workers must be >= 1".into()));
        }
        match self.algorithm {
            Algorithm::RestrictedPool => {
                let indices = self.pool_indices.as_ref().ok_or_else(|| {
                    HarnessError::InvalidSpec("restricted_pool requires pool indices".into())
                })?;
                if indices.is_empty() {
                    return Err(HarnessError::InvalidSpec(
                        "pool index list must not be empty".into(),
                    ));
                }
                if let Some(&bad) = indices.iter().find(|&&i| i >= POOL_SIZE) {
                    return Err(HarnessError::InvalidSpec(format!(
                        "pool index {bad} out of range 0..{POOL_SIZE}"
                    )));
                }
            }
            Algorithm::FixedDistribution => {
                let dist = self.distribution.as_ref().ok_or_else(|| {
                    HarnessError::InvalidSpec(
                        "fixed_distribution requires component distributions".into(),
                    )
                })?;
                dist.validate().map_err(HarnessError::Core)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn dispatch(&self, problem: &Problem64, seed: u64) -> Result<RunResult64> {
        let opts = RunOptions {
            workers: self.workers,
            rank_tracking: self.rank_tracking,
        };
        let result = match self.algorithm {
            Algorithm::Istratde => {
                run_istratde_with(problem, self.population, self.budget, seed, None, &opts)?
            }
            Algorithm::RestrictedPool => run_istratde_with(
                problem,
                self.population,
                self.budget,
                seed,
                self.pool_indices.as_deref(),
                &opts,
            )?,
            Algorithm::CanonicalDe => run_canonical_de_with(
                problem,
                self.population,
                self.de_f,
                self.de_cr,
                self.budget,
                seed,
                &opts,
            )?,
            Algorithm::FixedDistribution => {
                let dist = self.distribution.as_ref().ok_or_else(|| {
                    HarnessError::InvalidSpec(
                        "fixed_distribution requires component distributions".into(),
                    )
                })?;
                run_fixed_distribution_with(
                    problem,
                    self.population,
                    self.budget,
                    seed,
                    dist,
                    &opts,
                )?
            }
        };
        Ok(result)
    }
}

/// Aggregate record of one experiment, echoing its spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub spec: ExperimentSpec,
    /// Per-run final errors after reporting-threshold rounding.
    pub final_errors: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
    pub median: f64,
    pub evaluations_used: Vec<u64>,
    pub generations_used: Vec<u64>,
    pub trace_files: Vec<String>,
    /// Informational only; excluded from determinism guarantees.
    pub wall_clock_seconds: f64,
}

/// Runs every repetition of the spec, writes one trace CSV per run plus a
/// `summary.json` into `out_dir`, and returns the summary.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path) -> Result<RunSummary> {
    spec.validate()?;
    let problem = spec.problem.build()?;
    fs::create_dir_all(out_dir)?;

    let started = Instant::now();
    let mut final_errors = Vec::with_capacity(spec.runs);
    let mut evaluations_used = Vec::with_capacity(spec.runs);
    let mut generations_used = Vec::with_capacity(spec.runs);
    let mut trace_files = Vec::with_capacity(spec.runs);

    for repetition in 0..spec.runs {
        let seed = spec.master_seed.wrapping_add(repetition as u64);
        let result = spec.dispatch(&problem, seed)?;
        let file_name = format!("run-{repetition:03}.csv");
        write_trace(
            &out_dir.join(&file_name),
            &result,
            &problem,
            spec.trace_stride,
        )?;
        if spec.rank_tracking > 0 {
            let ranks_name = format!("run-{repetition:03}-ranks.csv");
            write_rank_snapshots(&out_dir.join(&ranks_name), &result)?;
        }
        trace_files.push(file_name);
        final_errors.push(round_reported(
            result.best_value,
            problem.optimum_value(),
            REPORT_THRESHOLD,
        ));
        evaluations_used.push(result.evaluations_used);
        generations_used.push(result.generations_used);
    }

    let (mean, std_dev) = summarize(&final_errors)?;
    let summary = RunSummary {
        spec: spec.clone(),
        median: median(&final_errors),
        final_errors,
        mean,
        std_dev,
        evaluations_used,
        generations_used,
        trace_files,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Trace CSV: every `stride`-th generation plus always the final one.
fn write_trace(
    path: &Path,
    result: &RunResult64,
    problem: &Problem64,
    stride: usize,
) -> Result<()> {
    let trace = &result.trace;
    let mut out = String::from("generation,evaluations,best_error,elitism_proportion\n");
    let last = trace.best_so_far.len() - 1;
    for gen in (0..=last).filter(|&g| g % stride == 0 || g == last) {
        let error = trace.best_so_far[gen] - problem.optimum_value();
        out.push_str(&format!(
            "{},{},{},{}\n",
            gen, trace.evaluations[gen], error, trace.elitism_proportion[gen]
        ));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Long-format rank trajectories for the tracked individuals:
/// `generation,individual,normalized_rank`.
fn write_rank_snapshots(path: &Path, result: &RunResult64) -> Result<()> {
    let Some(snapshots) = result.trace.rank_snapshots.as_ref() else {
        return Ok(());
    };
    let mut out = String::from("generation,individual,normalized_rank\n");
    for (generation, ranks) in snapshots {
        for (individual, rank) in ranks.iter().enumerate() {
            out.push_str(&format!("{generation},{individual},{rank}\n"));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_summary(path: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Outcome of comparing two experiments on the same protocol. The verdict
/// is from the first summary's perspective, displayed with the usual
/// `+` / `≈` / `-` table symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub a_algorithm: Algorithm,
    pub b_algorithm: Algorithm,
    pub problem: ProblemSpec,
    pub budget: Budget,
    pub a_mean: f64,
    pub a_std_dev: f64,
    pub b_mean: f64,
    pub b_std_dev: f64,
    pub u_statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub verdict: Verdict,
    pub symbol: String,
}

/// Rank-sum comparison of two summaries sharing problem and budget.
pub fn compare_experiments(a: &RunSummary, b: &RunSummary, alpha: f64) -> Result<ComparisonRecord> {
    if a.spec.problem != b.spec.problem {
        return Err(HarnessError::MismatchedProtocol(format!(
            "problems differ: {:?} vs {:?}",
            a.spec.problem, b.spec.problem
        )));
    }
    if a.spec.budget != b.spec.budget {
        return Err(HarnessError::MismatchedProtocol(format!(
            "budgets differ: {:?} vs {:?}",
            a.spec.budget, b.spec.budget
        )));
    }
    let report = wilcoxon_rank_sum(&a.final_errors, &b.final_errors, alpha)?;
    let symbol = match report.verdict {
        Verdict::Better => "+",
        Verdict::Similar => "≈",
        Verdict::Worse => "-",
    };
    Ok(ComparisonRecord {
        a_algorithm: a.spec.algorithm,
        b_algorithm: b.spec.algorithm,
        problem: a.spec.problem,
        budget: a.spec.budget,
        a_mean: a.mean,
        a_std_dev: a.std_dev,
        b_mean: b.mean,
        b_std_dev: b.std_dev,
        u_statistic: report.u_statistic,
        p_value: report.p_value,
        alpha,
        verdict: report.verdict,
        symbol: symbol.to_string(),
    })
}

/// One row of a population-scaling sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub population: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub median: f64,
    /// Mean divided by the largest mean across the sweep.
    pub normalized_mean: f64,
    pub out_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub base: ExperimentSpec,
    pub fe_budget: u64,
    pub sizes: Vec<SizeSummary>,
}

/// Runs the full repetition protocol at each population size under one
/// shared evaluation budget and writes `sweep.json` plus per-size result
/// directories under `out_dir`.
pub fn population_scaling_sweep(
    base: &ExperimentSpec,
    sizes: &[usize],
    fe_budget: u64,
    out_dir: &Path,
) -> Result<SweepReport> {
    if sizes.is_empty() {
        return Err(HarnessError::InvalidSpec(
            "size list must not be empty".into(),
        ));
    }
    if let Some(&max) = sizes.iter().max() {
        if fe_budget < max as u64 {
            return Err(HarnessError::InvalidSpec(format!(
                "evaluation budget {fe_budget} below largest population {max}"
            )));
        }
    }
    let mut summaries = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut spec = base.clone();
        spec.population = size;
        spec.budget = Budget::MaxEvaluations(fe_budget);
        let size_dir = out_dir.join(format!("pop-{size}"));
        let summary = run_experiment(&spec, &size_dir)?;
        summaries.push((size, summary, format!("pop-{size}")));
    }
    let max_mean = summaries
        .iter()
        .map(|(_, s, _)| s.mean)
        .fold(0.0f64, f64::max);
    let sizes_out = summaries
        .into_iter()
        .map(|(population, s, dir)| SizeSummary {
            population,
            mean: s.mean,
            std_dev: s.std_dev,
            median: s.median,
            normalized_mean: if max_mean > 0.0 {
                s.mean / max_mean
            } else {
                0.0
            },
            out_dir: dir,
        })
        .collect();
    let report = SweepReport {
        base: base.clone(),
        fe_budget,
        sizes: sizes_out,
    };
    write_json(&out_dir.join("sweep.json"), &report)?;
    Ok(report)
}

/// Census of strategy draws: per-tuple counts over the full pool order,
/// with the count standard deviation used by the sampling-uniformity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub draws: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pool_indices: Option<Vec<usize>>,
    pub counts: Vec<u64>,
    pub expected_per_tuple: f64,
    pub count_std_dev: f64,
}

/// Draws `draws` strategies and tallies the discrete tuples.
pub fn pool_census(draws: u64, seed: u64, pool_indices: Option<&[usize]>) -> Result<CensusReport> {
    let mut rng = RngStream::new(seed, 0, 0).rng();
    let mut counts = vec![0u64; POOL_SIZE];
    for _ in 0..draws {
        let config = sample_strategy::<f64, _>(&mut rng, pool_indices)?;
        counts[istratde::pool_index(&config.tuple())] += 1;
    }
    let support = pool_indices.map_or(POOL_SIZE, <[usize]>::len);
    let expected = draws as f64 / support as f64;
    let occupied: Vec<f64> = match pool_indices {
        Some(indices) => indices.iter().map(|&i| counts[i] as f64).collect(),
        None => counts.iter().map(|&c| c as f64).collect(),
    };
    let (_, count_std_dev) = summarize(&occupied)?;
    Ok(CensusReport {
        draws,
        seed,
        pool_indices: pool_indices.map(<[usize]>::to_vec),
        counts,
        expected_per_tuple: expected,
        count_std_dev,
    })
}

pub fn write_census(report: &CensusReport, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    write_json(path, report)
}

fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Default worker count: the `ISTRATDE_WORKERS` environment variable when
/// set, otherwise 1.
pub fn default_worker_count() -> usize {
    std::env::var("ISTRATDE_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

/// Convenience path helper for the CLI.
pub fn summary_path(out_dir: &Path) -> PathBuf {
    out_dir.join("summary.json")
}
