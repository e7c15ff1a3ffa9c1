//! Nonparametric comparison of run outcomes.
//!
//! Final errors from repeated runs are compared with the two-sided
//! Mann-Whitney U (Wilcoxon rank-sum) test: midranks for ties, tie-corrected
//! variance, normal approximation with continuity correction. Samples here
//! are `f64` regardless of the optimizer's scalar type; they are reporting
//! quantities, not search-space coordinates.

use crate::error::{Error, Result};

/// Relation of the first sample to the second at significance `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Better,
    Similar,
    Worse,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = match self {
            Verdict::Better => "+",
            Verdict::Similar => "≈",
            Verdict::Worse => "-",
        };
        f.write_str(sign)
    }
}

/// Result of one rank-sum comparison, oriented from the first sample's
/// perspective.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankSumReport {
    pub u_statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    pub alpha: f64,
}

/// Two-sided Mann-Whitney U test of `a` against `b`.
///
/// The verdict is `Better` when the difference is significant and `a` has
/// the smaller median (smaller error wins), `Worse` for the mirror case,
/// and `Similar` otherwise, including the degenerate significant-but-equal-
/// medians case.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<RankSumReport> {
    if a.len() < 3 {
        return Err(Error::SampleTooSmall(a.len()));
    }
    if b.len() < 3 {
        return Err(Error::SampleTooSmall(b.len()));
    }
    let u_statistic = u_statistic(a, b);
    let p_value = two_sided_p(u_statistic, a.len(), b.len(), tie_census(a, b));

    let verdict = if p_value < alpha {
        let ma = median(a);
        let mb = median(b);
        if ma < mb {
            Verdict::Better
        } else if ma > mb {
            Verdict::Worse
        } else {
            Verdict::Similar
        }
    } else {
        Verdict::Similar
    };

    Ok(RankSumReport {
        u_statistic,
        p_value,
        verdict,
        alpha,
    })
}

/// U statistic of the first sample, from midranks over the pooled data.
fn u_statistic(a: &[f64], b: &[f64]) -> f64 {
    let ranks = midranks(a, b);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let na = a.len() as f64;
    rank_sum_a - na * (na + 1.0) / 2.0
}

/// Midranks of the pooled sample, first `a` then `b`, 1-based.
fn midranks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() + b.len();
    let pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        pooled[i]
            .partial_cmp(&pooled[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Sizes of tied groups in the pooled sample.
fn tie_census(a: &[f64], b: &[f64]) -> Vec<usize> {
    let mut pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    pooled.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let mut groups = Vec::new();
    let mut start = 0;
    while start < pooled.len() {
        let mut end = start + 1;
        while end < pooled.len() && pooled[end] == pooled[start] {
            end += 1;
        }
        if end - start > 1 {
            groups.push(end - start);
        }
        start = end;
    }
    groups
}

/// Normal approximation with tie-corrected variance and a 0.5 continuity
/// correction, symmetric in the two samples.
fn two_sided_p(u: f64, na: usize, nb: usize, ties: Vec<usize>) -> f64 {
    let na = na as f64;
    let nb = nb as f64;
    let n = na + nb;
    let mean = na * nb / 2.0;
    let tie_term: f64 = ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        // Every pooled value tied: no evidence of a difference.
        return 1.0;
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    (libm::erfc(z / std::f64::consts::SQRT_2)).clamp(0.0, 1.0)
}

pub(crate) fn median(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Mean and sample standard deviation (N - 1 denominator; zero for a
/// singleton), the pair displayed in every result table.
pub fn summarize(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}
