//! Statistics over run outcomes.
//!
//! Both Wilcoxon tests are two-sided and use midranks for ties. Small samples
//! (at most [`EXACT_LIMIT`] observations, or nonzero pairs for the signed-rank
//! test) get an exact p-value by enumerating every assignment with integer
//! doubled ranks; larger ones use the normal approximation with tie
//! correction and no continuity correction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::record::RunRecord;

/// Largest sample handled by exact enumeration.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator, 0 for a singleton).
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub n: usize,
}

pub fn summarize(samples: &[f64]) -> Result<SummaryStats> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        let ss: f64 = samples.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let best = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SummaryStats {
        mean,
        std,
        best,
        worst,
        n,
    })
}

/// Mean absolute deviation of `achieved` from `reference`.
pub fn mae(achieved: &[f64], reference: f64) -> Result<f64> {
    if achieved.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(achieved.iter().map(|v| (v - reference).abs()).sum::<f64>() / achieved.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Rank sum of the first sample (rank-sum test) or `r_plus` (signed-rank test).
    pub statistic: f64,
    /// Rank sum of the first sample, or the sum of ranks of positive differences.
    pub r_plus: f64,
    /// Rank sum of the second sample, or the sum of ranks of negative differences.
    pub r_minus: f64,
    pub p_value: f64,
    pub exact: bool,
    pub significant_010: bool,
    pub significant_005: bool,
}

impl WilcoxonResult {
    fn new(statistic: f64, r_plus: f64, r_minus: f64, p: f64, exact: bool) -> Self {
        let p_value = p.clamp(0.0, 1.0);
        Self {
            statistic,
            r_plus,
            r_minus,
            p_value,
            exact,
            significant_010: p_value < 0.1,
            significant_005: p_value < 0.05,
        }
    }
}

/// Midranks (1-based) of `values`, ties sharing the average of their positions.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    doubled_ranks(values)
        .into_iter()
        .map(|r| r as f64 / 2.0)
        .collect()
}

/// Twice the midranks, which are always integers.
fn doubled_ranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share rank ((i+1) + (j+1)) / 2
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        i = j + 1;
    }
    ranks
}

/// `sum(t^3 - t)` over tie groups.
fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        total += t * t * t - t;
        i = j + 1;
    }
    total
}

fn two_sided_normal(z: f64) -> f64 {
    let normal = Normal::standard();
    2.0 * normal.cdf(-z.abs())
}

/// Two-sample rank-sum test.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = doubled_ranks(&pooled);
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let ra2: u64 = ranks[..na].iter().sum();
    let rb2: u64 = ranks[na..].iter().sum();
    let r_plus = ra2 as f64 / 2.0;
    let r_minus = rb2 as f64 / 2.0;

    if n <= EXACT_LIMIT {
        // doubled mean rank sum of the first group: na (n + 1)
        let mean2 = (na * (n + 1)) as i64;
        let observed = (ra2 as i64 - mean2).abs();
        let (mut extreme, mut total) = (0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != na {
                continue;
            }
            total += 1;
            let s: u64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if (s as i64 - mean2).abs() >= observed {
                extreme += 1;
            }
        }
        let p = extreme as f64 / total as f64;
        return Ok(WilcoxonResult::new(r_plus, r_plus, r_minus, p, true));
    }

    let (naf, nbf, nf) = (na as f64, nb as f64, n as f64);
    let mean = naf * (nf + 1.0) / 2.0;
    let var = naf * nbf / 12.0 * ((nf + 1.0) - tie_term(&pooled) / (nf * (nf - 1.0)));
    let p = if var > 0.0 {
        two_sided_normal((r_plus - mean) / var.sqrt())
    } else {
        1.0
    };
    Ok(WilcoxonResult::new(r_plus, r_plus, r_minus, p, false))
}

/// Paired signed-rank test on `a - b`; zero differences are dropped.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::AllZeroDifferences);
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = doubled_ranks(&magnitudes);
    let m = diffs.len();
    let plus2: u64 = (0..m).filter(|&i| diffs[i] > 0.0).map(|i| ranks[i]).sum();
    let total2: u64 = ranks.iter().sum();
    let r_plus = plus2 as f64 / 2.0;
    let r_minus = (total2 - plus2) as f64 / 2.0;

    if m <= EXACT_LIMIT {
        // compare |2 T - S| in doubled-rank units to stay in integers
        let observed = (2 * plus2 as i64 - total2 as i64).abs();
        let mut extreme = 0u64;
        for mask in 0u32..(1 << m) {
            let s: u64 = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if (2 * s as i64 - total2 as i64).abs() >= observed {
                extreme += 1;
            }
        }
        let p = extreme as f64 / (1u64 << m) as f64;
        return Ok(WilcoxonResult::new(r_plus, r_plus, r_minus, p, true));
    }

    let mf = m as f64;
    let mean = mf * (mf + 1.0) / 4.0;
    let var = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term(&magnitudes) / 48.0;
    let p = if var > 0.0 {
        two_sided_normal((r_plus - mean) / var.sqrt())
    } else {
        1.0
    };
    Ok(WilcoxonResult::new(r_plus, r_plus, r_minus, p, false))
}

/// Statistics of one algorithm on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub dim: usize,
    #[serde(flatten)]
    pub stats: SummaryStats,
    /// Against the problem's reference optimum, when known.
    pub mae: Option<f64>,
    pub feasible_runs: usize,
    pub mean_wall_time: f64,
}

/// Rank-sum comparison of two algorithms on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemComparison {
    pub problem: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub rank_sum: WilcoxonResult,
}

/// Head-to-head comparison of two algorithms across problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub a: String,
    pub b: String,
    pub per_problem: Vec<ProblemComparison>,
    /// Signed-rank test over per-problem mean best fitness; `None` when the
    /// means coincide on every shared problem.
    pub multi_problem: Option<WilcoxonResult>,
    /// Problems where `a` has the lower mean.
    pub wins: usize,
    /// Problems where `a` has the higher mean.
    pub losses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub summaries: Vec<SummaryRow>,
    pub pairwise: Vec<PairwiseComparison>,
    /// Mean wall time per algorithm label, seconds.
    pub wall_time: Vec<(String, f64)>,
}

type ByProblem<'a> = BTreeMap<(String, usize), Vec<&'a RunRecord>>;

fn by_problem(records: &[RunRecord]) -> ByProblem<'_> {
    let mut map: ByProblem<'_> = BTreeMap::new();
    for r in records {
        map.entry((r.problem.clone(), r.dim)).or_default().push(r);
    }
    map
}

fn fitness_of(records: &[&RunRecord]) -> Vec<f64> {
    records.iter().map(|r| r.best_fitness).collect()
}

/// Per-problem statistics for every algorithm label in `groups`; `reference`
/// maps a problem name and dimension to its optimum, if known.
pub fn summarize_groups(
    groups: &BTreeMap<String, Vec<RunRecord>>,
    reference: &dyn Fn(&str, usize) -> Option<f64>,
) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for (label, records) in groups {
        for ((problem, dim), runs) in by_problem(records) {
            let values = fitness_of(&runs);
            rows.push(SummaryRow {
                stats: summarize(&values)?,
                mae: reference(&problem, dim)
                    .map(|r| mae(&values, r))
                    .transpose()?,
                feasible_runs: runs.iter().filter(|r| r.is_feasible()).count(),
                mean_wall_time: runs.iter().map(|r| r.wall_time).sum::<f64>() / runs.len() as f64,
                problem,
                algorithm: label.clone(),
                dim,
            });
        }
    }
    Ok(rows)
}

/// Summaries, pairwise Wilcoxon tests with win/loss counts, and mean wall
/// time for at least two algorithm groups.
pub fn compare_report(
    groups: &BTreeMap<String, Vec<RunRecord>>,
    reference: &dyn Fn(&str, usize) -> Option<f64>,
) -> Result<ComparisonReport> {
    if groups.len() < 2 {
        return Err(Error::TooFewGroups(groups.len()));
    }
    if let Some((label, _)) = groups.iter().find(|(_, v)| v.is_empty()) {
        return Err(Error::Config(format!("group `{label}` has no records")));
    }
    let summaries = summarize_groups(groups, reference)?;
    let indexed: Vec<(&String, ByProblem<'_>)> =
        groups.iter().map(|(k, v)| (k, by_problem(v))).collect();

    let mut pairwise = Vec::new();
    for (i, (label_a, runs_a)) in indexed.iter().enumerate() {
        for (label_b, runs_b) in &indexed[i + 1..] {
            let mut per_problem = Vec::new();
            for (key, a) in runs_a {
                let Some(b) = runs_b.get(key) else { continue };
                let (va, vb) = (fitness_of(a), fitness_of(b));
                per_problem.push(ProblemComparison {
                    problem: key.0.clone(),
                    mean_a: summarize(&va)?.mean,
                    mean_b: summarize(&vb)?.mean,
                    rank_sum: wilcoxon_rank_sum(&va, &vb)?,
                });
            }
            let means_a: Vec<f64> = per_problem.iter().map(|c| c.mean_a).collect();
            let means_b: Vec<f64> = per_problem.iter().map(|c| c.mean_b).collect();
            let multi_problem = match wilcoxon_signed_rank(&means_a, &means_b) {
                Ok(r) => Some(r),
                Err(Error::AllZeroDifferences | Error::EmptySample) => None,
                Err(e) => return Err(e),
            };
            pairwise.push(PairwiseComparison {
                a: (*label_a).clone(),
                b: (*label_b).clone(),
                wins: per_problem.iter().filter(|c| c.mean_a < c.mean_b).count(),
                losses: per_problem.iter().filter(|c| c.mean_a > c.mean_b).count(),
                per_problem,
                multi_problem,
            });
        }
    }

    let wall_time = groups
        .iter()
        .map(|(label, runs)| {
            let t = runs.iter().map(|r| r.wall_time).sum::<f64>() / runs.len() as f64;
            (label.clone(), t)
        })
        .collect();

    Ok(ComparisonReport {
        summaries,
        pairwise,
        wall_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_cases() {
        let s = summarize(&[5.0]).unwrap();
        assert_eq!((s.mean, s.std, s.best, s.worst, s.n), (5.0, 0.0, 5.0, 5.0, 1));
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.std, s.best, s.worst), (2.0, 1.0, 1.0, 3.0));
        assert_eq!(summarize(&[0.3; 4]).unwrap().std, 0.0);
        assert_eq!(summarize(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn mae_cases() {
        assert_eq!(mae(&[2.0], 2.0).unwrap(), 0.0);
        assert!((mae(&[1.0, 2.0, 3.0], 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mae(&[1.5], 1.0).unwrap(), 0.5);
        assert_eq!(mae(&[7.0 + 0.25, 7.0 - 0.25], 7.0).unwrap(), 0.25);
        assert!(mae(&[], 1.0).is_err());
    }

    #[test]
    fn midrank_ties() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn rank_sum_cases() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!(r.exact);
        assert!((r.p_value - 0.1).abs() < 1e-15);
        assert_eq!((r.r_plus, r.r_minus), (6.0, 15.0));
        assert!(!r.significant_005 && !r.significant_010);

        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(wilcoxon_rank_sum(&[1.0], &[2.0]).unwrap().p_value, 1.0);
        assert_eq!(wilcoxon_rank_sum(&[], &[2.0]), Err(Error::EmptySample));
    }

    #[test]
    fn rank_sum_normal_branch() {
        let a: Vec<f64> = (0..10).map(f64::from).collect();
        let b: Vec<f64> = (10..20).map(f64::from).collect();
        let r = wilcoxon_rank_sum(&a, &b).unwrap();
        assert!(!r.exact);
        // W = 55, mean 105, var 175 -> z = -3.7796447
        let expected = 2.0 * Normal::standard().cdf(-50.0 / 175f64.sqrt());
        assert!((r.p_value - expected).abs() < 1e-15);
        assert!(r.significant_005);
    }

    #[test]
    fn signed_rank_cases() {
        let r = wilcoxon_signed_rank(&[2.0, 4.0, 7.0], &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!((r.r_plus, r.r_minus), (6.0, 0.0));
        assert_eq!(r.p_value, 0.25);

        let r = wilcoxon_signed_rank(&[1.0], &[0.0]).unwrap();
        assert_eq!((r.r_plus, r.r_minus, r.p_value), (1.0, 0.0, 1.0));

        assert_eq!(
            wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::AllZeroDifferences)
        );
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn signed_rank_normal_branch() {
        let a: Vec<f64> = (1..=20).map(f64::from).collect();
        let b = vec![0.0; 20];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert!(!r.exact);
        assert_eq!(r.r_plus, 210.0);
        let z = (210.0 - 105.0) / (20.0f64 * 21.0 * 41.0 / 24.0).sqrt();
        assert!((r.p_value - 2.0 * Normal::standard().cdf(-z)).abs() < 1e-15);
    }
}
