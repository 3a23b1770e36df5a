//! Pure sub-scores, their mapping onto a common range, per-problem
//! combination and the overall score.
//!
//! Runtime is gates per second, `D·S / T̄`, averaged over sizes. Accuracy is
//! the mean relative error of the best sampled expectation against the best
//! exact-expectation baseline. Scalability is the exponent `a` of a power-law
//! fit to normalised job times. Capacity is the widest register whose
//! relative error stays within `A*`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{ExecutionRecord, RecordSet};
use crate::problems::ProblemKind;

pub const C0: f64 = 30.0 / PI;
pub const C1: f64 = 50.0;
pub const C2: f64 = 30.0 / PI;
pub const C3: f64 = 0.75;
pub const DEFAULT_A_STAR: f64 = 0.2;
/// Shots assumed for records that do not carry a "Shots" field.
pub const DEFAULT_SHOTS: u64 = 4096;

const FIT_MAX: f64 = 10.0;
const FIT_GRID: usize = 1000;

/// Aggregates of one `(kind, size)` group across its cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeStats {
    pub size: usize,
    pub qubits: usize,
    pub depth: f64,
    pub shots: u64,
    /// Mean job time in seconds over every job of every cycle.
    pub mean_job_s: f64,
    /// Best sampled expectation over cycles.
    pub e_q: f64,
    /// Best baseline expectation over cycles.
    pub e_ideal: f64,
}

pub fn summarize(size: usize, records: &[ExecutionRecord]) -> Result<SizeStats> {
    let Some(first) = records.first() else {
        return Err(Error::Scoring(format!("size {size} has no records")));
    };
    let jobs: Vec<f64> = records
        .iter()
        .flat_map(|r| r.job_durations_ms.iter().copied())
        .collect();
    if jobs.is_empty() {
        return Err(Error::Scoring(format!("size {size} has no job durations")));
    }
    let mut e_ideal = f64::INFINITY;
    for (i, r) in records.iter().enumerate() {
        let b = r.expectation_value_baseline.ok_or_else(|| {
            Error::Scoring(format!(
                "size {size} record {i} has no baseline expectation"
            ))
        })?;
        e_ideal = e_ideal.min(b);
    }
    Ok(SizeStats {
        size,
        qubits: first.qubits,
        depth: records.iter().map(|r| r.depth).fold(0.0, f64::max),
        shots: first.shots.unwrap_or(DEFAULT_SHOTS),
        mean_job_s: jobs.iter().sum::<f64>() / jobs.len() as f64 / 1000.0,
        e_q: records
            .iter()
            .map(|r| r.expectation_value)
            .fold(f64::INFINITY, f64::min),
        e_ideal,
    })
}

/// Gates per second for each size.
fn gate_rates(stats: &[SizeStats]) -> Result<Vec<f64>> {
    if stats.is_empty() {
        return Err(Error::Scoring("runtime needs at least one size".into()));
    }
    stats
        .iter()
        .map(|s| {
            if s.mean_job_s > 0.0 {
                Ok(s.depth * s.shots as f64 / s.mean_job_s)
            } else {
                Err(Error::Scoring(format!(
                    "size {} has zero mean job time",
                    s.size
                )))
            }
        })
        .collect()
}

/// Mean over sizes of `D·S / T̄`.
pub fn pure_runtime(stats: &[SizeStats]) -> Result<f64> {
    let rates = gate_rates(stats)?;
    Ok(rates.iter().sum::<f64>() / rates.len() as f64)
}

/// The same sum divided by `N_e − N_s` (1 for a single size), as the
/// published formula reads. Reported for comparison only.
pub fn pure_runtime_printed_divisor(stats: &[SizeStats]) -> Result<f64> {
    let rates = gate_rates(stats)?;
    Ok(rates.iter().sum::<f64>() / printed_divisor(stats))
}

fn printed_divisor(stats: &[SizeStats]) -> f64 {
    let lo = stats.iter().map(|s| s.size).min().unwrap_or(0);
    let hi = stats.iter().map(|s| s.size).max().unwrap_or(0);
    (hi - lo).max(1) as f64
}

/// `(E^Q − E^ideal) / |E^ideal|`; `None` when the baseline is zero.
pub fn relative_error(e_q: f64, e_ideal: f64) -> Option<f64> {
    (e_ideal != 0.0).then(|| (e_q - e_ideal) / e_ideal.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub value: f64,
    /// Sizes left out because their baseline is zero.
    pub excluded_sizes: Vec<usize>,
    /// Sum of errors over `N_e − N_s`, for comparison only.
    pub printed_divisor_value: f64,
}

/// Mean relative error over sizes with a non-zero baseline.
pub fn pure_accuracy(stats: &[SizeStats]) -> Result<Accuracy> {
    let mut errors = Vec::new();
    let mut excluded_sizes = Vec::new();
    for s in stats {
        match relative_error(s.e_q, s.e_ideal) {
            Some(e) => errors.push(e),
            None => excluded_sizes.push(s.size),
        }
    }
    if errors.is_empty() {
        return Err(Error::Scoring(
            "accuracy needs at least one size with a non-zero baseline".into(),
        ));
    }
    let sum: f64 = errors.iter().sum();
    Ok(Accuracy {
        value: sum / errors.len() as f64,
        excluded_sizes,
        printed_divisor_value: sum / printed_divisor(stats),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    /// Set when every time is equal and nothing can be fitted.
    pub degenerate: bool,
}

/// Least-squares exponent `a` of `(N / N_e)^a` against min-max normalised
/// times, searched on `[0, 10]`.
pub fn fit_scaling_exponent(sizes: &[f64], times: &[f64]) -> Result<ScalingFit> {
    if sizes.len() != times.len() {
        return Err(Error::Scoring(format!(
            "{} sizes but {} times",
            sizes.len(),
            times.len()
        )));
    }
    if sizes.len() < 3 {
        return Err(Error::Scoring(
            "scalability fit needs at least 3 sizes".into(),
        ));
    }
    if sizes
        .iter()
        .chain(times)
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::Scoring("sizes and times must be positive".into()));
    }
    let lo = times.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Ok(ScalingFit {
            exponent: 0.0,
            degenerate: true,
        });
    }
    let n_e = sizes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .zip(times)
        .map(|(n, t)| ((n / n_e).ln(), (t - lo) / (hi - lo)))
        .collect();
    let sse = |a: f64| -> f64 {
        points
            .iter()
            .map(|(l, y)| ((a * l).exp() - y).powi(2))
            .sum()
    };
    // d/da of the squared error, up to a factor of 2.
    let slope = |a: f64| -> f64 {
        points
            .iter()
            .map(|(l, y)| {
                let g = (a * l).exp();
                (g - y) * g * l
            })
            .sum()
    };
    let step = FIT_MAX / FIT_GRID as f64;
    let best = (0..=FIT_GRID)
        .min_by(|&i, &j| sse(i as f64 * step).total_cmp(&sse(j as f64 * step)))
        .expect("non-empty grid");
    let mut lo_a = best.saturating_sub(1) as f64 * step;
    let mut hi_a = (best + 1).min(FIT_GRID) as f64 * step;
    let exponent = if slope(lo_a) < 0.0 && slope(hi_a) > 0.0 {
        // Bisect the stationary point inside the bracketing grid cell.
        while hi_a - lo_a > 1e-13 {
            let mid = 0.5 * (lo_a + hi_a);
            if slope(mid) < 0.0 {
                lo_a = mid;
            } else {
                hi_a = mid;
            }
        }
        0.5 * (lo_a + hi_a)
    } else {
        best as f64 * step
    };
    Ok(ScalingFit {
        exponent,
        degenerate: false,
    })
}

/// Largest qubit width whose relative error is within `a_star`, else 0.
pub fn pure_capacity(stats: &[SizeStats], a_star: f64) -> usize {
    stats
        .iter()
        .filter(|s| relative_error(s.e_q, s.e_ideal).is_some_and(|e| e <= a_star))
        .map(|s| s.qubits)
        .max()
        .unwrap_or(0)
}

pub fn map_runtime(pure: f64) -> f64 {
    pure.log10()
}

pub fn map_accuracy(pure: f64) -> f64 {
    C0 * (PI / 2.0 - (C1 * pure).atan())
}

pub fn map_scalability(pure: f64) -> f64 {
    C2 * (PI / 2.0 - (C3 * (pure - 1.0)).atan())
}

pub fn map_capacity(pure: usize) -> f64 {
    pure as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubScores {
    pub runtime: f64,
    pub accuracy: f64,
    pub scalability: f64,
    pub capacity: f64,
}

/// Area of the quadrilateral spanned by the four sub-scores on the radar axes.
pub fn overall(sub: &SubScores) -> f64 {
    0.5 * (sub.runtime + sub.scalability) * (sub.accuracy + sub.capacity)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureScores {
    pub runtime: f64,
    pub accuracy: f64,
    /// Absent when the problem has fewer than three sizes.
    pub scalability: Option<f64>,
    pub capacity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedScores {
    pub runtime: f64,
    pub accuracy: f64,
    pub scalability: Option<f64>,
    pub capacity: f64,
}

pub fn map_scores(pure: &PureScores) -> Result<MappedScores> {
    if !(pure.runtime > 0.0) {
        return Err(Error::Scoring(format!(
            "pure runtime {} is not positive",
            pure.runtime
        )));
    }
    Ok(MappedScores {
        runtime: map_runtime(pure.runtime),
        accuracy: map_accuracy(pure.accuracy),
        scalability: pure.scalability.map(map_scalability),
        capacity: map_capacity(pure.capacity),
    })
}

/// Arithmetic mean over problems; scalability over those that have it.
pub fn combine(mapped: &[&MappedScores]) -> Result<SubScores> {
    if mapped.is_empty() {
        return Err(Error::Scoring("no problems to combine".into()));
    }
    let mean = |xs: Vec<f64>| xs.iter().sum::<f64>() / xs.len() as f64;
    let scal: Vec<f64> = mapped.iter().filter_map(|m| m.scalability).collect();
    if scal.is_empty() {
        return Err(Error::Scoring(
            "no problem has the three sizes a scalability fit needs".into(),
        ));
    }
    Ok(SubScores {
        runtime: mean(mapped.iter().map(|m| m.runtime).collect()),
        accuracy: mean(mapped.iter().map(|m| m.accuracy).collect()),
        scalability: mean(scal),
        capacity: mean(mapped.iter().map(|m| m.capacity).collect()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemScore {
    pub sizes: Vec<SizeStats>,
    pub pure: PureScores,
    pub mapped: MappedScores,
    pub scalability_degenerate: bool,
    pub accuracy_excluded_sizes: Vec<usize>,
    /// Runtime and accuracy with the `N_e − N_s` divisor, for comparison.
    pub runtime_printed_divisor: f64,
    pub accuracy_printed_divisor: f64,
}

/// Everything `score` reports for one device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    pub device: String,
    pub a_star: f64,
    pub runtime: f64,
    pub accuracy: f64,
    pub scalability: f64,
    pub capacity: f64,
    pub overall: f64,
    pub per_problem: BTreeMap<String, ProblemScore>,
}

impl ScoreSet {
    pub fn sub_scores(&self) -> SubScores {
        SubScores {
            runtime: self.runtime,
            accuracy: self.accuracy,
            scalability: self.scalability,
            capacity: self.capacity,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

pub fn score_problem(
    groups: &BTreeMap<usize, Vec<ExecutionRecord>>,
    a_star: f64,
) -> Result<ProblemScore> {
    let sizes = groups
        .iter()
        .map(|(&size, records)| summarize(size, records))
        .collect::<Result<Vec<_>>>()?;
    let accuracy = pure_accuracy(&sizes)?;
    let fit = if sizes.len() >= 3 {
        let n: Vec<f64> = sizes.iter().map(|s| s.size as f64).collect();
        let t: Vec<f64> = sizes.iter().map(|s| s.mean_job_s).collect();
        Some(fit_scaling_exponent(&n, &t)?)
    } else {
        None
    };
    let pure = PureScores {
        runtime: pure_runtime(&sizes)?,
        accuracy: accuracy.value,
        scalability: fit.map(|f| f.exponent),
        capacity: pure_capacity(&sizes, a_star),
    };
    Ok(ProblemScore {
        mapped: map_scores(&pure)?,
        pure,
        scalability_degenerate: fit.is_some_and(|f| f.degenerate),
        accuracy_excluded_sizes: accuracy.excluded_sizes,
        runtime_printed_divisor: pure_runtime_printed_divisor(&sizes)?,
        accuracy_printed_divisor: accuracy.printed_divisor_value,
        sizes,
    })
}

pub fn score_records(device: &str, set: &RecordSet, a_star: f64) -> Result<ScoreSet> {
    if !(a_star > 0.0 && a_star < 1.0) {
        return Err(Error::Scoring(format!("A* = {a_star} is not in (0, 1)")));
    }
    let mut per_problem = BTreeMap::new();
    for (kind, groups) in &set.groups {
        let score =
            score_problem(groups, a_star).map_err(|e| Error::Scoring(format!("{kind}: {e}")))?;
        per_problem.insert(kind.code().to_string(), score);
    }
    let mapped: Vec<&MappedScores> = per_problem.values().map(|p| &p.mapped).collect();
    let sub = combine(&mapped)?;
    Ok(ScoreSet {
        device: device.to_string(),
        a_star,
        runtime: sub.runtime,
        accuracy: sub.accuracy,
        scalability: sub.scalability,
        capacity: sub.capacity,
        overall: overall(&sub),
        per_problem,
    })
}

/// Kinds in a score set, in the fixed problem order.
pub fn kinds_of(scores: &ScoreSet) -> Vec<ProblemKind> {
    ProblemKind::ALL
        .into_iter()
        .filter(|k| scores.per_problem.contains_key(k.code()))
        .collect()
}
