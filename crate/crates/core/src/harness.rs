//! The benchmark loop: problems × sizes × execution cycles, with timing and
//! persisted execution records.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ansatz::{Ansatz, Basis};
use crate::circuit::depth;
use crate::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::optimizer::{minimize, OptimConfig};
use crate::problems::{
    brute_force_optimum, make_instance, qubits_required, ProblemInstance, ProblemKind,
};
use crate::simulator::{Histogram, Simulator};

/// Environment variable holding the number of parallel worker threads.
pub const WORKERS_ENV: &str = "VQA_BENCH_WORKERS";

/// Backend label written into records produced by the built-in simulator.
pub const BACKEND: &str = "statevector";

/// One execution cycle. Field names and order follow the published schema;
/// the trailing metadata is optional on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionRecord {
    #[serde(rename = "Depth")]
    pub depth: f64,
    #[serde(rename = "Expectation Value")]
    pub expectation_value: f64,
    #[serde(
        rename = "Expectation Value Baseline",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub expectation_value_baseline: Option<f64>,
    #[serde(rename = "Expectation Value Optimal")]
    pub expectation_value_optimal: f64,
    #[serde(rename = "Job durations [ms]")]
    pub job_durations_ms: Vec<f64>,
    #[serde(rename = "Optimal params")]
    pub optimal_params: Vec<f64>,
    #[serde(rename = "Optimizer durations [ms]")]
    pub optimizer_durations_ms: Vec<f64>,
    #[serde(rename = "Optimizer iterations")]
    pub optimizer_iterations: usize,
    #[serde(rename = "Qubits")]
    pub qubits: usize,
    #[serde(rename = "Total Classic duration [s]")]
    pub total_classic_duration_s: f64,
    #[serde(rename = "Total Quantum duration [s]")]
    pub total_quantum_duration_s: f64,
    #[serde(rename = "Kind", default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ProblemKind>,
    #[serde(rename = "Size", default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(
        rename = "Instance seed",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub instance_seed: Option<u64>,
    #[serde(
        rename = "Cycle seed",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub cycle_seed: Option<u64>,
    #[serde(rename = "Shots", default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(rename = "Backend", default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
}

/// Settings shared by every cycle of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub optimizer: OptimConfig,
    pub simulator: Simulator,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimConfig::default(),
            simulator: Simulator::default(),
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `parts` into one seed; distinct inputs give unrelated streams.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix(base), |acc, &p| splitmix(acc ^ splitmix(p)))
}

fn kind_tag(kind: ProblemKind) -> u64 {
    ProblemKind::ALL.iter().position(|&k| k == kind).unwrap() as u64
}

pub fn instance_seed(base: u64, kind: ProblemKind, size: usize) -> u64 {
    derive_seed(base, &[kind_tag(kind), size as u64])
}

pub fn cycle_seed(base: u64, kind: ProblemKind, size: usize, cycle: usize) -> u64 {
    derive_seed(base, &[kind_tag(kind), size as u64, 1 + cycle as u64])
}

/// Uniform start point: `γ ∈ [0, 2π]`, `β ∈ [0, π]` for QAOA, `θ ∈ [0, 2π]`
/// otherwise.
pub fn initial_params(instance: &ProblemInstance, seed: u64) -> Vec<f64> {
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = crate::ansatz::param_count(instance);
    (0..n)
        .map(|i| {
            let hi = if instance.kind.is_qaoa() && i == 1 {
                PI
            } else {
                2.0 * PI
            };
            rng.gen_range(0.0..=hi)
        })
        .collect()
}

/// One execution cycle: a sampled optimisation run plus an exact-expectation
/// baseline run from the same start point.
pub fn run_vqa(
    instance: &ProblemInstance,
    shots: u64,
    config: &RunConfig,
    cycle_seed: u64,
) -> Result<ExecutionRecord> {
    if shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    let sim = config.simulator;
    if instance.qubits > sim.max_qubits() {
        return Err(Error::TooManyQubits {
            n_qubits: instance.qubits,
            cap: sim.max_qubits(),
        });
    }
    let ansatz = Ansatz::new(instance.clone())?;
    let optimal = brute_force_optimum(instance)?;
    let x0 = initial_params(instance, cycle_seed);

    let probe = ansatz.build_circuits(&x0)?.decomposed()?;
    let mut circuit_depth = 0;
    for (c, _) in &probe.circuits {
        circuit_depth = circuit_depth.max(depth(c)?);
    }

    let mut job_durations_ms = Vec::new();
    let mut evaluation = 0u64;
    let start = Instant::now();
    let result = minimize(
        |params| {
            let set = ansatz.build_circuits(params)?.decomposed()?;
            let mut hists: Vec<(Basis, Histogram)> = Vec::with_capacity(set.len());
            for (j, (c, basis)) in set.circuits.iter().enumerate() {
                let seed = derive_seed(cycle_seed, &[evaluation, j as u64]);
                let job = sim.run(c, shots, seed)?;
                job_durations_ms.push(job.duration_ms);
                hists.push((*basis, job.histogram));
            }
            evaluation += 1;
            let refs: Vec<_> = hists.iter().map(|(b, h)| (*b, h)).collect();
            ansatz.expectation_from_counts(&refs)
        },
        &x0,
        &config.optimizer,
    )?;
    let wall_s = start.elapsed().as_secs_f64();

    let baseline = baseline_expectation(instance, config, cycle_seed)?;

    let total_quantum_duration_s = job_durations_ms.iter().sum::<f64>() / 1000.0;
    Ok(ExecutionRecord {
        depth: circuit_depth as f64,
        expectation_value: result.best_value,
        expectation_value_baseline: Some(baseline),
        expectation_value_optimal: optimal,
        job_durations_ms,
        optimal_params: result.best_params.clone(),
        optimizer_durations_ms: result.iteration_durations_ms.clone(),
        optimizer_iterations: result.iterations(),
        qubits: instance.qubits,
        total_classic_duration_s: (wall_s - total_quantum_duration_s).max(0.0),
        total_quantum_duration_s,
        kind: Some(instance.kind),
        size: Some(instance.size),
        instance_seed: Some(instance.seed),
        cycle_seed: Some(cycle_seed),
        shots: Some(shots),
        backend: Some(BACKEND.into()),
    })
}

/// Exact-expectation optimisation from the cycle's start point; the value a
/// record's baseline field holds.
pub fn baseline_expectation(
    instance: &ProblemInstance,
    config: &RunConfig,
    cycle_seed: u64,
) -> Result<f64> {
    let ansatz = Ansatz::new(instance.clone())?;
    let x0 = initial_params(instance, cycle_seed);
    let sim = config.simulator;
    Ok(minimize(
        |params| ansatz.exact_expectation(params, &sim),
        &x0,
        &config.optimizer,
    )?
    .best_value)
}

/// Recomputes absent baselines from replay metadata. Returns how many were
/// filled; records without the metadata are an error.
pub fn fill_missing_baselines(set: &mut RecordSet, config: &RunConfig) -> Result<usize> {
    let mut filled = 0;
    for (&kind, groups) in set.groups.iter_mut() {
        for (&size, records) in groups.iter_mut() {
            for (index, r) in records.iter_mut().enumerate() {
                if r.expectation_value_baseline.is_some() {
                    continue;
                }
                let (Some(iseed), Some(cseed)) = (r.instance_seed, r.cycle_seed) else {
                    return Err(Error::Schema {
                        index,
                        message: format!(
                            "{kind} size {size}: no \"Expectation Value Baseline\" and no seeds to recompute it"
                        ),
                    });
                };
                let instance = make_instance(kind, size, iseed)?;
                r.expectation_value_baseline =
                    Some(baseline_expectation(&instance, config, cseed)?);
                filled += 1;
            }
        }
    }
    Ok(filled)
}

/// A `(kind, size)` group that could not be completed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub kind: ProblemKind,
    pub size: usize,
    pub message: String,
}

/// Records grouped by problem kind and size, plus failed groups.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordSet {
    pub groups: BTreeMap<ProblemKind, BTreeMap<usize, Vec<ExecutionRecord>>>,
    pub failures: Vec<RunFailure>,
}

impl RecordSet {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn len(&self) -> usize {
        self.groups
            .values()
            .flat_map(|g| g.values())
            .map(Vec::len)
            .sum()
    }

    pub fn insert(&mut self, kind: ProblemKind, size: usize, record: ExecutionRecord) {
        self.groups
            .entry(kind)
            .or_default()
            .entry(size)
            .or_default()
            .push(record);
    }

    pub fn kinds(&self) -> impl Iterator<Item = ProblemKind> + '_ {
        self.groups.keys().copied()
    }

    /// All records of one kind in size order.
    pub fn records_of(&self, kind: ProblemKind) -> Vec<ExecutionRecord> {
        self.groups
            .get(&kind)
            .map(|g| g.values().flatten().cloned().collect())
            .unwrap_or_default()
    }

    /// Record file path for one problem kind.
    pub fn file_name(dir: &Path, device: &str, kind: ProblemKind) -> PathBuf {
        dir.join(format!("{device}_{}.json", kind.code()))
    }

    /// Writes one file per problem kind; returns the paths written.
    pub fn save_dir(&self, dir: &Path, device: &str) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for kind in self.kinds() {
            let path = Self::file_name(dir, device, kind);
            save_records(&self.records_of(kind), &path)?;
            written.push(path);
        }
        Ok(written)
    }

    /// Loads every `<device>_<KIND>.json` file in `dir`, keyed by device.
    pub fn load_dir(dir: &Path) -> Result<BTreeMap<String, RecordSet>> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut out: BTreeMap<String, RecordSet> = BTreeMap::new();
        for path in paths {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default();
            let Some((device, code)) = stem.rsplit_once('_') else {
                continue;
            };
            let Ok(kind) = code.parse::<ProblemKind>() else {
                continue;
            };
            let set = out.entry(device.to_string()).or_default();
            for (index, record) in load_records(&path)?.into_iter().enumerate() {
                if record.kind.is_some_and(|k| k != kind) {
                    return Err(Error::Schema {
                        index,
                        message: format!("{}: \"Kind\" does not match file name", path.display()),
                    });
                }
                let size = match record.size {
                    Some(s) => s,
                    None => size_from_qubits(kind, record.qubits).ok_or_else(|| Error::Schema {
                        index,
                        message: format!(
                            "{}: {} qubits is not a valid {kind} width",
                            path.display(),
                            record.qubits
                        ),
                    })?,
                };
                set.insert(kind, size, record);
            }
        }
        Ok(out)
    }
}

/// Inverse of `qubits_required`, for records without a "Size" field.
pub fn size_from_qubits(kind: ProblemKind, qubits: usize) -> Option<usize> {
    (1..=qubits).find(|&n| qubits_required(kind, n) == qubits)
}

pub fn save_records(records: &[ExecutionRecord], path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_records(text: &str) -> Result<Vec<ExecutionRecord>> {
    let values: Vec<Value> = serde_json::from_str(text)?;
    values
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            serde_json::from_value(v).map_err(|e| Error::Schema {
                index,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn load_records(path: &Path) -> Result<Vec<ExecutionRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records(&text).map_err(|e| match e {
        Error::Schema { index, message } => Error::Schema {
            index,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    })
}

/// Worker count from `VQA_BENCH_WORKERS`, defaulting to 1.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!(
                "{WORKERS_ENV}={v:?} is not a positive integer"
            ))),
        },
    }
}

/// Runs every configured group on `workers` threads. Failed groups are
/// recorded and the loop continues. `progress` sees each finished group.
pub fn run_suite_with<P>(suite: &SuiteConfig, workers: usize, progress: P) -> Result<RecordSet>
where
    P: Fn(ProblemKind, usize, &Result<Vec<ExecutionRecord>>) + Sync,
{
    suite.validate()?;
    let config = RunConfig {
        optimizer: suite.optimizer,
        simulator: Simulator::with_max_qubits(suite.max_qubits),
    };
    let groups: Vec<(ProblemKind, usize)> = suite
        .problems
        .iter()
        .flat_map(|p| p.sizes().map(move |n| (p.kind, n)))
        .collect();
    let run_group = |&(kind, size): &(ProblemKind, usize)| {
        let result = run_group(suite, &config, kind, size);
        progress(kind, size, &result);
        result
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| groups.par_iter().map(run_group).collect());

    let mut set = RecordSet::default();
    for ((kind, size), result) in groups.into_iter().zip(results) {
        match result {
            Ok(records) => {
                for r in records {
                    set.insert(kind, size, r);
                }
            }
            Err(e) => set.failures.push(RunFailure {
                kind,
                size,
                message: e.to_string(),
            }),
        }
    }
    Ok(set)
}

pub fn run_suite(suite: &SuiteConfig) -> Result<RecordSet> {
    run_suite_with(suite, workers_from_env()?, |_, _, _| {})
}

fn run_group(
    suite: &SuiteConfig,
    config: &RunConfig,
    kind: ProblemKind,
    size: usize,
) -> Result<Vec<ExecutionRecord>> {
    let annotate = |cycle: usize| {
        move |e: Error| Error::Run {
            kind,
            size,
            cycle,
            source: Box::new(e),
        }
    };
    let qubits = qubits_required(kind, size);
    if qubits > config.simulator.max_qubits() {
        return Err(annotate(0)(Error::TooManyQubits {
            n_qubits: qubits,
            cap: config.simulator.max_qubits(),
        }));
    }
    let instance =
        make_instance(kind, size, instance_seed(suite.seed, kind, size)).map_err(annotate(0))?;
    (0..suite.cycles)
        .map(|cycle| {
            run_vqa(
                &instance,
                suite.shots,
                config,
                cycle_seed(suite.seed, kind, size, cycle),
            )
            .map_err(annotate(cycle))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProblemSpec;

    fn quick() -> RunConfig {
        RunConfig {
            optimizer: OptimConfig {
                max_iterations: 30,
                ..OptimConfig::default()
            },
            simulator: Simulator::default(),
        }
    }

    #[test]
    fn maxcut_record_fields() {
        let inst = make_instance(ProblemKind::MaxCut, 5, 0).unwrap();
        let r = run_vqa(&inst, 4096, &quick(), 3).unwrap();
        assert_eq!(r.qubits, 5);
        assert_eq!(r.expectation_value_optimal, -6.0);
        assert!(r.optimizer_iterations <= 30);
        assert_eq!(r.job_durations_ms.len(), r.optimizer_iterations);
        assert_eq!(r.optimizer_durations_ms.len(), r.optimizer_iterations);
        let sum: f64 = r.job_durations_ms.iter().sum::<f64>() / 1000.0;
        assert!((r.total_quantum_duration_s - sum).abs() < 1e-6);
        assert!(r.total_classic_duration_s >= 0.0);
        assert!(r.depth > 0.0);
        assert_eq!(r.optimal_params.len(), 2);
    }

    #[test]
    fn ising_runs_two_jobs_per_evaluation() {
        let inst = make_instance(ProblemKind::IsingChain, 2, 0).unwrap();
        let r = run_vqa(&inst, 256, &quick(), 1).unwrap();
        assert_eq!(r.job_durations_ms.len(), 2 * r.optimizer_iterations);
        assert!((r.expectation_value_optimal + 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn random_diagonal_baseline_reaches_optimum() {
        let inst = make_instance(ProblemKind::RandomDiagonal, 2, 4).unwrap();
        let r = run_vqa(&inst, 1024, &RunConfig::default(), 2).unwrap();
        let base = r.expectation_value_baseline.unwrap();
        assert!(
            (base - r.expectation_value_optimal).abs() < 1e-3,
            "{base} vs {}",
            r.expectation_value_optimal
        );
    }

    #[test]
    fn single_shot_is_well_formed() {
        let inst = make_instance(ProblemKind::MaxCut, 5, 0).unwrap();
        let r = run_vqa(&inst, 1, &quick(), 9).unwrap();
        assert!(r.expectation_value.is_finite());
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(parse_records(&format!("[{text}]")).unwrap()[0], r);
    }

    #[test]
    fn replay_is_deterministic() {
        let inst = make_instance(ProblemKind::RandomDiagonal, 3, 1).unwrap();
        let a = run_vqa(&inst, 512, &quick(), 77).unwrap();
        let b = run_vqa(&inst, 512, &quick(), 77).unwrap();
        assert_eq!(a.expectation_value, b.expectation_value);
        assert_eq!(a.expectation_value_baseline, b.expectation_value_baseline);
        assert_eq!(a.optimal_params, b.optimal_params);
        let c = run_vqa(&inst, 512, &quick(), 78).unwrap();
        assert_ne!(a.optimal_params, c.optimal_params);
    }

    #[test]
    fn oversized_instance_is_rejected() {
        let inst = make_instance(ProblemKind::MaxCut, 9, 0).unwrap();
        let cfg = RunConfig {
            simulator: Simulator::with_max_qubits(8),
            ..quick()
        };
        assert!(matches!(
            run_vqa(&inst, 10, &cfg, 0),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn initial_params_respect_ranges() {
        let inst = make_instance(ProblemKind::MaxCut, 5, 0).unwrap();
        for seed in 0..200 {
            let p = initial_params(&inst, seed);
            assert!((0.0..=2.0 * std::f64::consts::PI).contains(&p[0]));
            assert!((0.0..=std::f64::consts::PI).contains(&p[1]));
        }
    }

    #[test]
    fn suite_counts_and_failures() {
        let mut suite = SuiteConfig::new("unused");
        suite.cycles = 2;
        suite.shots = 128;
        suite.optimizer.max_iterations = 8;
        suite.problems = vec![
            ProblemSpec {
                kind: ProblemKind::MaxCut,
                sizes: [5, 7],
            },
            ProblemSpec {
                kind: ProblemKind::Tsp,
                sizes: [3, 5],
            },
        ];
        let set = run_suite_with(&suite, 2, |_, _, _| {}).unwrap();
        assert_eq!(set.records_of(ProblemKind::MaxCut).len(), 6);
        let widths: Vec<usize> = set.groups[&ProblemKind::Tsp]
            .values()
            .map(|g| g[0].qubits)
            .collect();
        assert_eq!(widths, vec![9, 16]);
        assert_eq!(set.failures.len(), 1);
        assert_eq!(
            (set.failures[0].kind, set.failures[0].size),
            (ProblemKind::Tsp, 5)
        );
        assert!(
            set.failures[0].message.contains("25 qubits"),
            "{}",
            set.failures[0].message
        );

        suite.problems.clear();
        assert!(run_suite_with(&suite, 1, |_, _, _| {}).unwrap().is_empty());
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let inst = make_instance(ProblemKind::MaxCut, 5, 0).unwrap();
        let mut set = RecordSet::default();
        for cycle in 0..2 {
            set.insert(
                ProblemKind::MaxCut,
                5,
                run_vqa(&inst, 64, &quick(), cycle).unwrap(),
            );
        }
        let paths = set.save_dir(dir.path(), "dev_a").unwrap();
        assert_eq!(paths, vec![dir.path().join("dev_a_MCP.json")]);
        let loaded = RecordSet::load_dir(dir.path()).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded["dev_a"], set);
    }

    #[test]
    fn schema_errors_name_field_and_index() {
        let good = r#"{"Depth": 1.0, "Expectation Value": -1.0, "Expectation Value Optimal": -1.0,
            "Job durations [ms]": [], "Optimal params": [], "Optimizer durations [ms]": [],
            "Optimizer iterations": 0, "Qubits": 5, "Total Classic duration [s]": 0.0,
            "Total Quantum duration [s]": 0.0}"#;
        let bad = good.replace(r#""Qubits": 5, "#, "");
        let err = parse_records(&format!("[{good}, {bad}]"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("record 1") && err.contains("Qubits"), "{err}");
        let loaded = parse_records(&format!("[{good}]")).unwrap();
        assert_eq!(loaded[0].expectation_value_baseline, None);
    }

    #[test]
    fn size_inference_from_width() {
        assert_eq!(size_from_qubits(ProblemKind::DominatingSet, 10), Some(5));
        assert_eq!(size_from_qubits(ProblemKind::IndependentSet, 8), Some(5));
        assert_eq!(size_from_qubits(ProblemKind::Tsp, 16), Some(4));
        assert_eq!(size_from_qubits(ProblemKind::Tsp, 10), None);
        assert_eq!(size_from_qubits(ProblemKind::IsingChain, 3), Some(3));
    }

    #[test]
    fn seeds_differ_across_groups_and_cycles() {
        let a = cycle_seed(0, ProblemKind::MaxCut, 5, 0);
        assert_ne!(a, cycle_seed(0, ProblemKind::MaxCut, 5, 1));
        assert_ne!(a, cycle_seed(0, ProblemKind::MaxCut, 6, 0));
        assert_ne!(a, cycle_seed(0, ProblemKind::IsingChain, 5, 0));
        assert_ne!(a, cycle_seed(1, ProblemKind::MaxCut, 5, 0));
        assert_ne!(
            instance_seed(0, ProblemKind::Tsp, 3),
            instance_seed(0, ProblemKind::Tsp, 4)
        );
    }

    #[test]
    fn missing_baselines_are_recomputed_from_seeds() {
        let inst = make_instance(ProblemKind::RandomDiagonal, 2, 8).unwrap();
        let r = run_vqa(&inst, 64, &quick(), 5).unwrap();
        let mut set = RecordSet::default();
        let mut stripped = r.clone();
        stripped.expectation_value_baseline = None;
        set.insert(ProblemKind::RandomDiagonal, 2, stripped);
        assert_eq!(fill_missing_baselines(&mut set, &quick()).unwrap(), 1);
        assert_eq!(set.records_of(ProblemKind::RandomDiagonal)[0], r);

        let mut bare = r;
        bare.expectation_value_baseline = None;
        bare.cycle_seed = None;
        let mut set = RecordSet::default();
        set.insert(ProblemKind::RandomDiagonal, 2, bare);
        assert!(fill_missing_baselines(&mut set, &quick()).is_err());
    }
}
