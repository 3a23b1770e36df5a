//! Suite configuration, read from a single JSON document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::OptimConfig;
use crate::problems::ProblemKind;
use crate::simulator::DEFAULT_MAX_QUBITS;

/// One problem kind with an inclusive size range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// `[first, last]`, both inclusive.
    pub sizes: [usize; 2],
}

impl ProblemSpec {
    pub fn sizes(&self) -> std::ops::RangeInclusive<usize> {
        self.sizes[0]..=self.sizes[1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Label used in record file names and score output.
    #[serde(default = "default_device")]
    pub device: String,
    #[serde(default)]
    pub problems: Vec<ProblemSpec>,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_cycles")]
    pub cycles: usize,
    /// Base seed; instance and cycle seeds are derived from it.
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default = "default_a_star")]
    pub a_star: f64,
    #[serde(default = "default_max_qubits")]
    pub max_qubits: usize,
    #[serde(default)]
    pub optimizer: OptimConfig,
}

fn default_device() -> String {
    "statevector".into()
}

fn default_shots() -> u64 {
    4096
}

fn default_cycles() -> usize {
    10
}

fn default_a_star() -> f64 {
    0.2
}

fn default_max_qubits() -> usize {
    DEFAULT_MAX_QUBITS
}

impl SuiteConfig {
    pub fn new(output_dir: impl Into<PathBuf>) -> Self {
        Self {
            device: default_device(),
            problems: Vec::new(),
            shots: default_shots(),
            cycles: default_cycles(),
            seed: 0,
            output_dir: output_dir.into(),
            a_star: default_a_star(),
            max_qubits: default_max_qubits(),
            optimizer: OptimConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            e => e,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if self.device.is_empty() || self.device.contains(['/', '\\']) {
            return fail(
                "device",
                format!(
                    "{:?} must be non-empty without path separators",
                    self.device
                ),
            );
        }
        if self.shots == 0 {
            return fail("shots", "must be at least 1".into());
        }
        if self.cycles == 0 {
            return fail("cycles", "must be at least 1".into());
        }
        if !(self.a_star > 0.0 && self.a_star < 1.0) {
            return fail("a_star", format!("{} is not in (0, 1)", self.a_star));
        }
        if self.max_qubits == 0 || self.max_qubits > 30 {
            return fail(
                "max_qubits",
                format!("{} is not in 1..=30", self.max_qubits),
            );
        }
        let opt = &self.optimizer;
        if opt.max_iterations == 0 {
            return fail("optimizer.max_iterations", "must be at least 1".into());
        }
        if !(opt.final_trust_radius > 0.0 && opt.final_trust_radius < opt.initial_trust_radius) {
            return fail(
                "optimizer.final_trust_radius",
                format!(
                    "{} must be positive and below initial_trust_radius {}",
                    opt.final_trust_radius, opt.initial_trust_radius
                ),
            );
        }
        for (i, p) in self.problems.iter().enumerate() {
            if p.sizes[0] > p.sizes[1] || p.sizes[0] == 0 {
                return fail(
                    &format!("problems[{i}].sizes"),
                    format!("{:?} is not a non-empty range of positive sizes", p.sizes),
                );
            }
            if self.problems[..i].iter().any(|q| q.kind == p.kind) {
                return fail(
                    &format!("problems[{i}].kind"),
                    format!("{} listed twice", p.kind),
                );
            }
        }
        Ok(())
    }
}
