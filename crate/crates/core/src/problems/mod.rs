//! Benchmark problem instances, their classical costs and exact optima.
//!
//! Graph problems (MCP, DSP, MIS) use the circulant 4-regular graph with
//! offsets `{1, 2}`. TSP encodes an `n × n` adjacency matrix row-major into
//! `n²` qubits. RH is a random diagonal `Σ r_i Z_i`; IC is the open
//! transverse-field Ising chain with `J = h = 1`.
//!
//! All bitstring costs follow the "lower is better" convention the optimizer
//! minimises.

mod ground;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Pauli, PauliString};

pub use ground::{ground_state, MAX_QUBITS as MAX_GROUND_STATE_QUBITS};

/// Symmetry penalty for TSP adjacency strings.
pub const TSP_PENALTY: f64 = 5.0;
/// Self-distance on the TSP distance matrix diagonal.
pub const TSP_SELF_DISTANCE: f64 = 10.0;
/// Cost per edge inside a candidate MIS set.
pub const MIS_CONFLICT_PENALTY: f64 = 2.0;

/// Largest logical register searched exhaustively.
pub const MAX_EXHAUSTIVE_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemKind {
    /// MaxCut
    #[serde(rename = "MCP")]
    MaxCut,
    /// Dominating set
    #[serde(rename = "DSP")]
    DominatingSet,
    /// Maximum independent set
    #[serde(rename = "MIS")]
    IndependentSet,
    /// Travelling salesperson
    #[serde(rename = "TSP")]
    Tsp,
    /// Random diagonal Hamiltonian
    #[serde(rename = "RH")]
    RandomDiagonal,
    /// Transverse-field Ising chain
    #[serde(rename = "IC")]
    IsingChain,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::MaxCut,
        ProblemKind::DominatingSet,
        ProblemKind::IndependentSet,
        ProblemKind::Tsp,
        ProblemKind::RandomDiagonal,
        ProblemKind::IsingChain,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ProblemKind::MaxCut => "MCP",
            ProblemKind::DominatingSet => "DSP",
            ProblemKind::IndependentSet => "MIS",
            ProblemKind::Tsp => "TSP",
            ProblemKind::RandomDiagonal => "RH",
            ProblemKind::IsingChain => "IC",
        }
    }

    pub fn is_qaoa(self) -> bool {
        matches!(
            self,
            ProblemKind::MaxCut
                | ProblemKind::DominatingSet
                | ProblemKind::IndependentSet
                | ProblemKind::Tsp
        )
    }

    /// Inclusive supported size range.
    pub fn size_range(self) -> (usize, usize) {
        match self {
            ProblemKind::MaxCut | ProblemKind::DominatingSet | ProblemKind::IndependentSet => {
                (5, 15)
            }
            ProblemKind::Tsp => (3, 4),
            ProblemKind::RandomDiagonal | ProblemKind::IsingChain => (2, 15),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown problem kind {s:?}")))
    }
}

/// Total register width, ancillas included.
pub fn qubits_required(kind: ProblemKind, size: usize) -> usize {
    match kind {
        ProblemKind::MaxCut | ProblemKind::RandomDiagonal | ProblemKind::IsingChain => size,
        ProblemKind::DominatingSet => size + 5,
        ProblemKind::IndependentSet => size + 3,
        ProblemKind::Tsp => size * size,
    }
}

/// Qubits that carry the solution bitstring (the lowest indices).
pub fn logical_qubits(kind: ProblemKind, size: usize) -> usize {
    match kind {
        ProblemKind::Tsp => size * size,
        _ => size,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    /// Unordered pairs stored as `(low, high)`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Distance matrix, TSP only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<f64>>>,
}

impl Graph {
    /// Circulant graph linking `i` to `i ± 1` and `i ± 2` (mod `n`).
    pub fn four_regular(n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::Config(format!(
                "a 4-regular circulant graph needs at least 5 nodes, got {n}"
            )));
        }
        let mut edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| [1, 2].map(|d| (i, (i + d) % n)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            n,
            edges,
            weights: None,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self {
            n,
            edges,
            weights: None,
        }
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == node || b == node)
            .count()
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match () {
                _ if a == node => Some(b),
                _ if b == node => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Graph(Graph),
    RandomDiagonal { coefficients: Vec<f64> },
    IsingChain { coupling: f64, field: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub size: usize,
    pub seed: u64,
    pub qubits: usize,
    pub payload: Payload,
}

/// Builds the deterministic instance for `(kind, size, seed)`.
pub fn make_instance(kind: ProblemKind, size: usize, seed: u64) -> Result<ProblemInstance> {
    let (min, max) = kind.size_range();
    if size < min || size > max {
        return Err(Error::SizeOutOfRange {
            kind,
            size,
            min,
            max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payload = match kind {
        ProblemKind::MaxCut | ProblemKind::DominatingSet | ProblemKind::IndependentSet => {
            Payload::Graph(Graph::four_regular(size)?)
        }
        ProblemKind::Tsp => {
            let mut graph = Graph::complete(size);
            let mut d = vec![vec![TSP_SELF_DISTANCE; size]; size];
            for &(i, j) in &graph.edges {
                let w = rng.gen_range(1..=9) as f64;
                d[i][j] = w;
                d[j][i] = w;
            }
            graph.weights = Some(d);
            Payload::Graph(graph)
        }
        ProblemKind::RandomDiagonal => Payload::RandomDiagonal {
            coefficients: (0..size).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        },
        ProblemKind::IsingChain => Payload::IsingChain {
            coupling: 1.0,
            field: 1.0,
        },
    };
    Ok(ProblemInstance {
        kind,
        size,
        seed,
        qubits: qubits_required(kind, size),
        payload,
    })
}

impl ProblemInstance {
    pub fn logical_qubits(&self) -> usize {
        logical_qubits(self.kind, self.size)
    }

    pub fn graph(&self) -> Option<&Graph> {
        match &self.payload {
            Payload::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn distances(&self) -> Option<&Vec<Vec<f64>>> {
        self.graph().and_then(|g| g.weights.as_ref())
    }

    /// The VQE observable (RH and IC only).
    pub fn hamiltonian(&self) -> Option<Hamiltonian> {
        let n = self.size;
        let terms = match &self.payload {
            Payload::RandomDiagonal { coefficients } => coefficients
                .iter()
                .enumerate()
                .map(|(i, &r)| (r, PauliString::on(n, Pauli::Z, &[i])))
                .collect(),
            Payload::IsingChain { coupling, field } => {
                let bonds =
                    (0..n - 1).map(|i| (-coupling, PauliString::on(n, Pauli::X, &[i, i + 1])));
                let fields = (0..n).map(|i| (-field, PauliString::on(n, Pauli::Z, &[i])));
                bonds.chain(fields).collect()
            }
            Payload::Graph(_) => return None,
        };
        Some(Hamiltonian::new(n, terms).expect("well-formed terms"))
    }
}

fn bit(outcome: u64, k: usize) -> bool {
    outcome >> k & 1 == 1
}

/// Cost of a logical outcome (qubit `k` is bit `k`). Callers guarantee a
/// bitstring-cost kind.
fn cost_of(instance: &ProblemInstance, x: u64) -> f64 {
    let graph = instance.graph().expect("graph payload for bitstring costs");
    match instance.kind {
        ProblemKind::MaxCut => {
            -(graph
                .edges
                .iter()
                .filter(|&&(a, b)| bit(x, a) != bit(x, b))
                .count() as f64)
        }
        ProblemKind::DominatingSet => {
            let covered = (0..graph.n)
                .filter(|&k| bit(x, k) || graph.neighbors(k).iter().any(|&j| bit(x, j)))
                .count();
            x.count_ones() as f64 - covered as f64
        }
        ProblemKind::IndependentSet => {
            let conflicts = graph
                .edges
                .iter()
                .filter(|&&(a, b)| bit(x, a) && bit(x, b))
                .count();
            MIS_CONFLICT_PENALTY * conflicts as f64 - x.count_ones() as f64
        }
        ProblemKind::Tsp => {
            let d = graph.weights.as_ref().expect("TSP distances");
            let n = graph.n;
            let mut length = 0.0;
            let mut asymmetric = 0usize;
            for i in 0..n {
                for j in 0..n {
                    if bit(x, i * n + j) {
                        length += d[i][j];
                    }
                    if j > i && bit(x, i * n + j) != bit(x, j * n + i) {
                        asymmetric += 1;
                    }
                }
            }
            0.5 * length + TSP_PENALTY * asymmetric as f64
        }
        ProblemKind::RandomDiagonal | ProblemKind::IsingChain => unreachable!(),
    }
}

/// Classical objective of a logical bitstring (ancillas excluded).
pub fn evaluate_cost(instance: &ProblemInstance, bits: &[bool]) -> Result<f64> {
    if !instance.kind.is_qaoa() {
        return Err(Error::NoClassicalCost(instance.kind));
    }
    let n = instance.logical_qubits();
    if bits.len() != n {
        return Err(Error::BitLength {
            expected: n,
            got: bits.len(),
        });
    }
    let x = bits
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, &b)| acc | (b as u64) << k);
    Ok(cost_of(instance, x))
}

/// Diagonal objective over every logical outcome: bitstring costs for the
/// QAOA kinds, `Σ r_i (1 - 2 b_i)` for RH. IC is not diagonal.
pub fn diagonal_values(instance: &ProblemInstance) -> Result<Vec<f64>> {
    let n = instance.logical_qubits();
    if n > MAX_EXHAUSTIVE_BITS {
        return Err(Error::TooLargeForOracle(format!("{n} logical bits")));
    }
    match instance.kind {
        ProblemKind::IsingChain => Err(Error::NoClassicalCost(instance.kind)),
        ProblemKind::RandomDiagonal => Ok(instance
            .hamiltonian()
            .and_then(|h| h.diagonal())
            .expect("RH is diagonal")),
        _ => Ok((0..1u64 << n).map(|x| cost_of(instance, x)).collect()),
    }
}

/// Row-major TSP string in which every row has exactly two ones: the subspace
/// the Dicke initial state and swap mixer never leave.
pub fn tsp_row_feasible(n: usize, x: u64) -> bool {
    (0..n).all(|i| ((x >> (i * n)) & ((1 << n) - 1)).count_ones() == 2)
}

/// Exact optimum: exhaustive minimum for the bitstring kinds (TSP over the
/// row-feasible subspace), the least diagonal entry for RH, and the ground
/// energy for IC.
pub fn brute_force_optimum(instance: &ProblemInstance) -> Result<f64> {
    match instance.kind {
        ProblemKind::IsingChain => {
            let h = instance.hamiltonian().expect("IC Hamiltonian");
            Ok(ground_state(&h)?.0)
        }
        ProblemKind::Tsp => {
            let n = instance.size;
            let values = diagonal_values(instance)?;
            Ok(values
                .iter()
                .enumerate()
                .filter(|(x, _)| tsp_row_feasible(n, *x as u64))
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min))
        }
        _ => Ok(diagonal_values(instance)?
            .into_iter()
            .fold(f64::INFINITY, f64::min)),
    }
}

/// Shortest Hamiltonian cycle by enumerating permutations that start at node 0.
pub fn tsp_tour_optimum(instance: &ProblemInstance) -> Option<f64> {
    let d = instance.distances()?;
    let n = d.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |perm| {
        let mut prev = 0;
        let mut length = 0.0;
        for &v in perm {
            length += d[prev][v];
            prev = v;
        }
        length += d[prev][0];
        best = best.min(length);
    });
    Some(best)
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
