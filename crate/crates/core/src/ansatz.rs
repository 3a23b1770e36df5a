//! Parameterised circuits per problem kind and measurement post-processing.
//!
//! QAOA kinds use a single `p = 1` layer with parameters `(γ, β)`: cost
//! unitary `exp(-iγ H_C)` and mixer `exp(-iβ H_M)`. RH uses one `Rx(θ_i)` per
//! qubit. IC uses an SU(2) ansatz (`Ry`, `Rz`, full CNOT entanglement, `Ry`,
//! `Rz`) measured in the Z basis and, for the `XX` couplings, the X basis.

use crate::circuit::{decompose, Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::problems::{diagonal_values, Payload, ProblemInstance, ProblemKind, TSP_PENALTY};
use crate::simulator::{exact_expectation, Histogram, Simulator, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn label(self) -> &'static str {
        match self {
            Basis::Z => "Z",
            Basis::X => "X",
        }
    }
}

/// Circuits to run for one objective evaluation, each tagged with its
/// measurement basis.
#[derive(Debug, Clone)]
pub struct CircuitSet {
    pub circuits: Vec<(Circuit, Basis)>,
}

impl CircuitSet {
    pub fn decomposed(&self) -> Result<CircuitSet> {
        let circuits = self
            .circuits
            .iter()
            .map(|(c, b)| Ok((decompose(c)?, *b)))
            .collect::<Result<_>>()?;
        Ok(CircuitSet { circuits })
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }
}

pub fn param_count(instance: &ProblemInstance) -> usize {
    match instance.kind {
        ProblemKind::RandomDiagonal => instance.size,
        ProblemKind::IsingChain => 4 * instance.size,
        _ => 2,
    }
}

/// Instance plus the cached objective data needed to score measurements.
#[derive(Debug, Clone)]
pub struct Ansatz {
    instance: ProblemInstance,
    /// Objective per logical outcome, for every kind except IC.
    diagonal: Option<Vec<f64>>,
    hamiltonian: Option<Hamiltonian>,
}

impl Ansatz {
    pub fn new(instance: ProblemInstance) -> Result<Self> {
        let diagonal = match instance.kind {
            ProblemKind::IsingChain => None,
            _ => Some(diagonal_values(&instance)?),
        };
        let hamiltonian = instance.hamiltonian();
        Ok(Self {
            instance,
            diagonal,
            hamiltonian,
        })
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn param_count(&self) -> usize {
        param_count(&self.instance)
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        let expected = self.param_count();
        if params.len() != expected {
            return Err(Error::ParamCount {
                expected,
                got: params.len(),
            });
        }
        Ok(())
    }

    pub fn build_circuits(&self, params: &[f64]) -> Result<CircuitSet> {
        self.check_params(params)?;
        let inst = &self.instance;
        let n = inst.size;
        let mut c = Circuit::new(inst.qubits);
        let circuits = match inst.kind {
            ProblemKind::MaxCut => {
                let (gamma, beta) = (params[0], params[1]);
                let graph = inst.graph().expect("graph payload");
                for q in 0..n {
                    c.push(Gate::H(q))?;
                }
                for &(u, v) in &graph.edges {
                    c.push(Gate::Rzz {
                        theta: 2.0 * gamma,
                        qubits: [u, v],
                    })?;
                }
                self.append_mixer(&mut c, beta)?;
                vec![(c, Basis::Z)]
            }
            ProblemKind::DominatingSet => {
                let (gamma, beta) = (params[0], params[1]);
                let graph = inst.graph().expect("graph payload");
                let cost = n;
                let scratch: Vec<usize> = (n + 1..inst.qubits).collect();
                for q in 0..=n {
                    c.push(Gate::H(q))?;
                }
                // Covered-node clauses: OR over the closed neighbourhood.
                for k in 0..n {
                    let mut controls = graph.neighbors(k);
                    controls.push(k);
                    controls.sort_unstable();
                    c.push(Gate::OrCtrlRz {
                        theta: gamma,
                        controls,
                        target: cost,
                        ancillas: scratch.clone(),
                    })?;
                }
                // Unused-node clauses: inverse-controlled Rz.
                for k in 0..n {
                    c.push(Gate::X(k))?;
                    c.push(Gate::CRz {
                        theta: gamma,
                        control: k,
                        target: cost,
                    })?;
                    c.push(Gate::X(k))?;
                }
                self.append_mixer(&mut c, beta)?;
                vec![(c, Basis::Z)]
            }
            ProblemKind::IndependentSet => {
                let (gamma, beta) = (params[0], params[1]);
                for q in 0..n {
                    c.push(Gate::H(q))?;
                }
                for q in 0..n {
                    c.push(Gate::Rz {
                        theta: 2.0 * gamma,
                        qubit: q,
                    })?;
                }
                self.append_mixer(&mut c, beta)?;
                vec![(c, Basis::Z)]
            }
            ProblemKind::Tsp => {
                let (gamma, beta) = (params[0], params[1]);
                let d = inst.distances().expect("TSP distances");
                for row in 0..n {
                    c.push(Gate::DickeRow {
                        qubits: (row * n..(row + 1) * n).collect(),
                    })?;
                }
                // exp(-iγ H_C) with H_C = -½ Σ D_ij Z_ij - ω Σ Z_ij Z_ji.
                for i in 0..n {
                    for j in 0..n {
                        c.push(Gate::Rz {
                            theta: -gamma * d[i][j],
                            qubit: i * n + j,
                        })?;
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        c.push(Gate::Rzz {
                            theta: -2.0 * TSP_PENALTY * gamma,
                            qubits: [i * n + j, j * n + i],
                        })?;
                    }
                }
                self.append_mixer(&mut c, beta)?;
                vec![(c, Basis::Z)]
            }
            ProblemKind::RandomDiagonal => {
                for (q, &theta) in params.iter().enumerate() {
                    c.push(Gate::Rx { theta, qubit: q })?;
                }
                vec![(c, Basis::Z)]
            }
            ProblemKind::IsingChain => {
                for layer in [0, 2] {
                    for q in 0..n {
                        c.push(Gate::Ry {
                            theta: params[layer * n + q],
                            qubit: q,
                        })?;
                    }
                    for q in 0..n {
                        c.push(Gate::Rz {
                            theta: params[(layer + 1) * n + q],
                            qubit: q,
                        })?;
                    }
                    if layer == 0 {
                        for i in 0..n {
                            for j in i + 1..n {
                                c.push(Gate::Cnot {
                                    control: i,
                                    target: j,
                                })?;
                            }
                        }
                    }
                }
                let mut x = c.clone();
                for q in 0..n {
                    x.push(Gate::H(q))?;
                }
                vec![(c, Basis::Z), (x, Basis::X)]
            }
        };
        Ok(CircuitSet { circuits })
    }

    /// The QAOA mixer `exp(-iβ H_M)` alone, on a fresh register.
    pub fn mixer(&self, beta: f64) -> Result<Circuit> {
        let mut c = Circuit::new(self.instance.qubits);
        self.append_mixer(&mut c, beta)?;
        Ok(c)
    }

    fn append_mixer(&self, c: &mut Circuit, beta: f64) -> Result<()> {
        let inst = &self.instance;
        let n = inst.size;
        match inst.kind {
            ProblemKind::MaxCut | ProblemKind::DominatingSet => {
                for q in 0..n {
                    c.push(Gate::Rx {
                        theta: 2.0 * beta,
                        qubit: q,
                    })?;
                }
            }
            ProblemKind::IndependentSet => {
                let graph = inst.graph().expect("graph payload");
                let ancillas: Vec<usize> = (n..inst.qubits).collect();
                for q in 0..n {
                    c.push(Gate::NorCtrlRx {
                        theta: 2.0 * beta,
                        controls: graph.neighbors(q),
                        target: q,
                        ancillas: ancillas.clone(),
                    })?;
                }
            }
            ProblemKind::Tsp => {
                // exp(-iβ (XX + YY)/2) on neighbouring qubits of each row.
                for row in 0..n {
                    for j in 0..n - 1 {
                        let pair = [row * n + j, row * n + j + 1];
                        c.push(Gate::Rxx {
                            theta: beta,
                            qubits: pair,
                        })?;
                        c.push(Gate::Ryy {
                            theta: beta,
                            qubits: pair,
                        })?;
                    }
                }
            }
            ProblemKind::RandomDiagonal | ProblemKind::IsingChain => {
                return Err(Error::Config(format!("{} has no mixer", inst.kind)));
            }
        }
        Ok(())
    }

    fn logical_mask(&self) -> u64 {
        (1u64 << self.instance.logical_qubits()) - 1
    }

    /// Expectation of the objective from measured counts.
    pub fn expectation_from_counts(&self, histograms: &[(Basis, &Histogram)]) -> Result<f64> {
        let find = |basis: Basis| {
            histograms
                .iter()
                .find(|(b, _)| *b == basis)
                .map(|(_, h)| *h)
                .ok_or(Error::MissingBasis(basis.label()))
        };
        let z = find(Basis::Z)?;
        self.check_width(z)?;
        let shots = z.shots() as f64;
        match &self.diagonal {
            Some(values) => {
                let mask = self.logical_mask();
                let total: f64 = z
                    .iter()
                    .map(|(x, count)| count as f64 * values[(x & mask) as usize])
                    .sum();
                Ok(total / shots)
            }
            None => {
                let x = find(Basis::X)?;
                self.check_width(x)?;
                let Payload::IsingChain { coupling, field } = self.instance.payload else {
                    unreachable!("only IC lacks a diagonal objective");
                };
                let n = self.instance.size;
                let z_sum: f64 = z
                    .iter()
                    .map(|(b, count)| {
                        let ones = (b & self.logical_mask()).count_ones() as f64;
                        count as f64 * (n as f64 - 2.0 * ones)
                    })
                    .sum::<f64>()
                    / shots;
                let xx_sum: f64 = x
                    .iter()
                    .map(|(b, count)| {
                        let parity: f64 = (0..n - 1)
                            .map(|i| {
                                if (b >> i ^ b >> (i + 1)) & 1 == 1 {
                                    -1.0
                                } else {
                                    1.0
                                }
                            })
                            .sum();
                        count as f64 * parity
                    })
                    .sum::<f64>()
                    / x.shots() as f64;
                Ok(-coupling * xx_sum - field * z_sum)
            }
        }
    }

    fn check_width(&self, h: &Histogram) -> Result<()> {
        if h.n_qubits() != self.instance.qubits {
            return Err(Error::BitLength {
                expected: self.instance.qubits,
                got: h.n_qubits(),
            });
        }
        Ok(())
    }

    /// Noiseless expectation of the objective on the prepared state.
    pub fn exact_expectation(&self, params: &[f64], simulator: &Simulator) -> Result<f64> {
        let set = self.build_circuits(params)?;
        let (circuit, _) = &set.circuits[0];
        let state = simulator.simulate(&decompose(circuit)?)?;
        self.exact_expectation_of(&state)
    }

    /// Objective expectation on an already prepared (pre-measurement) state.
    pub fn exact_expectation_of(&self, state: &StateVector) -> Result<f64> {
        match (&self.diagonal, &self.hamiltonian) {
            (Some(values), _) => {
                let mask = self.logical_mask() as usize;
                Ok(state
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.norm_sqr() * values[i & mask])
                    .sum())
            }
            (None, Some(h)) => exact_expectation(state, h),
            (None, None) => unreachable!("every kind has a diagonal or a Hamiltonian"),
        }
    }
}

pub fn build_circuits(instance: &ProblemInstance, params: &[f64]) -> Result<CircuitSet> {
    Ansatz::new(instance.clone())?.build_circuits(params)
}

pub fn expectation_from_counts(
    instance: &ProblemInstance,
    histograms: &[(Basis, &Histogram)],
) -> Result<f64> {
    Ansatz::new(instance.clone())?.expectation_from_counts(histograms)
}
