//! Gate-level circuit representation.
//!
//! Circuits mix primitive gates with a handful of composite gates (quantum
//! OR, OR/NOR-controlled rotations, two-qubit Pauli rotations and the Dicke
//! row initialiser). [`decompose`] lowers composites to the primitive set
//! `{H, X, Rx, Ry, Rz, CNOT, Toffoli, CRy, CRz}`; [`depth`] is only defined
//! on lowered circuits.
//!
//! Composite gates that need scratch space carry explicit ancilla indices.
//! Every ancilla is assumed to be in `|0⟩` on entry and is returned to `|0⟩`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Rx {
        theta: f64,
        qubit: usize,
    },
    Ry {
        theta: f64,
        qubit: usize,
    },
    Rz {
        theta: f64,
        qubit: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    CRy {
        theta: f64,
        control: usize,
        target: usize,
    },
    CRz {
        theta: f64,
        control: usize,
        target: usize,
    },
    /// `target ^= c0 | c1`.
    Qor {
        controls: [usize; 2],
        target: usize,
    },
    /// `target ^= OR(controls)`; needs `k - 2` ancillas for `k >= 3` controls.
    MultiQor {
        controls: Vec<usize>,
        target: usize,
        ancillas: Vec<usize>,
    },
    /// `Rz(theta)` on `target` iff any control is set.
    OrCtrlRz {
        theta: f64,
        controls: Vec<usize>,
        target: usize,
        ancillas: Vec<usize>,
    },
    /// `Rx(theta)` on `target` iff every control is clear.
    NorCtrlRx {
        theta: f64,
        controls: Vec<usize>,
        target: usize,
        ancillas: Vec<usize>,
    },
    /// `exp(-i theta/2 X⊗X)`
    Rxx {
        theta: f64,
        qubits: [usize; 2],
    },
    /// `exp(-i theta/2 Y⊗Y)`
    Ryy {
        theta: f64,
        qubits: [usize; 2],
    },
    /// `exp(-i theta/2 Z⊗Z)`
    Rzz {
        theta: f64,
        qubits: [usize; 2],
    },
    /// Prepares the weight-2 Dicke state on `qubits` from `|0…0⟩`.
    DickeRow {
        qubits: Vec<usize>,
    },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::Toffoli { .. } => "TOFFOLI",
            Gate::CRy { .. } => "CRY",
            Gate::CRz { .. } => "CRZ",
            Gate::Qor { .. } => "QOR",
            Gate::MultiQor { .. } => "MQOR",
            Gate::OrCtrlRz { .. } => "ORCRZ",
            Gate::NorCtrlRx { .. } => "NORCRX",
            Gate::Rxx { .. } => "RXX",
            Gate::Ryy { .. } => "RYY",
            Gate::Rzz { .. } => "RZZ",
            Gate::DickeRow { .. } => "DICKE",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::CRy { theta, .. }
            | Gate::CRz { theta, .. }
            | Gate::OrCtrlRz { theta, .. }
            | Gate::NorCtrlRx { theta, .. }
            | Gate::Rxx { theta, .. }
            | Gate::Ryy { theta, .. }
            | Gate::Rzz { theta, .. } => Some(theta),
            _ => None,
        }
    }

    /// All qubits the gate touches: controls, then targets, then ancillas.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) => vec![*q],
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => {
                vec![*qubit]
            }
            Gate::Cnot { control, target }
            | Gate::CRy {
                control, target, ..
            }
            | Gate::CRz {
                control, target, ..
            } => vec![*control, *target],
            Gate::Toffoli { controls, target } | Gate::Qor { controls, target } => {
                vec![controls[0], controls[1], *target]
            }
            Gate::MultiQor {
                controls,
                target,
                ancillas,
            }
            | Gate::OrCtrlRz {
                controls,
                target,
                ancillas,
                ..
            }
            | Gate::NorCtrlRx {
                controls,
                target,
                ancillas,
                ..
            } => controls
                .iter()
                .chain(std::iter::once(target))
                .chain(ancillas)
                .copied()
                .collect(),
            Gate::Rxx { qubits, .. } | Gate::Ryy { qubits, .. } | Gate::Rzz { qubits, .. } => {
                qubits.to_vec()
            }
            Gate::DickeRow { qubits } => qubits.clone(),
        }
    }

    pub fn is_composite(&self) -> bool {
        matches!(
            self,
            Gate::Qor { .. }
                | Gate::MultiQor { .. }
                | Gate::OrCtrlRz { .. }
                | Gate::NorCtrlRx { .. }
                | Gate::Rxx { .. }
                | Gate::Ryy { .. }
                | Gate::Rzz { .. }
                | Gate::DickeRow { .. }
        )
    }

    /// Ancillas a composite needs for its control count.
    pub fn ancillas_needed(&self) -> usize {
        match self {
            Gate::MultiQor { controls, .. } => controls.len().saturating_sub(2),
            Gate::OrCtrlRz { controls, .. } | Gate::NorCtrlRx { controls, .. } => {
                if controls.len() <= 1 {
                    0
                } else {
                    1 + controls.len() - 2
                }
            }
            _ => 0,
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidGate {
            gate: self.to_string(),
            reason: reason.into(),
        }
    }

    /// Checks operand distinctness, arity, angle finiteness and range.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, q) in qubits.iter().enumerate() {
            if *q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: *q,
                    n_qubits,
                });
            }
            if qubits[..i].contains(q) {
                return Err(self.invalid(format!("qubit {q} used twice")));
            }
        }
        if let Some(theta) = self.angle() {
            if !theta.is_finite() {
                return Err(self.invalid("angle is not finite"));
            }
        }
        match self {
            Gate::MultiQor { controls, .. }
            | Gate::OrCtrlRz { controls, .. }
            | Gate::NorCtrlRx { controls, .. }
                if controls.is_empty() =>
            {
                Err(self.invalid("needs at least one control"))
            }
            Gate::DickeRow { qubits } if qubits.len() < 2 => {
                Err(self.invalid("needs at least two qubits"))
            }
            _ => Ok(()),
        }
    }

    /// Inverse of a primitive gate. Composites return `None`.
    pub fn inverse(&self) -> Option<Gate> {
        let g = match self.clone() {
            g @ (Gate::H(_) | Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. }) => g,
            Gate::Rx { theta, qubit } => Gate::Rx {
                theta: -theta,
                qubit,
            },
            Gate::Ry { theta, qubit } => Gate::Ry {
                theta: -theta,
                qubit,
            },
            Gate::Rz { theta, qubit } => Gate::Rz {
                theta: -theta,
                qubit,
            },
            Gate::CRy {
                theta,
                control,
                target,
            } => Gate::CRy {
                theta: -theta,
                control,
                target,
            },
            Gate::CRz {
                theta,
                control,
                target,
            } => Gate::CRz {
                theta: -theta,
                control,
                target,
            },
            _ => return None,
        };
        Some(g)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if let Some(theta) = self.angle() {
            write!(f, " {theta}")?;
        }
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits);
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_decomposed(&self) -> bool {
        !self.gates.iter().any(Gate::is_composite)
    }

    /// Reversed gate order with every gate inverted. Primitive gates only.
    pub fn inverse(&self) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                g.inverse()
                    .ok_or_else(|| Error::NotDecomposed(g.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }

    /// One gate per line: `KIND angle? q...`. Debug aid only.
    pub fn dump(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// Length of the critical path: gates sharing a qubit are serialised, gates on
/// disjoint qubits share a layer (as-soon-as-possible scheduling).
pub fn depth(circuit: &Circuit) -> Result<usize> {
    let mut frontier = vec![0usize; circuit.n_qubits];
    let mut deepest = 0;
    for gate in &circuit.gates {
        if gate.is_composite() {
            return Err(Error::NotDecomposed(gate.to_string()));
        }
        let qubits = gate.qubits();
        let layer = qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for q in qubits {
            frontier[q] = layer;
        }
        deepest = deepest.max(layer);
    }
    Ok(deepest)
}

/// Lowers every composite gate to primitive gates.
pub fn decompose(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Vec::with_capacity(circuit.gates.len() * 4);
    for gate in &circuit.gates {
        lower(gate, &mut out)?;
    }
    Ok(Circuit {
        n_qubits: circuit.n_qubits,
        gates: out,
    })
}

fn check_ancillas(gate: &Gate, ancillas: &[usize]) -> Result<()> {
    let needed = gate.ancillas_needed();
    if ancillas.len() < needed {
        return Err(Error::InsufficientAncillas {
            gate: gate.to_string(),
            needed,
            given: ancillas.len(),
        });
    }
    Ok(())
}

fn lower(gate: &Gate, out: &mut Vec<Gate>) -> Result<()> {
    match gate {
        Gate::Qor { controls, target } => qor(controls[0], controls[1], *target, out),
        Gate::MultiQor {
            controls,
            target,
            ancillas,
        } => {
            check_ancillas(gate, ancillas)?;
            multi_qor(controls, *target, ancillas, out);
        }
        Gate::OrCtrlRz {
            theta,
            controls,
            target,
            ancillas,
        } => {
            check_ancillas(gate, ancillas)?;
            if let [control] = controls[..] {
                out.push(Gate::CRz {
                    theta: *theta,
                    control,
                    target: *target,
                });
            } else {
                let (flag, scratch) = ancillas.split_first().expect("checked above");
                multi_qor(controls, *flag, scratch, out);
                out.push(Gate::CRz {
                    theta: *theta,
                    control: *flag,
                    target: *target,
                });
                multi_qor(controls, *flag, scratch, out);
            }
        }
        Gate::NorCtrlRx {
            theta,
            controls,
            target,
            ancillas,
        } => {
            check_ancillas(gate, ancillas)?;
            // NOR = NOT(OR): compute OR into a flag, flip it, control on it.
            let (flag, compute): (usize, Option<&[usize]>) = match controls[..] {
                [control] => (control, None),
                _ => {
                    let (flag, scratch) = ancillas.split_first().expect("checked above");
                    (*flag, Some(scratch))
                }
            };
            if let Some(scratch) = compute {
                multi_qor(controls, flag, scratch, out);
            }
            out.push(Gate::X(flag));
            controlled_rx(*theta, flag, *target, out);
            out.push(Gate::X(flag));
            if let Some(scratch) = compute {
                multi_qor(controls, flag, scratch, out);
            }
        }
        Gate::Rxx {
            theta,
            qubits: [a, b],
        } => {
            out.extend([Gate::H(*a), Gate::H(*b)]);
            zz_core(*theta, *a, *b, out);
            out.extend([Gate::H(*a), Gate::H(*b)]);
        }
        Gate::Ryy {
            theta,
            qubits: [a, b],
        } => {
            for q in [*a, *b] {
                out.push(Gate::Rx {
                    theta: -FRAC_PI_2,
                    qubit: q,
                });
            }
            zz_core(*theta, *a, *b, out);
            for q in [*a, *b] {
                out.push(Gate::Rx {
                    theta: FRAC_PI_2,
                    qubit: q,
                });
            }
        }
        Gate::Rzz {
            theta,
            qubits: [a, b],
        } => zz_core(*theta, *a, *b, out),
        Gate::DickeRow { qubits } => dicke(qubits, 2, out),
        primitive => out.push(primitive.clone()),
    }
    Ok(())
}

fn qor(c0: usize, c1: usize, target: usize, out: &mut Vec<Gate>) {
    out.extend([
        Gate::Cnot {
            control: c0,
            target,
        },
        Gate::Cnot {
            control: c1,
            target,
        },
        Gate::Toffoli {
            controls: [c0, c1],
            target,
        },
    ]);
}

/// Chain of two-input OR gates through `ancillas`, then uncomputation.
/// Caller guarantees `ancillas.len() >= controls.len() - 2`.
fn multi_qor(controls: &[usize], target: usize, ancillas: &[usize], out: &mut Vec<Gate>) {
    match controls {
        [] => {}
        [c] => out.push(Gate::Cnot {
            control: *c,
            target,
        }),
        [c0, c1] => qor(*c0, *c1, target, out),
        _ => {
            let k = controls.len();
            let mut compute = Vec::with_capacity(k - 2);
            compute.push((controls[0], controls[1], ancillas[0]));
            for i in 2..k - 1 {
                compute.push((controls[i], ancillas[i - 2], ancillas[i - 1]));
            }
            for &(a, b, t) in &compute {
                qor(a, b, t, out);
            }
            qor(controls[k - 1], ancillas[k - 3], target, out);
            for &(a, b, t) in compute.iter().rev() {
                qor(a, b, t, out);
            }
        }
    }
}

fn controlled_rx(theta: f64, control: usize, target: usize, out: &mut Vec<Gate>) {
    out.push(Gate::H(target));
    out.push(Gate::CRz {
        theta,
        control,
        target,
    });
    out.push(Gate::H(target));
}

fn zz_core(theta: f64, a: usize, b: usize, out: &mut Vec<Gate>) {
    out.push(Gate::Cnot {
        control: a,
        target: b,
    });
    out.push(Gate::Rz { theta, qubit: b });
    out.push(Gate::Cnot {
        control: a,
        target: b,
    });
}

/// Doubly-controlled `Ry(theta)` from two Toffolis and two half rotations.
fn ccry(theta: f64, controls: [usize; 2], target: usize, out: &mut Vec<Gate>) {
    out.push(Gate::Ry {
        theta: theta / 2.0,
        qubit: target,
    });
    out.push(Gate::Toffoli { controls, target });
    out.push(Gate::Ry {
        theta: -theta / 2.0,
        qubit: target,
    });
    out.push(Gate::Toffoli { controls, target });
}

/// Split-and-cyclic-shift Dicke preparation: flip the last `weight` qubits,
/// then apply one SCS block per prefix length `m = n..2`.
fn dicke(qubits: &[usize], weight: usize, out: &mut Vec<Gate>) {
    let n = qubits.len();
    let weight = weight.min(n);
    for &q in &qubits[n - weight..] {
        out.push(Gate::X(q));
    }
    for m in (2..=n).rev() {
        let last = qubits[m - 1];
        for l in 1..=weight.min(m - 1) {
            let target = qubits[m - 1 - l];
            let theta = 2.0 * ((l as f64) / (m as f64)).sqrt().acos();
            let cnot = Gate::Cnot {
                control: target,
                target: last,
            };
            out.push(cnot.clone());
            if l == 1 {
                out.push(Gate::CRy {
                    theta,
                    control: last,
                    target,
                });
            } else {
                ccry(theta, [last, qubits[m - l]], target, out);
            }
            out.push(cnot);
        }
    }
}
