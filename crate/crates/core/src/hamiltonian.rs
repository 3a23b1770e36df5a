//! Real-coefficient Pauli-sum observables.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Pauli operator per qubit, index `k` acting on qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self(ops)
    }

    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// `op` on each listed qubit, identity elsewhere.
    pub fn on(n: usize, op: Pauli, qubits: &[usize]) -> Self {
        let mut ops = vec![Pauli::I; n];
        for &q in qubits {
            ops[q] = op;
        }
        Self(ops)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// `(flip mask, sign mask, number of Y factors)` for basis-index action.
    fn masks(&self) -> (usize, usize, usize) {
        let mut flip = 0;
        let mut sign = 0;
        let mut ys = 0;
        for (k, op) in self.0.iter().enumerate() {
            match op {
                Pauli::I => {}
                Pauli::X => flip |= 1 << k,
                Pauli::Y => {
                    flip |= 1 << k;
                    sign |= 1 << k;
                    ys += 1;
                }
                Pauli::Z => sign |= 1 << k,
            }
        }
        (flip, sign, ys)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.0 {
            let c = match op {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `Σ c_k P_k` with real `c_k`; Hermitian by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        for (c, p) in &terms {
            if !c.is_finite() {
                return Err(Error::Config(format!("non-finite coefficient on {p}")));
            }
            if p.len() != n_qubits {
                return Err(Error::Config(format!(
                    "pauli string {p} has length {}, expected {n_qubits}",
                    p.len()
                )));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// `H|ψ⟩` for a state on `n_qubits` qubits.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (coef, p) in &self.terms {
            let (flip, sign, ys) = p.masks();
            let y_phase = Complex64::i().powu(ys as u32) * coef;
            for (i, amp) in psi.iter().enumerate() {
                if amp.re == 0.0 && amp.im == 0.0 {
                    continue;
                }
                let s = if (i & sign).count_ones() % 2 == 1 {
                    -y_phase
                } else {
                    y_phase
                };
                out[i ^ flip] += s * amp;
            }
        }
        out
    }

    /// Diagonal entries, valid when every term is built from I and Z.
    pub fn diagonal(&self) -> Option<Vec<f64>> {
        let dim = 1usize << self.n_qubits;
        let mut diag = vec![0.0; dim];
        for (coef, p) in &self.terms {
            let (flip, sign, _) = p.masks();
            if flip != 0 {
                return None;
            }
            for (i, d) in diag.iter_mut().enumerate() {
                if (i & sign).count_ones() % 2 == 1 {
                    *d -= coef;
                } else {
                    *d += coef;
                }
            }
        }
        Some(diag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn y_acts_with_phase() {
        let h = Hamiltonian::new(1, vec![(1.0, PauliString::on(1, Pauli::Y, &[0]))]).unwrap();
        let out = h.apply(&[c(1.0), c(0.0)]);
        assert_eq!(out[1], Complex64::i());
        let out = h.apply(&[c(0.0), c(1.0)]);
        assert_eq!(out[0], -Complex64::i());
    }

    #[test]
    fn z_diagonal() {
        let h = Hamiltonian::new(
            2,
            vec![
                (0.5, PauliString::on(2, Pauli::Z, &[0])),
                (-1.0, PauliString::on(2, Pauli::Z, &[1])),
            ],
        )
        .unwrap();
        assert_eq!(h.diagonal().unwrap(), vec![-0.5, -1.5, 1.5, 0.5]);
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(Hamiltonian::new(2, vec![(f64::INFINITY, PauliString::identity(2))]).is_err());
        assert!(Hamiltonian::new(2, vec![(1.0, PauliString::identity(3))]).is_err());
    }
}
