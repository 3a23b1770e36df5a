//! Lanczos ground-state search for sparse Pauli-sum Hamiltonians.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

/// Largest register the exact ground-state search accepts.
pub const MAX_QUBITS: usize = 16;

const MAX_STEPS: usize = 200;
const RESIDUAL_TOL: f64 = 1e-11;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty tridiagonal");
    (
        value,
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}

/// Lowest eigenvalue and a normalised eigenvector of `h`.
pub fn ground_state(h: &Hamiltonian) -> Result<(f64, Vec<Complex64>)> {
    let n = h.n_qubits();
    if n > MAX_QUBITS {
        return Err(Error::TooLargeForOracle(format!(
            "{n}-qubit Hamiltonian exceeds {MAX_QUBITS} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, 0.0))
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let max_steps = dim.min(MAX_STEPS);
    loop {
        let j = basis.len() - 1;
        let mut w = h.apply(&basis[j]);
        let alpha = dot(&basis[j], &w).re;
        alphas.push(alpha);
        // Full reorthogonalisation, applied twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm(&w);
        let (value, y) = lowest(&alphas, &betas);
        let residual = beta * y.last().unwrap().abs();
        if residual < RESIDUAL_TOL || beta < 1e-12 || basis.len() >= max_steps {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            for (coef, b) in y.iter().zip(&basis) {
                psi.iter_mut().zip(b).for_each(|(p, x)| *p += coef * x);
            }
            let s = norm(&psi);
            psi.iter_mut().for_each(|x| *x /= s);
            return Ok((value, psi));
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Pauli, PauliString};

    #[test]
    fn single_qubit_x_field() {
        let h = Hamiltonian::new(1, vec![(-2.0, PauliString::on(1, Pauli::X, &[0]))]).unwrap();
        let (e, psi) = ground_state(&h).unwrap();
        assert!((e + 2.0).abs() < 1e-12);
        assert!((psi[0].norm() - psi[1].norm()).abs() < 1e-9);
    }

    #[test]
    fn rejects_oversized_registers() {
        let h = Hamiltonian::new(MAX_QUBITS + 1, vec![]).unwrap();
        assert!(matches!(ground_state(&h), Err(Error::TooLargeForOracle(_))));
    }
}
