//! Noiseless statevector simulator.
//!
//! Amplitude order is little-endian: qubit `k` is bit `k` of the basis index.
//! Bitstrings are written qubit 0 first, so character `k` is qubit `k`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

pub const DEFAULT_MAX_QUBITS: usize = 20;

/// States at or above this many qubits update amplitudes in parallel.
const PARALLEL_QUBITS: usize = 14;

type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps raw amplitudes; length must be a power of two and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let state = Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rx = |t: f64| {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        };
        let ry = |t: f64| {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        };
        let rz = |t: f64| {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
        };
        let x = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        match *gate {
            Gate::H(q) => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                self.apply_matrix(q, 0, [[h, h], [h, -h]]);
            }
            Gate::X(q) => self.apply_matrix(q, 0, x),
            Gate::Rx { theta, qubit } => self.apply_matrix(qubit, 0, rx(theta)),
            Gate::Ry { theta, qubit } => self.apply_matrix(qubit, 0, ry(theta)),
            Gate::Rz { theta, qubit } => self.apply_matrix(qubit, 0, rz(theta)),
            Gate::Cnot { control, target } => self.apply_matrix(target, 1 << control, x),
            Gate::Toffoli {
                controls: [a, b],
                target,
            } => self.apply_matrix(target, (1 << a) | (1 << b), x),
            Gate::CRy {
                theta,
                control,
                target,
            } => self.apply_matrix(target, 1 << control, ry(theta)),
            Gate::CRz {
                theta,
                control,
                target,
            } => self.apply_matrix(target, 1 << control, rz(theta)),
            _ => return Err(Error::NotDecomposed(gate.to_string())),
        }
        Ok(())
    }

    /// Applies `m` to `target` on the subspace where every bit of
    /// `control_mask` is set.
    fn apply_matrix(&mut self, target: usize, control_mask: usize, m: Matrix2) {
        let bit = 1usize << target;
        let update = |block: usize, chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(bit);
            let base = block * 2 * bit;
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + k) & control_mask != control_mask {
                    continue;
                }
                let (x0, x1) = (*a, *b);
                *a = m[0][0] * x0 + m[0][1] * x1;
                *b = m[1][0] * x0 + m[1][1] * x1;
            }
        };
        if self.n_qubits >= PARALLEL_QUBITS && self.amplitudes.len() / (2 * bit) > 1 {
            self.amplitudes
                .par_chunks_mut(2 * bit)
                .enumerate()
                .for_each(|(block, chunk)| update(block, chunk));
        } else {
            self.amplitudes
                .chunks_mut(2 * bit)
                .enumerate()
                .for_each(|(block, chunk)| update(block, chunk));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    shots: u64,
    counts: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, outcome: u64, count: u64) {
        *self.counts.entry(outcome).or_default() += count;
        self.shots += count;
    }

    /// Builds a histogram from `(bitstring, count)` pairs, qubit 0 first.
    pub fn from_bitstrings<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut hist: Option<Histogram> = None;
        for (bits, count) in pairs {
            let outcome = parse_bitstring(bits)?;
            let h = hist.get_or_insert_with(|| Histogram::new(bits.len()));
            if bits.len() != h.n_qubits {
                return Err(Error::BitLength {
                    expected: h.n_qubits,
                    got: bits.len(),
                });
            }
            h.record(outcome, count);
        }
        hist.ok_or_else(|| Error::Config("empty histogram".into()))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn count(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// `(basis index, count)` in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn to_bitstrings(&self) -> BTreeMap<String, u64> {
        self.iter()
            .map(|(k, v)| (format_bitstring(k, self.n_qubits), v))
            .collect()
    }
}

pub fn format_bitstring(outcome: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|k| if outcome >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bitstring(bits: &str) -> Result<u64> {
    if bits.len() > 64 {
        return Err(Error::Config(format!(
            "bitstring of length {} is too long",
            bits.len()
        )));
    }
    bits.chars()
        .enumerate()
        .try_fold(0u64, |acc, (k, ch)| match ch {
            '0' => Ok(acc),
            '1' => Ok(acc | 1 << k),
            other => Err(Error::Config(format!("invalid bit {other:?} in {bits:?}"))),
        })
}

/// One simulated quantum job: sampled counts plus the time spent simulating
/// and sampling (state allocation included).
#[derive(Debug, Clone)]
pub struct Job {
    pub histogram: Histogram,
    pub duration_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl Simulator {
    pub fn with_max_qubits(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    /// `U|0…0⟩` for a decomposed circuit.
    pub fn simulate(&self, circuit: &Circuit) -> Result<StateVector> {
        if circuit.n_qubits() > self.max_qubits {
            return Err(Error::TooManyQubits {
                n_qubits: circuit.n_qubits(),
                cap: self.max_qubits,
            });
        }
        if let Some(g) = circuit.gates().iter().find(|g| g.is_composite()) {
            return Err(Error::NotDecomposed(g.to_string()));
        }
        let mut state = StateVector::zero(circuit.n_qubits());
        for gate in circuit.gates() {
            state.apply(gate)?;
        }
        Ok(state)
    }

    /// Simulates and samples, timing both together.
    pub fn run(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Job> {
        let start = Instant::now();
        let state = self.simulate(circuit)?;
        let histogram = sample_counts(&state, shots, seed);
        let duration_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(Job {
            histogram,
            duration_ms,
        })
    }
}

/// Draws `shots` measurements from `|a_i|²`. Equal seeds give equal histograms.
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> Histogram {
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut total = 0.0;
    for a in &state.amplitudes {
        total += a.norm_sqr();
        cumulative.push(total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = Histogram::new(state.n_qubits);
    let last = cumulative.len() - 1;
    for _ in 0..shots {
        let r = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= r).min(last);
        hist.record(idx as u64, 1);
    }
    hist
}

/// `⟨ψ|H|ψ⟩`. Fails if the imaginary residue exceeds 1e-9.
pub fn exact_expectation(state: &StateVector, observable: &Hamiltonian) -> Result<f64> {
    if observable.n_qubits() > state.n_qubits {
        return Err(Error::Config(format!(
            "observable on {} qubits, state has {}",
            observable.n_qubits(),
            state.n_qubits
        )));
    }
    let value: Complex64 = if observable.n_qubits() == state.n_qubits {
        let h_psi = observable.apply(&state.amplitudes);
        state
            .amplitudes
            .iter()
            .zip(&h_psi)
            .map(|(a, b)| a.conj() * b)
            .sum()
    } else {
        // Observable on the low qubits: act blockwise over the high bits.
        let sub = 1usize << observable.n_qubits();
        state
            .amplitudes
            .chunks(sub)
            .map(|block| {
                let h_psi = observable.apply(block);
                block
                    .iter()
                    .zip(&h_psi)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>()
            })
            .sum()
    };
    if value.im.abs() > 1e-9 {
        return Err(Error::Scoring(format!(
            "expectation has imaginary residue {}",
            value.im
        )));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Pauli, PauliString};

    fn sim(n: usize, gates: Vec<Gate>) -> StateVector {
        Simulator::default()
            .simulate(&Circuit::from_gates(n, gates).unwrap())
            .unwrap()
    }

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    #[test]
    fn hadamard_gives_equal_amplitudes() {
        let s = sim(1, vec![Gate::H(0)]);
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn x_flips() {
        let s = sim(1, vec![Gate::X(0)]);
        assert!(close(s.amplitudes()[0], 0.0, 0.0));
        assert!(close(s.amplitudes()[1], 1.0, 0.0));
    }

    #[test]
    fn little_endian_order() {
        let s = sim(3, vec![Gate::X(1)]);
        assert!(close(s.amplitudes()[2], 1.0, 0.0));
        assert_eq!(format_bitstring(2, 3), "010");
        assert_eq!(parse_bitstring("010").unwrap(), 2);
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let c = Circuit::new(5);
        assert!(matches!(
            Simulator::with_max_qubits(4).simulate(&c),
            Err(Error::TooManyQubits {
                n_qubits: 5,
                cap: 4
            })
        ));
    }

    #[test]
    fn deterministic_state_samples_one_outcome() {
        let h = sample_counts(&StateVector::zero(1), 4096, 7);
        assert_eq!(h.to_bitstrings(), BTreeMap::from([("0".to_string(), 4096)]));
        let h = sample_counts(&sim(1, vec![Gate::H(0)]), 1, 7);
        assert_eq!(h.iter().count(), 1);
        assert_eq!(h.shots(), 1);
    }

    #[test]
    fn plus_state_counts_within_five_sigma() {
        let h = sample_counts(&sim(1, vec![Gate::H(0)]), 4096, 1234);
        assert_eq!(h.count(0) + h.count(1), 4096);
        for k in 0..2 {
            assert!((h.count(k) as f64 - 2048.0).abs() < 5.0 * 32.0);
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let s = sim(3, vec![Gate::H(0), Gate::H(1), Gate::H(2)]);
        assert_eq!(sample_counts(&s, 1000, 9), sample_counts(&s, 1000, 9));
        assert_ne!(sample_counts(&s, 1000, 9), sample_counts(&s, 1000, 10));
    }

    #[test]
    fn large_sample_frequencies_converge() {
        let s = sim(
            2,
            vec![
                Gate::Ry {
                    theta: 1.1,
                    qubit: 0,
                },
                Gate::CRy {
                    theta: 0.7,
                    control: 0,
                    target: 1,
                },
            ],
        );
        let probs = s.probabilities();
        let h = sample_counts(&s, 100_000, 3);
        for (k, p) in probs.iter().enumerate() {
            let f = h.count(k as u64) as f64 / 1e5;
            assert!((f - p).abs() < 0.01, "{k}: {f} vs {p}");
        }
    }

    #[test]
    fn z_expectations() {
        let z = Hamiltonian::new(1, vec![(1.0, PauliString::on(1, Pauli::Z, &[0]))]).unwrap();
        assert!((exact_expectation(&StateVector::zero(1), &z).unwrap() - 1.0).abs() < 1e-12);
        let plus = sim(1, vec![Gate::H(0)]);
        assert!(exact_expectation(&plus, &z).unwrap().abs() < 1e-12);
    }

    #[test]
    fn observable_on_low_qubits_of_wider_state() {
        let z0 = Hamiltonian::new(1, vec![(1.0, PauliString::on(1, Pauli::Z, &[0]))]).unwrap();
        let s = sim(3, vec![Gate::X(0), Gate::H(2)]);
        assert!((exact_expectation(&s, &z0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalised_amplitudes() {
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(StateVector::from_amplitudes(amps).is_err());
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gate(n: usize) -> impl Strategy<Value = Gate> {
            (0..n, 0..n, 0..n, 0..9u8, -6.3..6.3f64).prop_filter_map(
                "distinct operands",
                |(a, b, c, k, t)| match k {
                    0 => Some(Gate::H(a)),
                    1 => Some(Gate::X(a)),
                    2 => Some(Gate::Rx { theta: t, qubit: a }),
                    3 => Some(Gate::Ry { theta: t, qubit: a }),
                    4 => Some(Gate::Rz { theta: t, qubit: a }),
                    5 if a != b => Some(Gate::Cnot {
                        control: a,
                        target: b,
                    }),
                    6 if a != b && b != c && a != c => Some(Gate::Toffoli {
                        controls: [a, b],
                        target: c,
                    }),
                    7 if a != b => Some(Gate::CRy {
                        theta: t,
                        control: a,
                        target: b,
                    }),
                    8 if a != b => Some(Gate::CRz {
                        theta: t,
                        control: a,
                        target: b,
                    }),
                    _ => None,
                },
            )
        }

        proptest! {
            #[test]
            fn norm_is_preserved(gates in prop::collection::vec(gate(4), 1..40)) {
                let mut s = StateVector::zero(4);
                for g in &gates {
                    s.apply(g).unwrap();
                    prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
                }
            }

            #[test]
            fn circuit_then_inverse_is_identity(gates in prop::collection::vec(gate(4), 1..40)) {
                let c = Circuit::from_gates(4, gates).unwrap();
                let mut full = c.clone();
                for g in c.inverse().unwrap().gates() {
                    full.push(g.clone()).unwrap();
                }
                let s = Simulator::default().simulate(&full).unwrap();
                prop_assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-8);
                prop_assert!(s.amplitudes()[0].im.abs() < 1e-8);
            }
        }
    }
}
