//! Dense statevector representation with gate application, projective
//! measurement, and sampling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::buffer::index_to_bitstring;
use crate::catalog::Unitary;
use crate::math;

/// State of an `n`-qubit register as 2ⁿ complex amplitudes.
///
/// Qubit 0 occupies the most significant position of the amplitude
/// index, so `amps[0b10]` of a two-qubit state is the amplitude of
/// qubit 0 being `1` and qubit 1 being `0` — the same convention the
/// buffer uses for bitstrings (leftmost character = qubit 0).
#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state |0…0⟩.
    pub fn new(n: usize) -> Self {
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); 1usize << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Set the state to an arbitrary amplitude vector (length 2ⁿ).
    pub fn set_amplitudes(&mut self, amps: Vec<Complex64>) {
        assert_eq!(amps.len(), 1usize << self.n, "amplitude count mismatch");
        self.amps = amps;
    }

    /// Bit of qubit `q` within amplitude index `idx`.
    #[inline]
    fn bit(&self, idx: usize, q: usize) -> usize {
        (idx >> (self.n - 1 - q)) & 1
    }

    /// Index stride that flips qubit `q`.
    #[inline]
    fn stride(&self, q: usize) -> usize {
        1usize << (self.n - 1 - q)
    }

    /// Apply a k-qubit unitary to the listed (distinct) qubits. The
    /// first listed qubit is the most significant bit of the matrix
    /// index, matching the instruction catalog's convention.
    pub fn apply(&mut self, u: &Unitary, qubits: &[usize]) {
        let k = qubits.len();
        assert_eq!(u.dim, 1usize << k, "matrix size does not fit qubit count");
        for q in qubits {
            assert!(*q < self.n, "qubit index out of range");
        }
        let strides: Vec<usize> = qubits.iter().map(|&q| self.stride(q)).collect();
        let any_mask: usize = strides.iter().sum();
        let dim = 1usize << k;
        // Offsets of each local basis state relative to a base index
        // whose listed qubits are all zero.
        let mut offsets = alloc::vec![0usize; dim];
        for (b, off) in offsets.iter_mut().enumerate() {
            for (j, s) in strides.iter().enumerate() {
                if (b >> (k - 1 - j)) & 1 == 1 {
                    *off += s;
                }
            }
        }
        let mut scratch = alloc::vec![Complex64::new(0.0, 0.0); dim];
        for base in 0..self.amps.len() {
            if base & any_mask != 0 {
                continue;
            }
            for (row, s) in scratch.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..dim {
                    acc += u.at(row, col) * self.amps[base + offsets[col]];
                }
                *s = acc;
            }
            for (row, s) in scratch.iter().enumerate() {
                self.amps[base + offsets[row]] = *s;
            }
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Probability of observing qubit `q` as `1`.
    pub fn prob_one(&self, q: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.bit(*idx, q) == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projectively measure qubit `q`, collapsing and renormalizing the
    /// state. Returns the observed bit.
    pub fn measure_qubit<R: Rng>(&mut self, q: usize, rng: &mut R) -> u8 {
        let p1 = self.prob_one(q);
        let outcome = if rng.gen::<f64>() < p1 { 1u8 } else { 0u8 };
        let keep_prob = if outcome == 1 { p1 } else { 1.0 - p1 };
        // Guard against pathological renormalization when one branch
        // has vanishing probability yet was drawn by floating error.
        let scale = 1.0 / math::sqrt(keep_prob.max(f64::MIN_POSITIVE));
        for idx in 0..self.amps.len() {
            if self.bit(idx, q) == outcome as usize {
                self.amps[idx] *= scale;
            } else {
                self.amps[idx] = Complex64::new(0.0, 0.0);
            }
        }
        outcome
    }

    /// Draw one amplitude index from the |ψ|² distribution.
    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return idx;
            }
        }
        self.amps.len() - 1
    }

    /// Sample `shots` full-register bitstrings from |ψ|².
    pub fn sample_counts<R: Rng>(&self, shots: u64, rng: &mut R) -> BTreeMap<String, u64> {
        let cumulative: Vec<f64> = {
            let mut acc = 0.0;
            self.amps
                .iter()
                .map(|a| {
                    acc += a.norm_sqr();
                    acc
                })
                .collect()
        };
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.gen();
            let idx = cumulative.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            *counts.entry(idx).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .map(|(idx, n)| (index_to_bitstring(idx, self.n), n))
            .collect()
    }

    /// ⟨Z⊗…⊗Z⟩ over the given qubits: the signed parity average of
    /// the probability distribution.
    pub fn expectation_z_parity(&self, qubits: &[usize]) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let ones: usize = qubits.iter().map(|&q| self.bit(idx, q)).sum();
                let sign = if ones % 2 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum()
    }
}
