//! Independent numeric oracles for the test suites.
//!
//! Everything here is computed from first principles — dense matrices
//! assembled by Kronecker products, brute-force basis enumeration,
//! classical eigensolvers and series expansions — so the main crate's
//! circuit algebra, simulator, and transforms can be checked against
//! answers that share none of their code paths.
//!
//! Conventions match the simulator's: qubit 0 is the most significant
//! bit of a basis index, so a Kronecker product lists qubit 0's factor
//! leftmost, and bitstrings read qubit 0 first.

pub mod circuits;
pub mod fermion;
pub mod linalg;
pub mod mat;
pub mod noisy;
pub mod pauli;

pub use circuits::{circuit_unitary, random_circuit, random_parameterized_circuit};
pub use fermion::{annihilation_matrix, creation_matrix};
pub use linalg::{expm, hermitian_eigen};
pub use mat::{dft_matrix, permutation_matrix, phase_aligned_distance, CMat};
pub use noisy::NoisyReadout;
pub use pauli::{pauli_matrix, pauli_sum_matrix, pauli_word_matrix};

/// Central finite-difference estimate of `∂f/∂x[i]` with step `h`.
pub fn central_difference(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let mut probe = x.to_vec();
    probe[i] = x[i] + h;
    let plus = f(&probe);
    probe[i] = x[i] - h;
    let minus = f(&probe);
    (plus - minus) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_difference_matches_known_derivative() {
        let mut f = |x: &[f64]| x[0] * x[0] * x[1];
        let g = central_difference(&mut f, &[3.0, 5.0], 0, 1e-6);
        assert!((g - 30.0).abs() < 1e-6);
        let g = central_difference(&mut f, &[3.0, 5.0], 1, 1e-6);
        assert!((g - 9.0).abs() < 1e-6);
    }
}
