//! Brute-force fermionic ladder operators in the occupation basis.
//!
//! Mode `p` maps to qubit `p`; a set bit means the mode is occupied.
//! Basis indices follow the simulator convention (mode 0 is the most
//! significant bit). The annihilation operator carries the standard
//! anticommutation sign `(-1)^(number of occupied modes below p)`,
//! built by direct enumeration of all basis states so it shares no
//! structure with any qubit-operator mapping under test.

use num_complex::Complex64;

use crate::mat::CMat;

/// Dense matrix of the annihilation operator `a_p` on `n_modes` modes.
pub fn annihilation_matrix(n_modes: usize, p: usize) -> CMat {
    assert!(p < n_modes, "mode {p} outside {n_modes} modes");
    let dim = 1usize << n_modes;
    let mut m = CMat::zeros(dim);
    for state in 0..dim {
        let bit = n_modes - 1 - p; // mode p's position in the index
        if (state >> bit) & 1 == 0 {
            continue; // unoccupied: annihilates to zero
        }
        let parity: u32 = (0..p).map(|j| (state >> (n_modes - 1 - j)) as u32 & 1).sum();
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        let target = state & !(1 << bit);
        m[(target, state)] = Complex64::new(sign, 0.0);
    }
    m
}

/// Dense matrix of the creation operator `a†_p` on `n_modes` modes.
pub fn creation_matrix(n_modes: usize, p: usize) -> CMat {
    annihilation_matrix(n_modes, p).dagger()
}
