//! The fermion-to-qubit mapping checked against brute-force ladder
//! matrices built by direct enumeration of the occupation basis.

use num_complex::Complex64;
use qframe_core::observable::{jordan_wigner, FermionOperator, LadderOp, SpinOperator};
use qframe_testkit::mat::CMat;
use qframe_testkit::{annihilation_matrix, creation_matrix, pauli_word_matrix};

/// Dense matrix of a qubit-side operator on `n_qubits` qubits.
fn spin_matrix(n_qubits: usize, op: &SpinOperator) -> CMat {
    let mut total = CMat::zeros(1 << n_qubits);
    for (term, coefficient) in op.terms() {
        let word: Vec<(usize, char)> = term.iter().collect();
        total = total.add_scaled(coefficient, &pauli_word_matrix(n_qubits, &word));
    }
    total
}

/// Dense matrix of a ladder-operator product under the standard
/// sign convention, built independently of any qubit mapping.
fn ladder_matrix(n_modes: usize, ops: &[LadderOp]) -> CMat {
    let mut m = CMat::identity(1 << n_modes);
    for op in ops {
        let factor = if op.creation {
            creation_matrix(n_modes, op.mode)
        } else {
            annihilation_matrix(n_modes, op.mode)
        };
        m = m.mul(&factor);
    }
    m
}

#[test]
fn every_hopping_term_on_three_modes_maps_correctly() {
    let n = 3;
    for p in 0..n {
        for q in 0..n {
            let fermion = FermionOperator::from_term(
                Complex64::new(1.0, 0.0),
                vec![
                    LadderOp { mode: p, creation: true },
                    LadderOp { mode: q, creation: false },
                ],
            );
            let mapped = jordan_wigner(&fermion);
            let got = spin_matrix(n, &mapped);
            let want = creation_matrix(n, p).mul(&annihilation_matrix(n, q));
            let dev = got.max_abs_diff(&want);
            assert!(dev < 1e-10, "a†_{p} a_{q}: deviation {dev}");
        }
    }
}

#[test]
fn bare_ladder_operators_map_correctly() {
    let n = 3;
    for p in 0..n {
        for creation in [false, true] {
            let fermion = FermionOperator::from_term(
                Complex64::new(1.0, 0.0),
                vec![LadderOp { mode: p, creation }],
            );
            let got = spin_matrix(n, &jordan_wigner(&fermion));
            let want = if creation {
                creation_matrix(n, p)
            } else {
                annihilation_matrix(n, p)
            };
            assert!(
                got.max_abs_diff(&want) < 1e-10,
                "mode {p}, creation {creation}"
            );
        }
    }
}

#[test]
fn parsed_hermitian_hopping_pair_maps_correctly() {
    let fermion = FermionOperator::parse("0^ 1 + 1^ 0").unwrap();
    let mapped = jordan_wigner(&fermion);
    let got = spin_matrix(2, &mapped);
    let want = creation_matrix(2, 0)
        .mul(&annihilation_matrix(2, 1))
        .add_scaled(
            Complex64::new(1.0, 0.0),
            &creation_matrix(2, 1).mul(&annihilation_matrix(2, 0)),
        );
    assert!(got.max_abs_diff(&want) < 1e-10);
    // The standard mapping gives (X0 X1 + Y0 Y1) / 2.
    let xx = pauli_word_matrix(2, &[(0, 'X'), (1, 'X')]);
    let yy = pauli_word_matrix(2, &[(0, 'Y'), (1, 'Y')]);
    let closed_form = xx.add_scaled(Complex64::new(1.0, 0.0), &yy).scale(Complex64::new(0.5, 0.0));
    assert!(got.max_abs_diff(&closed_form) < 1e-10);
}

#[test]
fn products_preserve_operator_algebra() {
    // The mapping is a homomorphism: a†_0 a_1 composed with a†_1 a_2
    // equals the mapped product a†_0 a_1 a†_1 a_2.
    let n = 3;
    let product = FermionOperator::from_term(
        Complex64::new(1.0, 0.0),
        vec![
            LadderOp { mode: 0, creation: true },
            LadderOp { mode: 1, creation: false },
            LadderOp { mode: 1, creation: true },
            LadderOp { mode: 2, creation: false },
        ],
    );
    let got = spin_matrix(n, &jordan_wigner(&product));
    let want = ladder_matrix(n, &[
        LadderOp { mode: 0, creation: true },
        LadderOp { mode: 1, creation: false },
        LadderOp { mode: 1, creation: true },
        LadderOp { mode: 2, creation: false },
    ]);
    assert!(got.max_abs_diff(&want) < 1e-10);
}

#[test]
fn number_operator_spectrum_is_occupation() {
    // N = Σ_p a†_p a_p maps to a diagonal with the popcount spectrum.
    let n = 3;
    let mut total = FermionOperator::zero();
    for p in 0..n {
        total = total.add(&FermionOperator::from_term(
            Complex64::new(1.0, 0.0),
            vec![
                LadderOp { mode: p, creation: true },
                LadderOp { mode: p, creation: false },
            ],
        ));
    }
    let got = spin_matrix(n, &jordan_wigner(&total));
    for state in 0..(1usize << n) {
        let want = state.count_ones() as f64;
        assert!((got[(state, state)].re - want).abs() < 1e-10, "state {state}");
    }
}
