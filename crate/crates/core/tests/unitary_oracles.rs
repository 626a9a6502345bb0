//! The simulator's gate semantics checked against independently built
//! dense matrices: catalog gates, the Fourier-transform generator, and
//! Pauli-exponential circuits.

use num_complex::Complex64;
use qframe_core::catalog;
use qframe_core::circuits::builtin_generators;
use qframe_core::het::HetMap;
use qframe_core::ir::{Composite, InstrParam, Instruction, Node};
use qframe_testkit::mat::CMat;
use qframe_testkit::{
    circuit_unitary, dft_matrix, expm, pauli_sum_matrix, phase_aligned_distance,
};

fn single_gate_circuit(name: &str, bits: Vec<usize>, params: Vec<f64>) -> Composite {
    let mut c = Composite::new(format!("only_{name}"));
    let params: Vec<InstrParam> = params.into_iter().map(InstrParam::Real).collect();
    c.add_node(Node::Instruction(Instruction::new(name, bits, params).unwrap()));
    c
}

#[test]
fn every_catalog_gate_is_applied_as_its_declared_matrix() {
    for def in catalog::all() {
        let params: Vec<f64> = (0..def.params).map(|k| 0.31 + 0.7 * k as f64).collect();
        let Some(want) = catalog::unitary(def.name, &params) else {
            continue; // measurements and annealing terms have no unitary
        };
        let n_qubits = def.qubits;
        let bits: Vec<usize> = (0..n_qubits).collect();
        let circuit = single_gate_circuit(def.name, bits, params);
        let got = circuit_unitary(n_qubits, &circuit);
        let oracle = CMat {
            dim: want.dim,
            data: want.data.clone(),
        };
        assert!(
            got.max_abs_diff(&oracle) < 1e-12,
            "{} differs from its declared matrix",
            def.name
        );
    }
}

#[test]
fn two_qubit_gates_respect_operand_order() {
    // CX with control = qubit 1, target = qubit 0 must differ from the
    // [0, 1] ordering: |01> (control set) maps to |11>.
    let c = single_gate_circuit("CX", vec![1, 0], vec![]);
    let u = circuit_unitary(2, &c);
    assert!((u[(0b11, 0b01)].re - 1.0).abs() < 1e-12);
    assert!((u[(0b01, 0b11)].re - 1.0).abs() < 1e-12);
    assert!((u[(0b00, 0b00)].re - 1.0).abs() < 1e-12);
    assert!((u[(0b10, 0b10)].re - 1.0).abs() < 1e-12);
}

fn expand_generator(name: &str, options: &HetMap) -> Composite {
    builtin_generators()
        .into_iter()
        .find(|g| g.name() == name)
        .expect("generator registered")
        .expand(options)
        .expect("generator expands")
}

#[test]
fn fourier_circuit_matches_the_dft_matrix() {
    for n in 1..=4usize {
        let mut opts = HetMap::new();
        opts.insert("nq", n as i64);
        let circuit = expand_generator("qft", &opts);
        let got = circuit_unitary(n, &circuit);
        let want = dft_matrix(n);
        let dist = phase_aligned_distance(&want, &got);
        assert!(dist < 1e-9, "n = {n}: deviation {dist}");
    }
}

#[test]
fn pauli_exponential_circuits_match_the_matrix_exponential() {
    // exp_i_theta builds a circuit for exp(i θ P); compare against a
    // scaling-and-squaring exponential of the dense Pauli sum.
    let cases = [
        ("X0 Y1 - Y0 X1", 2usize),
        ("X0 Z1 Y2 - X2 Z1 Y0", 3usize),
        ("Z0", 1usize),
        ("X0 X1", 2usize),
    ];
    let angles = [0.0, 0.37, -1.25, 2.9, -3.1];
    for (pauli, n_qubits) in cases {
        let mut opts = HetMap::new();
        opts.insert("pauli", pauli);
        opts.insert("variable", "t");
        let symbolic = expand_generator("exp_i_theta", &opts);
        assert_eq!(symbolic.variables(), ["t"]);
        for theta in angles {
            let bound = symbolic.evaluate(&[theta]).unwrap();
            let got = circuit_unitary(n_qubits, &bound);
            let h = pauli_sum_matrix(n_qubits, pauli);
            let want = expm(&h.scale(Complex64::new(0.0, theta)));
            let dist = phase_aligned_distance(&want, &got);
            assert!(
                dist < 1e-9,
                "exp(i*{theta}*({pauli})): deviation {dist}"
            );
        }
    }
}

#[test]
fn range_generator_applies_one_gate_per_qubit() {
    let mut opts = HetMap::new();
    opts.insert("gate", "H");
    opts.insert("nq", 3i64);
    let circuit = expand_generator("range", &opts);
    let got = circuit_unitary(3, &circuit);
    let h = catalog::unitary("H", &[]).unwrap();
    let h = CMat { dim: 2, data: h.data };
    let want = h.kron(&h).kron(&h);
    assert!(got.max_abs_diff(&want) < 1e-12);
}
