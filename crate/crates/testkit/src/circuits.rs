//! Seeded random circuit generation and full-unitary extraction by
//! running the simulator once per basis column.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qframe_core::backend::{Accelerator, QuantumBuffer, SimAccelerator};
use qframe_core::ir::{Composite, InstrParam, Instruction, Node};

use crate::mat::CMat;

/// Gate pool: `(name, qubits, parameters)`.
const POOL: &[(&str, usize, usize)] = &[
    ("X", 1, 0),
    ("Y", 1, 0),
    ("Z", 1, 0),
    ("H", 1, 0),
    ("S", 1, 0),
    ("Sdg", 1, 0),
    ("T", 1, 0),
    ("Tdg", 1, 0),
    ("Rx", 1, 1),
    ("Ry", 1, 1),
    ("Rz", 1, 1),
    ("U", 1, 3),
    ("CX", 2, 0),
    ("CZ", 2, 0),
    ("CPhase", 2, 1),
    ("Swap", 2, 0),
];

fn random_gate(rng: &mut ChaCha8Rng, n_qubits: usize) -> Instruction {
    loop {
        let (name, arity, n_params) = POOL[rng.gen_range(0..POOL.len())];
        if arity > n_qubits {
            continue;
        }
        let mut bits = vec![rng.gen_range(0..n_qubits)];
        if arity == 2 {
            let mut second = rng.gen_range(0..n_qubits);
            while second == bits[0] {
                second = rng.gen_range(0..n_qubits);
            }
            bits.push(second);
        }
        let params: Vec<InstrParam> = (0..n_params)
            .map(|_| InstrParam::Real(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
            .collect();
        return Instruction::new(name, bits, params).expect("pool gates are in the catalog");
    }
}

/// Deterministic random unitary circuit: `n_gates` gates drawn from a
/// fixed pool with concrete angles. Equal seeds give equal circuits.
pub fn random_circuit(seed: u64, n_qubits: usize, n_gates: usize) -> Composite {
    assert!(n_qubits >= 1, "need at least one qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Composite::new(format!("random_{seed}"));
    for _ in 0..n_gates {
        c.add_node(Node::Instruction(random_gate(&mut rng, n_qubits)));
    }
    c
}

/// [`random_circuit`] followed by a measurement on every qubit, with
/// classical bits assigned in reverse so explicit bit wiring is
/// exercised by serialization tests.
pub fn random_measured_circuit(seed: u64, n_qubits: usize, n_gates: usize) -> Composite {
    let mut c = random_circuit(seed, n_qubits, n_gates);
    for q in 0..n_qubits {
        let mut m = Instruction::gate("Measure", vec![q]).expect("Measure is in the catalog");
        m.set_cbits(vec![n_qubits - 1 - q]);
        c.add_node(Node::Instruction(m));
    }
    c
}

/// Deterministic random variational circuit over variables
/// `p0..p{n_params-1}`. Every variable appears exactly once, as the
/// whole angle of one rotation gate, so shift-rule gradients of any
/// expectation value are exact. The remaining `n_gates - n_params`
/// gates come from the fixed pool.
pub fn random_parameterized_circuit(
    seed: u64,
    n_qubits: usize,
    n_params: usize,
    n_gates: usize,
) -> Composite {
    assert!(n_gates >= n_params, "need at least one gate per parameter");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n_params).map(|i| format!("p{i}")).collect();
    let mut c = Composite::with_variables(format!("random_var_{seed}"), names.clone());

    // Decide where each parameterized rotation lands among the gates.
    let mut slots: Vec<Option<usize>> = vec![None; n_gates];
    for (param, slot) in names.iter().enumerate().map(|(i, _)| i).zip(pick_slots(
        &mut rng, n_gates, n_params,
    )) {
        slots[slot] = Some(param);
    }
    for slot in slots {
        match slot {
            Some(param) => {
                let rot = ["Rx", "Ry", "Rz"][rng.gen_range(0..3)];
                let q = rng.gen_range(0..n_qubits);
                let angle = InstrParam::parse(&names[param]).expect("variable name parses");
                c.add_node(Node::Instruction(
                    Instruction::new(rot, vec![q], vec![angle]).expect("rotation arity"),
                ));
            }
            None => c.add_node(Node::Instruction(random_gate(&mut rng, n_qubits))),
        }
    }
    c
}

/// `count` distinct positions in `0..n`, in random order.
fn pick_slots(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in (1..all.len()).rev() {
        all.swap(i, rng.gen_range(0..=i));
    }
    all.truncate(count);
    all
}

/// The full `2^n x 2^n` unitary the simulator applies for `circuit`,
/// assembled column by column: prepare each basis state with X gates,
/// run exactly (zero shots), and read the statevector back.
///
/// The circuit must be concrete (no free variables) and contain no
/// measurements.
pub fn circuit_unitary(n_qubits: usize, circuit: &Composite) -> CMat {
    let sim = SimAccelerator::with_shots(0);
    let dim = 1usize << n_qubits;
    let mut u = CMat::zeros(dim);
    for col in 0..dim {
        let mut prep = Composite::new("basis_column");
        for q in 0..n_qubits {
            if (col >> (n_qubits - 1 - q)) & 1 == 1 {
                prep.add_node(Node::Instruction(
                    Instruction::gate("X", vec![q]).expect("X is in the catalog"),
                ));
            }
        }
        prep.add_node(Node::Composite(circuit.clone()));
        let mut buf = QuantumBuffer::new(n_qubits).expect("buffer allocation");
        sim.execute(&mut buf, &prep).expect("exact simulation");
        let flat = buf
            .metadata()
            .get_real_list("statevector")
            .expect("exact mode records the statevector");
        assert_eq!(flat.len(), 2 * dim, "statevector length");
        for row in 0..dim {
            u[(row, col)] = Complex64::new(flat[2 * row], flat[2 * row + 1]);
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_word_matrix;

    #[test]
    fn equal_seeds_give_equal_circuits() {
        let a = random_circuit(42, 3, 20);
        let b = random_circuit(42, 3, 20);
        assert_eq!(a, b);
        let c = random_circuit(43, 3, 20);
        assert_ne!(a, c);
    }

    #[test]
    fn parameterized_circuits_use_each_variable_once() {
        for seed in 0..10 {
            let c = random_parameterized_circuit(seed, 2, 4, 9);
            assert_eq!(c.variables(), ["p0", "p1", "p2", "p3"]);
            for var in c.variables() {
                let uses = c
                    .leaves()
                    .iter()
                    .flat_map(|i| i.params().to_vec())
                    .filter(|p| matches!(p, InstrParam::Sym(s) if s.text() == *var))
                    .count();
                assert_eq!(uses, 1, "variable {var} in seed {seed}");
            }
        }
    }

    #[test]
    fn extracted_unitary_matches_known_gates() {
        // A circuit of just X on qubit 1 of 2 gives I ⊗ X.
        let mut c = Composite::new("x1");
        c.add_node(Node::Instruction(Instruction::gate("X", vec![1]).unwrap()));
        let u = circuit_unitary(2, &c);
        let want = pauli_word_matrix(2, &[(1, 'X')]);
        assert!(u.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn random_circuit_unitaries_are_unitary() {
        for seed in [7, 11] {
            let c = random_circuit(seed, 2, 15);
            let u = circuit_unitary(2, &c);
            assert!(u.unitarity_defect() < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn measured_circuit_wires_classical_bits_in_reverse() {
        let c = random_measured_circuit(5, 3, 4);
        let measures: Vec<_> = c
            .leaves()
            .into_iter()
            .filter(|i| i.name() == "Measure")
            .collect();
        assert_eq!(measures.len(), 3);
        assert_eq!(measures[0].cbits(), vec![2]);
        assert_eq!(measures[2].cbits(), vec![0]);
    }
}
