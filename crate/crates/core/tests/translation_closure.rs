//! Cross-dialect translation must preserve semantics: translating a
//! compiled circuit into any dialect and recompiling it there yields a
//! circuit with the same unitary, up to a global phase.

use qframe_core::frontend::{builtin_compilers, Compiler};
use qframe_core::ir::Composite;
use qframe_testkit::{circuit_unitary, phase_aligned_distance, random_circuit};

fn compiler(name: &str) -> Box<dyn Compiler> {
    builtin_compilers()
        .into_iter()
        .find(|c| c.name() == name)
        .expect("builtin compiler")
}

/// Translate `circuit` into `dialect`, recompile it there, and return
/// the result (the translated source's single kernel).
fn round_trip(circuit: &Composite, dialect: &str) -> Composite {
    let c = compiler(dialect);
    let source = c.translate(circuit).expect("translatable circuit");
    let compiled = c.compile(&source).expect("translated source recompiles");
    assert_eq!(compiled.len(), 1, "translation emits one kernel");
    compiled.composites()[0].clone()
}

fn assert_same_unitary(a: &Composite, b: &Composite, n_qubits: usize, what: &str) {
    let ua = circuit_unitary(n_qubits, a);
    let ub = circuit_unitary(n_qubits, b);
    let dist = phase_aligned_distance(&ua, &ub);
    assert!(dist < 1e-9, "{what}: deviation {dist}");
}

#[test]
fn random_circuits_survive_each_dialect() {
    for seed in 0..5u64 {
        let original = random_circuit(3000 + seed, 2, 12);
        for dialect in ["xasm", "quil", "openqasm"] {
            let back = round_trip(&original, dialect);
            assert_same_unitary(&original, &back, 2, &format!("seed {seed} via {dialect}"));
        }
    }
}

#[test]
fn chained_translation_through_every_dialect_is_stable() {
    for seed in 0..3u64 {
        let original = random_circuit(4000 + seed, 2, 10);
        let mut current = original.clone();
        // xasm -> quil -> openqasm -> quil -> xasm
        for dialect in ["xasm", "quil", "openqasm", "quil", "xasm"] {
            current = round_trip(&current, dialect);
        }
        assert_same_unitary(&original, &current, 2, &format!("seed {seed} chained"));
    }
}

#[test]
fn decomposed_gates_translate_into_the_target_gate_set() {
    // Swap, CPhase, Sdg, and Tdg are not in the line-based dialects'
    // native sets; translation must decompose them.
    let source = "__qpu__ void fancy(qbit q) {\n  Swap(q[0], q[1]);\n  CPhase(q[0], q[1], 0.7);\n  Sdg(q[0]);\n  Tdg(q[1]);\n}\n";
    let original = compiler("xasm")
        .compile(source)
        .unwrap()
        .composites()[0]
        .clone();
    for dialect in ["quil", "openqasm"] {
        let text = compiler(dialect).translate(&original).unwrap();
        assert!(
            !text.contains("Swap") && !text.contains("swap"),
            "{dialect} translation still names Swap:\n{text}"
        );
        let back = round_trip(&original, dialect);
        assert_same_unitary(&original, &back, 2, &format!("decomposition via {dialect}"));
    }
}

#[test]
fn measurements_survive_translation_with_their_wiring() {
    let source = "__qpu__ void readout(qbit q) {\n  H(q[0]);\n  CX(q[0], q[1]);\n  Measure(q[1]);\n  Measure(q[0]);\n}\n";
    let original = compiler("xasm")
        .compile(source)
        .unwrap()
        .composites()[0]
        .clone();
    for dialect in ["xasm", "quil", "openqasm"] {
        let back = round_trip(&original, dialect);
        let measured: Vec<(Vec<usize>, Vec<usize>)> = back
            .leaves()
            .into_iter()
            .filter(|i| i.name() == "Measure")
            .map(|i| (i.bits().to_vec(), i.cbits()))
            .collect();
        assert_eq!(
            measured,
            vec![(vec![1], vec![1]), (vec![0], vec![0])],
            "via {dialect}"
        );
    }
}

#[test]
fn parameterized_circuits_keep_their_variables_through_translation() {
    let source = "__qpu__ void ansatz(qbit q, double theta, double phi) {\n  Rx(q[0], theta);\n  Ry(q[1], phi);\n  CX(q[0], q[1]);\n  Rz(q[0], 2 * theta);\n}\n";
    let original = compiler("xasm")
        .compile(source)
        .unwrap()
        .composites()[0]
        .clone();
    for dialect in ["xasm", "quil", "openqasm"] {
        let back = round_trip(&original, dialect);
        assert_eq!(back.variables(), ["theta", "phi"], "via {dialect}");
        // Bound at a test point, the unitaries agree.
        let a = original.evaluate(&[0.4, -1.1]).unwrap();
        let b = back.evaluate(&[0.4, -1.1]).unwrap();
        assert_same_unitary(&a, &b, 2, &format!("bound via {dialect}"));
    }
}
