//! Property tests over randomly generated circuits: serialization
//! round-trips exactly, the dependency graph is sound, and simulated
//! evolution stays unitary.

use proptest::prelude::*;
use qframe_core::ir::json::{composite_from_json, composite_to_json, from_json, to_json};
use qframe_core::ir::{InstrGraph, IrContainer};
use qframe_testkit::circuits::random_measured_circuit;
use qframe_testkit::{circuit_unitary, random_circuit, random_parameterized_circuit};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_preserves_circuits(seed in 0u64..10_000, n_qubits in 1usize..4, n_gates in 0usize..25) {
        let original = random_measured_circuit(seed, n_qubits, n_gates);
        let text = composite_to_json(&original);
        let back = composite_from_json(&text).expect("serialized circuit parses");
        prop_assert_eq!(original, back);
    }

    #[test]
    fn json_round_trip_preserves_variables(seed in 0u64..10_000, n_params in 1usize..5) {
        let original = random_parameterized_circuit(seed, 2, n_params, n_params + 6);
        let back = composite_from_json(&composite_to_json(&original)).unwrap();
        prop_assert_eq!(&original, &back);
        // Binding after the round trip behaves identically.
        let values: Vec<f64> = (0..n_params).map(|k| 0.2 + 0.3 * k as f64).collect();
        prop_assert_eq!(
            original.evaluate(&values).unwrap(),
            back.evaluate(&values).unwrap()
        );
    }

    #[test]
    fn container_round_trip_preserves_order_and_content(seed in 0u64..10_000) {
        let mut container = IrContainer::new();
        for k in 0..3u64 {
            let mut c = random_circuit(seed + k, 2, 8);
            c.set_name(format!("kernel_{k}"));
            container.add(c);
        }
        let back = from_json(&to_json(&container)).unwrap();
        prop_assert_eq!(container.len(), back.len());
        for (a, b) in container.iter().zip(back.iter()) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn dependency_graph_is_sound(seed in 0u64..10_000, n_qubits in 1usize..5, n_gates in 0usize..30) {
        let circuit = random_circuit(seed, n_qubits, n_gates);
        let graph = InstrGraph::from_composite(&circuit);
        let n = graph.n_nodes();
        prop_assert_eq!(graph.n_instructions(), circuit.leaf_count());
        prop_assert_eq!(n, circuit.leaf_count() + 2, "entry and exit sentinels");
        for (from, to) in graph.edges() {
            prop_assert!(from < n && to < n, "edge endpoints in range");
            prop_assert!(from != to, "no self loops");
            // Edges only point forward: instructions depend on earlier
            // ones, entry precedes everything, exit follows everything.
            prop_assert!(
                from == graph.entry() || to == graph.exit() || from < to,
                "edge ({from}, {to}) goes backward"
            );
        }
        // Entry reaches everything: every non-entry node has a predecessor.
        for node in 1..n {
            let has_pred = (0..n).any(|p| graph.has_edge(p, node));
            prop_assert!(has_pred, "node {node} unreachable");
        }
        // Depth is bounded by the instruction count.
        prop_assert!(graph.depth() <= circuit.leaf_count() + 1);
    }

    #[test]
    fn simulated_circuits_stay_unitary(seed in 0u64..10_000) {
        let circuit = random_circuit(seed, 3, 10);
        let u = circuit_unitary(3, &circuit);
        prop_assert!(u.unitarity_defect() < 1e-9);
    }
}

#[test]
fn disabled_instructions_round_trip() {
    let mut circuit = random_circuit(77, 2, 6);
    circuit.for_each_leaf_mut(&mut |i| {
        if i.name() == "H" {
            i.set_enabled(false);
        }
    });
    let back = composite_from_json(&composite_to_json(&circuit)).unwrap();
    assert_eq!(circuit, back);
}
