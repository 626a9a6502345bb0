//! Whole-program rewrites: connectivity-aware routing and the
//! identity transform.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Composite, Instruction};
use crate::het::HetMap;

/// Errors raised by program transformations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("no coupling path between physical qubits {a} and {b}")]
    DisconnectedQubit { a: usize, b: usize },
    #[error("program contains unexpanded dynamic circuit `{0}`")]
    Unexpanded(String),
}

/// A transformed program plus transformation-specific details (final
/// qubit placement, inserted-gate counts, …).
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub composite: Composite,
    pub info: HetMap,
}

/// Rewrites a program, optionally consulting the target's coupling
/// graph. An empty `connectivity` means all-to-all coupling.
pub trait IrTransformation {
    fn name(&self) -> &str;
    fn transform(
        &self,
        program: &Composite,
        connectivity: &[(usize, usize)],
        options: &HetMap,
    ) -> Result<TransformResult, TransformError>;
}

/// Returns the program unchanged.
pub struct IdentityTransform;

impl IrTransformation for IdentityTransform {
    fn name(&self) -> &str {
        "identity"
    }

    fn transform(
        &self,
        program: &Composite,
        _connectivity: &[(usize, usize)],
        _options: &HetMap,
    ) -> Result<TransformResult, TransformError> {
        Ok(TransformResult { composite: program.clone(), info: HetMap::new() })
    }
}

/// Makes every two-qubit gate act on coupled qubits by moving states
/// with swap chains along shortest coupling paths.
///
/// The rewrite tracks the logical→physical placement as swaps
/// accumulate instead of swapping back, so later gates (and
/// measurements) are emitted at each logical qubit's current physical
/// home. The result's info map reports the final `mapping` (entry *i*
/// = physical home of logical qubit *i*) and the number of inserted
/// swaps under `n-swaps`. The output is flattened to a single layer
/// of instructions.
pub struct SwapRouter;

impl IrTransformation for SwapRouter {
    fn name(&self) -> &str {
        "swap-routing"
    }

    fn transform(
        &self,
        program: &Composite,
        connectivity: &[(usize, usize)],
        _options: &HetMap,
    ) -> Result<TransformResult, TransformError> {
        if let Some(u) = program.find_unexpanded() {
            return Err(TransformError::Unexpanded(u.name().to_string()));
        }
        let mut out = Composite::with_variables(
            program.name(),
            program.variables().iter().cloned(),
        );
        let mut info = HetMap::new();
        if connectivity.is_empty() {
            // All-to-all: nothing to route, but still flatten for a
            // uniform contract.
            for instr in program.enabled_leaves() {
                out.add_instruction(instr.clone());
            }
            info.insert("n-swaps", 0i64);
            return Ok(TransformResult { composite: out, info });
        }

        let mut adjacency: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut n_physical = program.qubit_extent();
        for &(a, b) in connectivity {
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
            n_physical = n_physical.max(a + 1).max(b + 1);
        }

        // placement[logical] = physical; location[physical] = logical.
        let mut placement: Vec<usize> = (0..n_physical).collect();
        let mut location: Vec<usize> = (0..n_physical).collect();
        let mut n_swaps = 0i64;

        for instr in program.enabled_leaves() {
            match instr.bits() {
                [q] => {
                    let mut moved = instr.clone();
                    remap(&mut moved, &[placement[*q]]);
                    out.add_instruction(moved);
                }
                [a, b] => {
                    let (mut pa, pb) = (placement[*a], placement[*b]);
                    if !adjacency.get(&pa).is_some_and(|s| s.contains(&pb)) {
                        let path = shortest_path(&adjacency, pa, pb)
                            .ok_or(TransformError::DisconnectedQubit { a: pa, b: pb })?;
                        // Walk the state at `pa` up to the neighbor of
                        // `pb`, swapping one edge at a time.
                        for step in path.windows(2).take(path.len() - 2) {
                            let (from, to) = (step[0], step[1]);
                            out.add_instruction(
                                Instruction::gate("Swap", [from, to]).expect("catalog gate"),
                            );
                            n_swaps += 1;
                            location.swap(from, to);
                            placement[location[from]] = from;
                            placement[location[to]] = to;
                        }
                        pa = placement[*a];
                    }
                    let mut moved = instr.clone();
                    remap(&mut moved, &[pa, pb]);
                    out.add_instruction(moved);
                }
                _ => out.add_instruction(instr.clone()),
            }
        }

        let mapping: Vec<i64> = placement.iter().map(|&p| p as i64).collect();
        info.insert("mapping", mapping);
        info.insert("n-swaps", n_swaps);
        Ok(TransformResult { composite: out, info })
    }
}

/// Rewrite an instruction's qubit operands in place.
fn remap(instr: &mut Instruction, bits: &[usize]) {
    *instr = Instruction::from_parts(
        instr.name(),
        bits.to_vec(),
        instr.params().to_vec(),
        instr.is_enabled(),
        instr.explicit_cbits().map(|c| c.to_vec()),
    )
    .expect("same instruction with rewritten bits stays valid");
}

fn shortest_path(
    adjacency: &BTreeMap<usize, BTreeSet<usize>>,
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let mut previous: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from);
    let mut seen = BTreeSet::new();
    seen.insert(from);
    while let Some(node) = queue.pop_front() {
        if node == to {
            let mut path = alloc::vec![to];
            let mut cursor = to;
            while let Some(&p) = previous.get(&cursor) {
                path.push(p);
                cursor = p;
            }
            path.reverse();
            return Some(path);
        }
        if let Some(neighbors) = adjacency.get(&node) {
            for &next in neighbors {
                if seen.insert(next) {
                    previous.insert(next, node);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{qalloc, Accelerator, SimAccelerator};

    fn chain3() -> Vec<(usize, usize)> {
        alloc::vec![(0, 1), (1, 2)]
    }

    fn bell_02() -> Composite {
        let mut c = Composite::new("bell02");
        c.add_instruction(Instruction::gate("H", [0]).unwrap());
        c.add_instruction(Instruction::gate("CX", [0, 2]).unwrap());
        c.add_instruction(Instruction::measure(0));
        c.add_instruction(Instruction::measure(1));
        c.add_instruction(Instruction::measure(2));
        c
    }

    #[test]
    fn distant_gate_gets_swap_chain() {
        let result = SwapRouter.transform(&bell_02(), &chain3(), &HetMap::new()).unwrap();
        let names: Vec<&str> =
            result.composite.leaves().iter().map(|i| i.name()).collect();
        assert_eq!(names, alloc::vec!["H", "Swap", "CX", "Measure", "Measure", "Measure"]);
        assert_eq!(result.info.get_int("n-swaps").unwrap(), 1);
        // Logical 0 moved to physical 1.
        assert_eq!(result.info.get_int_list("mapping").unwrap(), alloc::vec![1, 0, 2]);
        // The CX now acts on a coupled pair.
        let cx = &result.composite.leaves()[2];
        assert_eq!(cx.bits(), &[1, 2]);
    }

    #[test]
    fn routed_program_preserves_semantics_under_mapping() {
        let result = SwapRouter.transform(&bell_02(), &chain3(), &HetMap::new()).unwrap();
        let mapping = result.info.get_int_list("mapping").unwrap();
        let mut acc = SimAccelerator::with_shots(256);
        acc.set_seed(9);
        let mut buf = qalloc(3).unwrap();
        acc.execute(&mut buf, &result.composite).unwrap();
        // Logical qubits 0 and 2 are Bell-correlated; read them out of
        // the physical strings through the final placement.
        for key in buf.counts().keys() {
            let bytes = key.as_bytes();
            let logical0 = bytes[mapping[0] as usize];
            let logical1 = bytes[mapping[1] as usize];
            let logical2 = bytes[mapping[2] as usize];
            assert_eq!(logical0, logical2, "correlation broken in {key}");
            assert_eq!(logical1, b'0');
        }
    }

    #[test]
    fn adjacent_gates_and_empty_connectivity_untouched() {
        let mut c = Composite::new("near");
        c.add_instruction(Instruction::gate("CX", [0, 1]).unwrap());
        let routed = SwapRouter.transform(&c, &chain3(), &HetMap::new()).unwrap();
        assert_eq!(routed.composite.leaf_count(), 1);
        assert_eq!(routed.info.get_int("n-swaps").unwrap(), 0);

        let unconstrained = SwapRouter.transform(&bell_02(), &[], &HetMap::new()).unwrap();
        assert_eq!(unconstrained.composite.leaf_count(), 5);
        assert_eq!(unconstrained.info.get_int("n-swaps").unwrap(), 0);
    }

    #[test]
    fn unreachable_pair_is_an_error() {
        let mut c = Composite::new("split");
        c.add_instruction(Instruction::gate("CX", [0, 2]).unwrap());
        let clusters = alloc::vec![(0, 1)];
        assert_eq!(
            SwapRouter.transform(&c, &clusters, &HetMap::new()).unwrap_err(),
            TransformError::DisconnectedQubit { a: 0, b: 2 }
        );
    }

    #[test]
    fn later_gates_follow_the_moved_state() {
        // After routing CX(0,2) on a chain, logical 0 sits at physical
        // 1; a following X on logical 0 must land there.
        let mut c = Composite::new("follow");
        c.add_instruction(Instruction::gate("CX", [0, 2]).unwrap());
        c.add_instruction(Instruction::gate("X", [0]).unwrap());
        let routed = SwapRouter.transform(&c, &chain3(), &HetMap::new()).unwrap();
        let x = routed
            .composite
            .leaves()
            .into_iter()
            .find(|i| i.name() == "X")
            .unwrap()
            .clone();
        assert_eq!(x.bits(), &[1]);
    }

    #[test]
    fn identity_transform_is_inert() {
        let program = bell_02();
        let result = IdentityTransform.transform(&program, &chain3(), &HetMap::new()).unwrap();
        assert_eq!(result.composite, program);
        assert!(result.info.is_empty());
    }
}
