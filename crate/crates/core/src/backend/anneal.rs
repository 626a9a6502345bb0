//! Exhaustive Ising ground-state search for annealing programs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::buffer::index_to_bitstring;
use super::{ExecError, QuantumBuffer};
use crate::ir::Instruction;

/// Spin value of qubit `q` in configuration `idx`: bit `0` ↔ +1,
/// bit `1` ↔ −1, with qubit 0 as the most significant index bit.
#[inline]
fn spin(idx: usize, q: usize, n: usize) -> f64 {
    if (idx >> (n - 1 - q)) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Minimize H(s) = Σᵢ hᵢ sᵢ + Σᵢ<ⱼ Jᵢⱼ sᵢ sⱼ over s ∈ {−1,+1}ⁿ by
/// enumeration. Writes the ground energy to metadata and one count per
/// minimizing configuration.
pub(super) fn execute(
    buffer: &mut QuantumBuffer,
    leaves: &[&Instruction],
) -> Result<(), ExecError> {
    let n = buffer.size();
    if n > super::sim::MAX_QUBITS {
        return Err(ExecError::CapacityExceeded { requested: n, cap: super::sim::MAX_QUBITS });
    }
    let mut h = alloc::vec![0.0f64; n];
    let mut j: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for instr in leaves {
        let w = instr.params()[0]
            .as_real()
            .expect("annealing weights validated as concrete before dispatch");
        let (a, b) = (instr.bits()[0], instr.bits()[1]);
        if a == b {
            h[a] += w;
        } else {
            // Bits are stored sorted, so (a, b) is already ordered.
            *j.entry((a, b)).or_insert(0.0) += w;
        }
    }

    let mut best = f64::INFINITY;
    let mut minimizers: Vec<usize> = Vec::new();
    for idx in 0..(1usize << n) {
        let mut energy = 0.0;
        for (q, hq) in h.iter().enumerate() {
            energy += hq * spin(idx, q, n);
        }
        for (&(a, b), w) in &j {
            energy += w * spin(idx, a, n) * spin(idx, b, n);
        }
        if energy < best - 1e-12 {
            best = energy;
            minimizers.clear();
            minimizers.push(idx);
        } else if (energy - best).abs() <= 1e-12 {
            minimizers.push(idx);
        }
    }

    for idx in minimizers {
        buffer.add_count(&index_to_bitstring(idx, n), 1);
    }
    buffer.set_metadata("ground-energy", best);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{qalloc, Accelerator, SimAccelerator};
    use crate::ir::{Composite, InstrParam};

    fn qmi(a: usize, b: usize, w: f64) -> Instruction {
        Instruction::new("qmi", alloc::vec![a, b], alloc::vec![InstrParam::Real(w)]).unwrap()
    }

    #[test]
    fn ferromagnetic_pair_has_two_aligned_ground_states() {
        // H = -1 * s0 s1: minimized by s0 = s1.
        let mut program = Composite::new("ising");
        program.add_instruction(qmi(0, 1, -1.0));
        let mut buf = qalloc(2).unwrap();
        SimAccelerator::new().execute(&mut buf, &program).unwrap();
        assert_eq!(buf.metadata().get_real("ground-energy").unwrap(), -1.0);
        assert_eq!(buf.counts().len(), 2);
        assert_eq!(buf.counts().get("00"), Some(&1));
        assert_eq!(buf.counts().get("11"), Some(&1));
    }

    #[test]
    fn bias_breaks_degeneracy() {
        // H = 0.5 s0 - s0 s1: ground state s0 = -1, s1 = -1 (E = -1.5).
        let mut program = Composite::new("ising");
        program.add_instruction(qmi(0, 0, 0.5));
        program.add_instruction(qmi(0, 1, -1.0));
        let mut buf = qalloc(2).unwrap();
        SimAccelerator::new().execute(&mut buf, &program).unwrap();
        assert_eq!(buf.metadata().get_real("ground-energy").unwrap(), -1.5);
        assert_eq!(buf.counts().len(), 1);
        assert_eq!(buf.counts().get("11"), Some(&1));
    }

    #[test]
    fn repeated_terms_accumulate() {
        let mut program = Composite::new("ising");
        program.add_instruction(qmi(0, 0, 0.25));
        program.add_instruction(qmi(0, 0, 0.25));
        let mut buf = qalloc(1).unwrap();
        SimAccelerator::new().execute(&mut buf, &program).unwrap();
        assert_eq!(buf.metadata().get_real("ground-energy").unwrap(), -0.5);
        assert_eq!(buf.counts().get("1"), Some(&1));
    }
}
