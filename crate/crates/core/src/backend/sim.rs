//! Local simulator accelerator: statevector execution for digital
//! programs, exhaustive energy minimization for annealing programs.

use alloc::string::ToString;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::anneal;
use super::buffer::index_to_bitstring;
use super::statevector::StateVector;
use super::{Accelerator, ExecError, QuantumBuffer};
use crate::catalog::{unitary, InstrKind};
use crate::het::HetMap;
use crate::ir::{Composite, Instruction};

/// Largest register the dense simulator will take on.
pub const MAX_QUBITS: usize = 20;

/// Metadata keys the simulator owns; cleared before every execution so
/// a buffer can be reused across runs.
const RESULT_KEYS: &[&str] = &["exp-val-z", "statevector", "measured-bits", "ground-energy", "shots"];

/// Local statevector / annealing simulator.
///
/// `shots == 0` selects exact mode: the final state is evolved once
/// and expectation values are computed analytically. `shots > 0`
/// samples bitstrings; programs with mid-circuit measurements fall
/// back to per-shot trajectories.
#[derive(Debug, Clone)]
pub struct SimAccelerator {
    shots: u64,
    seed: Option<u64>,
}

impl Default for SimAccelerator {
    fn default() -> Self {
        SimAccelerator { shots: 1024, seed: None }
    }
}

impl SimAccelerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_shots(shots: u64) -> Self {
        SimAccelerator { shots, seed: None }
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn set_shots(&mut self, shots: u64) {
        self.shots = shots;
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    fn rng(&self) -> ChaCha8Rng {
        match self.seed {
            Some(s) => ChaCha8Rng::seed_from_u64(s),
            #[cfg(feature = "std")]
            None => ChaCha8Rng::from_entropy(),
            // Without an entropy source, unseeded sampling falls back
            // to a fixed stream; call `set_seed` to vary it.
            #[cfg(not(feature = "std"))]
            None => ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15),
        }
    }

    /// Split a concrete program into its enabled leaves and classify
    /// the execution model.
    fn validated_leaves<'a>(
        &self,
        buffer: &QuantumBuffer,
        program: &'a Composite,
    ) -> Result<(Vec<&'a Instruction>, Model), ExecError> {
        if let Some(u) = program.find_unexpanded() {
            return Err(ExecError::Ir(crate::ir::IrError::UnexpandedComposite(
                u.name().to_string(),
            )));
        }
        let leaves = program.enabled_leaves();
        let mut model = Model::Empty;
        for instr in &leaves {
            if let Some(sym) = instr.params().iter().find(|p| p.is_symbolic()) {
                return Err(ExecError::SymbolicProgram(sym.to_string()));
            }
            for &b in instr.bits() {
                if b >= buffer.size() {
                    return Err(ExecError::QubitOutOfRange { qubit: b, size: buffer.size() });
                }
            }
            let this = if instr.is_anneal() { Model::Anneal } else { Model::Gate };
            model = match (model, this) {
                (Model::Empty, m) => m,
                (m, t) if m == t => m,
                _ => return Err(ExecError::MixedModelProgram),
            };
        }
        Ok((leaves, model))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Model {
    Empty,
    Gate,
    Anneal,
}

impl Accelerator for SimAccelerator {
    fn name(&self) -> &str {
        "sim"
    }

    fn configure(&mut self, options: &HetMap) -> Result<(), ExecError> {
        if let Some(shots) = options.opt_int("shots")? {
            if shots < 0 {
                return Err(ExecError::BadOption("shots must be non-negative".to_string()));
            }
            self.shots = shots as u64;
        }
        if let Some(seed) = options.opt_int("seed")? {
            self.seed = Some(seed as u64);
        }
        Ok(())
    }

    fn execute(&self, buffer: &mut QuantumBuffer, program: &Composite) -> Result<(), ExecError> {
        let (leaves, model) = self.validated_leaves(buffer, program)?;

        // Fresh results: drop previous counts and simulator-owned
        // metadata, keep caller-supplied keys.
        buffer.set_counts(Default::default());
        for key in RESULT_KEYS {
            buffer.metadata_mut().remove(key);
        }

        if model == Model::Anneal {
            return anneal::execute(buffer, &leaves);
        }
        if buffer.size() > MAX_QUBITS {
            return Err(ExecError::CapacityExceeded { requested: buffer.size(), cap: MAX_QUBITS });
        }

        let n = buffer.size();
        let mut measured: Vec<usize> = Vec::new();
        for instr in &leaves {
            if instr.is_measure() && !measured.contains(&instr.bits()[0]) {
                measured.push(instr.bits()[0]);
            }
        }

        if self.shots == 0 {
            // Exact mode: evolve once, ignore measurement collapse.
            let mut sv = StateVector::new(n);
            for instr in &leaves {
                if instr.is_measure() {
                    continue;
                }
                apply_gate(&mut sv, instr)?;
            }
            let z_qubits: Vec<usize> =
                if measured.is_empty() { (0..n).collect() } else { measured.clone() };
            buffer.set_metadata("exp-val-z", sv.expectation_z_parity(&z_qubits));
            let bits: Vec<i64> = z_qubits.iter().map(|&q| q as i64).collect();
            buffer.set_metadata("measured-bits", bits);
            if n <= 10 {
                let mut flat = Vec::with_capacity(sv.amplitudes().len() * 2);
                for a in sv.amplitudes() {
                    flat.push(a.re);
                    flat.push(a.im);
                }
                buffer.set_metadata("statevector", flat);
            }
            return Ok(());
        }

        let mut rng = self.rng();
        if has_mid_circuit_measurement(&leaves) {
            // Trajectory mode: run the program shot by shot, collapsing
            // at each measurement. Measured qubits report their recorded
            // outcome; the rest are drawn from the final state.
            for _ in 0..self.shots {
                let mut sv = StateVector::new(n);
                let mut record = alloc::collections::BTreeMap::new();
                for instr in &leaves {
                    if instr.is_measure() {
                        let q = instr.bits()[0];
                        let m = sv.measure_qubit(q, &mut rng);
                        record.insert(q, m);
                    } else {
                        apply_gate(&mut sv, instr)?;
                    }
                }
                let idx = sv.sample_index(&mut rng);
                let mut bitstring = index_to_bitstring(idx, n).into_bytes();
                for (&q, &m) in &record {
                    bitstring[q] = if m == 1 { b'1' } else { b'0' };
                }
                buffer.add_count(core::str::from_utf8(&bitstring).unwrap(), 1);
            }
        } else {
            // All measurements are terminal: evolve once, sample the
            // final distribution.
            let mut sv = StateVector::new(n);
            for instr in &leaves {
                if instr.is_measure() {
                    continue;
                }
                apply_gate(&mut sv, instr)?;
            }
            buffer.set_counts(sv.sample_counts(self.shots, &mut rng));
        }
        let z_qubits: Vec<usize> =
            if measured.is_empty() { (0..n).collect() } else { measured.clone() };
        let bits: Vec<i64> = z_qubits.iter().map(|&q| q as i64).collect();
        buffer.set_metadata("measured-bits", bits);
        buffer.set_metadata("shots", self.shots as i64);
        Ok(())
    }

    fn connectivity(&self) -> Vec<(usize, usize)> {
        Vec::new()
    }

    fn properties(&self) -> HetMap {
        let mut props = HetMap::new();
        props.insert("max-qubits", MAX_QUBITS as i64);
        props.insert("local", true);
        props
    }
}

fn apply_gate(sv: &mut StateVector, instr: &Instruction) -> Result<(), ExecError> {
    debug_assert_eq!(instr.kind(), InstrKind::Gate);
    let params = instr
        .concrete_params()
        .ok_or_else(|| ExecError::SymbolicProgram(instr.name().to_string()))?;
    let u = unitary(instr.name(), &params).ok_or_else(|| {
        ExecError::Backend(alloc::format!("no unitary for instruction `{}`", instr.name()))
    })?;
    sv.apply(&u, instr.bits());
    Ok(())
}

/// True when an enabled measurement is followed by a non-measurement
/// instruction, i.e. the program branches on or continues past a
/// collapse.
fn has_mid_circuit_measurement(leaves: &[&Instruction]) -> bool {
    let mut seen_measure = false;
    for instr in leaves {
        if instr.is_measure() {
            seen_measure = true;
        } else if seen_measure {
            return true;
        }
    }
    false
}
