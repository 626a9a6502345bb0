//! Gate-set rewriting for translation targets.
//!
//! Flattens a composite to enabled leaf instructions and rewrites any
//! gate the target dialect cannot spell into an equivalent sequence
//! (equal up to global phase):
//!
//! - `Sdg` → `Rz(-π/2)`, `Tdg` → `Rz(-π/4)`
//! - `Swap(a,b)` → `CX(a,b) CX(b,a) CX(a,b)`
//! - `CPhase(θ)` on `(a,b)` → `Rz(θ/2) a; Rz(θ/2) b; CX(a,b);
//!   Rz(-θ/2) b; CX(a,b)` (exactly `diag(1,1,1,e^{iθ})` times the
//!   global phase `e^{-iθ/4}`)
//! - `I` → `U(0,0,0)` where the target lacks an identity mnemonic
//!
//! Annealing instructions have no gate-dialect spelling and error.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::ir::{Composite, InstrParam, Instruction};

use super::CompileError;

/// Halve a (possibly symbolic) rotation angle.
fn half(p: &InstrParam) -> InstrParam {
    match p {
        InstrParam::Int(v) => InstrParam::Real(*v as f64 / 2.0),
        InstrParam::Real(v) => InstrParam::Real(v / 2.0),
        InstrParam::Sym(s) => InstrParam::parse(&alloc::format!("({})/2", s.text()))
            .expect("halving a valid expression stays valid"),
        InstrParam::Text(_) => unreachable!("gate parameters are numeric"),
    }
}

fn negate(p: &InstrParam) -> InstrParam {
    match p {
        InstrParam::Int(v) => InstrParam::Real(-(*v as f64)),
        InstrParam::Real(v) => InstrParam::Real(-v),
        InstrParam::Sym(s) => InstrParam::parse(&alloc::format!("-({})", s.text()))
            .expect("negating a valid expression stays valid"),
        InstrParam::Text(_) => unreachable!("gate parameters are numeric"),
    }
}

fn rz(qubit: usize, param: InstrParam) -> Instruction {
    Instruction::new("Rz", alloc::vec![qubit], alloc::vec![param]).expect("catalog gate")
}

/// Flatten `composite` and rewrite for a dialect whose gate set is
/// `allowed`. `identity_as_u` replaces `I` with `U(0,0,0)` instead of
/// erroring when `I` is not allowed.
pub(crate) fn flatten_for_dialect(
    composite: &Composite,
    dialect: &str,
    allowed: &dyn Fn(&str) -> bool,
    identity_as_u: bool,
) -> Result<Vec<Instruction>, CompileError> {
    if let Some(unexpanded) = composite.find_unexpanded() {
        return Err(CompileError::UntranslatableInstruction {
            name: alloc::format!("unexpanded generator `{}`", unexpanded.name()),
            dialect: dialect.to_string(),
        });
    }
    let mut out = Vec::new();
    for instr in composite.enabled_leaves() {
        let name = instr.name();
        if allowed(name) {
            out.push(instr.clone());
            continue;
        }
        let bits = instr.bits();
        match name {
            "Sdg" => out.push(rz(bits[0], InstrParam::Real(-core::f64::consts::FRAC_PI_2))),
            "Tdg" => out.push(rz(bits[0], InstrParam::Real(-core::f64::consts::FRAC_PI_4))),
            "Swap" => {
                let (a, b) = (bits[0], bits[1]);
                for pair in [[a, b], [b, a], [a, b]] {
                    out.push(Instruction::gate("CX", pair.to_vec()).expect("catalog gate"));
                }
            }
            "CPhase" => {
                let (a, b) = (bits[0], bits[1]);
                let h = half(&instr.params()[0]);
                out.push(rz(a, h.clone()));
                out.push(rz(b, h.clone()));
                out.push(Instruction::gate("CX", alloc::vec![a, b]).expect("catalog gate"));
                out.push(rz(b, negate(&h)));
                out.push(Instruction::gate("CX", alloc::vec![a, b]).expect("catalog gate"));
            }
            "I" if identity_as_u => {
                out.push(
                    Instruction::new(
                        "U",
                        alloc::vec![bits[0]],
                        alloc::vec![
                            InstrParam::Real(0.0),
                            InstrParam::Real(0.0),
                            InstrParam::Real(0.0),
                        ],
                    )
                    .expect("catalog gate"),
                );
            }
            other => {
                return Err(CompileError::UntranslatableInstruction {
                    name: other.to_string(),
                    dialect: dialect.to_string(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::StateVector;
    use crate::catalog::unitary;
    use num_complex::Complex64;

    fn quil_allowed(name: &str) -> bool {
        matches!(
            name,
            "I" | "X" | "Y" | "Z" | "H" | "S" | "T" | "Rx" | "Ry" | "Rz" | "CX" | "CZ" | "U"
                | "Measure"
        )
    }

    /// Column-by-column circuit unitary over `n` qubits.
    fn circuit_matrix(instrs: &[Instruction], n: usize) -> Vec<Vec<Complex64>> {
        let dim = 1usize << n;
        let mut cols = Vec::new();
        for basis in 0..dim {
            let mut sv = StateVector::new(n);
            let mut amps = alloc::vec![Complex64::new(0.0, 0.0); dim];
            amps[basis] = Complex64::new(1.0, 0.0);
            sv.set_amplitudes(amps);
            for instr in instrs {
                let u = unitary(instr.name(), &instr.concrete_params().unwrap()).unwrap();
                sv.apply(&u, instr.bits());
            }
            cols.push(sv.amplitudes().to_vec());
        }
        cols
    }

    fn assert_equal_up_to_phase(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) {
        // Find the first non-tiny entry to fix the relative phase.
        let mut phase = None;
        for (ca, cb) in a.iter().zip(b) {
            for (x, y) in ca.iter().zip(cb) {
                if x.norm() > 1e-6 {
                    assert!(y.norm() > 1e-6, "zero pattern differs");
                    phase.get_or_insert(y / x);
                }
            }
        }
        let phase = phase.expect("matrices are non-zero");
        assert!((phase.norm() - 1.0).abs() < 1e-9);
        for (ca, cb) in a.iter().zip(b) {
            for (x, y) in ca.iter().zip(cb) {
                assert!((x * phase - y).norm() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn decompositions_preserve_unitaries_up_to_phase() {
        for (name, bits, params) in [
            ("Sdg", alloc::vec![0usize], alloc::vec![]),
            ("Tdg", alloc::vec![0], alloc::vec![]),
            ("Swap", alloc::vec![0, 1], alloc::vec![]),
            ("CPhase", alloc::vec![0, 1], alloc::vec![InstrParam::Real(0.7311)]),
            ("CPhase", alloc::vec![1, 0], alloc::vec![InstrParam::Real(-2.25)]),
        ] {
            let mut c = Composite::new("t");
            c.add_instruction(Instruction::new(name, bits.clone(), params.clone()).unwrap());
            let rewritten = flatten_for_dialect(&c, "quil", &quil_allowed, false).unwrap();
            assert!(rewritten.iter().all(|i| quil_allowed(i.name())));
            let original = [Instruction::new(name, bits, params).unwrap()];
            assert_equal_up_to_phase(
                &circuit_matrix(&original, 2),
                &circuit_matrix(&rewritten, 2),
            );
        }
    }

    #[test]
    fn identity_rewrites_to_u_when_asked() {
        let mut c = Composite::new("t");
        c.add_instruction(Instruction::gate("I", alloc::vec![0]).unwrap());
        let no_i = |name: &str| name != "I" && quil_allowed(name);
        let rewritten = flatten_for_dialect(&c, "openqasm", &no_i, true).unwrap();
        assert_eq!(rewritten[0].name(), "U");
        assert!(flatten_for_dialect(&c, "openqasm", &no_i, false).is_err());
    }

    #[test]
    fn annealing_instructions_do_not_translate() {
        let mut c = Composite::new("t");
        c.add_instruction(
            Instruction::new("qmi", alloc::vec![0, 1], alloc::vec![InstrParam::Real(0.5)])
                .unwrap(),
        );
        let err = flatten_for_dialect(&c, "quil", &quil_allowed, false).unwrap_err();
        assert_eq!(
            err,
            CompileError::UntranslatableInstruction { name: "qmi".into(), dialect: "quil".into() }
        );
    }

    #[test]
    fn symbolic_cphase_halves_symbolically() {
        let mut c = Composite::with_variables("t", ["x"]);
        c.add_instruction(
            Instruction::new(
                "CPhase",
                alloc::vec![0, 1],
                alloc::vec![InstrParam::parse("x").unwrap()],
            )
            .unwrap(),
        );
        let rewritten = flatten_for_dialect(&c, "quil", &quil_allowed, false).unwrap();
        let texts: Vec<String> = rewritten
            .iter()
            .filter(|i| i.name() == "Rz")
            .map(|i| i.params()[0].to_string())
            .collect();
        assert_eq!(texts, ["x/2", "x/2", "-(x/2)"]);
    }
}
