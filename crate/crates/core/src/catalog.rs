//! The closed instruction catalog: digital gates, measurement, and the
//! annealing bias/coupler instruction, together with exact unitaries for
//! every gate.
//!
//! Instruction names are canonical and case-sensitive; the one alias is
//! `CNOT`, which resolves to `CX` everywhere. Front-end dialects map their
//! own spellings (`RX`, `rx`, `u3`, …) onto these names during parsing.

use num_complex::Complex64;

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Classification of a catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstrKind {
    /// Unitary digital gate.
    Gate,
    /// Projective readout of one qubit into a classical bit.
    Measure,
    /// Annealing bias (`bits = [i, i]`) or coupler (`bits = [i, j]`).
    Anneal,
}

/// Static description of one instruction type.
#[derive(Clone, Copy, Debug)]
pub struct InstrDef {
    pub name: &'static str,
    pub qubits: usize,
    pub params: usize,
    pub kind: InstrKind,
}

const CATALOG: &[InstrDef] = &[
    InstrDef { name: "I", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "X", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Y", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Z", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "H", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "S", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Sdg", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "T", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Tdg", qubits: 1, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Rx", qubits: 1, params: 1, kind: InstrKind::Gate },
    InstrDef { name: "Ry", qubits: 1, params: 1, kind: InstrKind::Gate },
    InstrDef { name: "Rz", qubits: 1, params: 1, kind: InstrKind::Gate },
    InstrDef { name: "U", qubits: 1, params: 3, kind: InstrKind::Gate },
    InstrDef { name: "CX", qubits: 2, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "CZ", qubits: 2, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "CPhase", qubits: 2, params: 1, kind: InstrKind::Gate },
    InstrDef { name: "Swap", qubits: 2, params: 0, kind: InstrKind::Gate },
    InstrDef { name: "Measure", qubits: 1, params: 0, kind: InstrKind::Measure },
    InstrDef { name: "qmi", qubits: 2, params: 1, kind: InstrKind::Anneal },
];

/// Resolve `name` (or the `CNOT` alias) to its canonical catalog entry.
pub fn lookup(name: &str) -> Option<&'static InstrDef> {
    let canonical = if name == "CNOT" { "CX" } else { name };
    CATALOG.iter().find(|d| d.name == canonical)
}

/// Canonical spelling for `name`, if it names a catalog entry.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    lookup(name).map(|d| d.name)
}

/// All catalog entries, in declaration order.
pub fn all() -> &'static [InstrDef] {
    CATALOG
}

/// Dense row-major complex matrix, sized `dim x dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Unitary {
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat2(rows: [[Complex64; 2]; 2]) -> Unitary {
    Unitary { dim: 2, data: rows.into_iter().flatten().collect() }
}

fn diag4(d: [Complex64; 4]) -> Unitary {
    let mut data = vec![Complex64::ZERO; 16];
    for (i, v) in d.into_iter().enumerate() {
        data[i * 4 + i] = v;
    }
    Unitary { dim: 4, data }
}

fn phase(theta: f64) -> Complex64 {
    c(math::cos(theta), math::sin(theta))
}

/// Exact unitary of gate `name` at the given concrete parameters.
///
/// Two-qubit matrices index the first listed qubit as the more significant
/// bit, so `CX` with bits `[control, target]` maps |10> to |11>.
///
/// Returns `None` for names that are not unitary gates (`Measure`, `qmi`,
/// unknown names) or when the parameter count does not match the catalog.
pub fn unitary(name: &str, params: &[f64]) -> Option<Unitary> {
    let def = lookup(name)?;
    if def.kind != InstrKind::Gate || params.len() != def.params {
        return None;
    }
    let u = match def.name {
        "I" => mat2([[r(1.0), r(0.0)], [r(0.0), r(1.0)]]),
        "X" => mat2([[r(0.0), r(1.0)], [r(1.0), r(0.0)]]),
        "Y" => mat2([[r(0.0), c(0.0, -1.0)], [c(0.0, 1.0), r(0.0)]]),
        "Z" => mat2([[r(1.0), r(0.0)], [r(0.0), r(-1.0)]]),
        "H" => {
            let h = 1.0 / math::sqrt(2.0);
            mat2([[r(h), r(h)], [r(h), r(-h)]])
        }
        "S" => mat2([[r(1.0), r(0.0)], [r(0.0), c(0.0, 1.0)]]),
        "Sdg" => mat2([[r(1.0), r(0.0)], [r(0.0), c(0.0, -1.0)]]),
        "T" => mat2([[r(1.0), r(0.0)], [r(0.0), phase(core::f64::consts::FRAC_PI_4)]]),
        "Tdg" => mat2([[r(1.0), r(0.0)], [r(0.0), phase(-core::f64::consts::FRAC_PI_4)]]),
        "Rx" => {
            let (co, si) = (math::cos(params[0] / 2.0), math::sin(params[0] / 2.0));
            mat2([[r(co), c(0.0, -si)], [c(0.0, -si), r(co)]])
        }
        "Ry" => {
            let (co, si) = (math::cos(params[0] / 2.0), math::sin(params[0] / 2.0));
            mat2([[r(co), r(-si)], [r(si), r(co)]])
        }
        "Rz" => {
            let half = params[0] / 2.0;
            mat2([[phase(-half), r(0.0)], [r(0.0), phase(half)]])
        }
        "U" => {
            let (theta, phi, lambda) = (params[0], params[1], params[2]);
            let (co, si) = (math::cos(theta / 2.0), math::sin(theta / 2.0));
            mat2([
                [r(co), -phase(lambda) * si],
                [phase(phi) * si, phase(phi + lambda) * co],
            ])
        }
        "CX" => {
            let mut u = diag4([r(1.0), r(1.0), r(0.0), r(0.0)]);
            u.data[2 * 4 + 3] = r(1.0);
            u.data[3 * 4 + 2] = r(1.0);
            u
        }
        "CZ" => diag4([r(1.0), r(1.0), r(1.0), r(-1.0)]),
        "CPhase" => diag4([r(1.0), r(1.0), r(1.0), phase(params[0])]),
        "Swap" => {
            let mut u = diag4([r(1.0), r(0.0), r(0.0), r(1.0)]);
            u.data[4 + 2] = r(1.0);
            u.data[2 * 4 + 1] = r(1.0);
            u
        }
        _ => return None,
    };
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev_from_identity(u: &Unitary) -> f64 {
        // ||U^dag U - I||_max
        let n = u.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += u.at(k, i).conj() * u.at(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    #[test]
    fn every_gate_is_unitary_across_random_parameters() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for def in all() {
            if def.kind != InstrKind::Gate {
                continue;
            }
            for _ in 0..100 {
                let params: Vec<f64> = (0..def.params)
                    .map(|_| rng.gen_range(-10.0..10.0))
                    .collect();
                let u = unitary(def.name, &params).unwrap();
                assert!(
                    max_dev_from_identity(&u) < 1e-12,
                    "{} not unitary at {:?}",
                    def.name,
                    params
                );
            }
        }
    }

    #[test]
    fn cnot_aliases_cx() {
        assert_eq!(canonical_name("CNOT"), Some("CX"));
        assert_eq!(unitary("CNOT", &[]), unitary("CX", &[]));
    }

    #[test]
    fn ry_pi_is_the_real_rotation() {
        // Frozen from the 2x2 exponential of -i*(pi/2)*Y.
        let u = unitary("Ry", &[core::f64::consts::PI]).unwrap();
        let expect = [r(0.0), r(-1.0), r(1.0), r(0.0)];
        for (a, b) in u.data.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn u_specializations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let half_pi = core::f64::consts::FRAC_PI_2;
        for _ in 0..25 {
            let theta = rng.gen_range(-6.0..6.0);
            let u = unitary("U", &[theta, -half_pi, half_pi]).unwrap();
            let rx = unitary("Rx", &[theta]).unwrap();
            for (a, b) in u.data.iter().zip(rx.data.iter()) {
                assert!((a - b).norm() < 1e-12, "U(t,-pi/2,pi/2) != Rx(t)");
            }

            let lambda = rng.gen_range(-6.0..6.0);
            let p = unitary("U", &[0.0, 0.0, lambda]).unwrap();
            assert!((p.at(0, 0) - r(1.0)).norm() < 1e-15);
            assert!((p.at(1, 1) - phase(lambda)).norm() < 1e-15);
            assert!(p.at(0, 1).norm() < 1e-15 && p.at(1, 0).norm() < 1e-15);
        }
    }

    #[test]
    fn measure_and_qmi_have_no_unitary() {
        assert!(unitary("Measure", &[]).is_none());
        assert!(unitary("qmi", &[0.5]).is_none());
        assert!(unitary("Rx", &[]).is_none(), "missing parameter");
    }
}
