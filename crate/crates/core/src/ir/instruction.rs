//! Leaf IR nodes: one catalog instruction applied to concrete qubits.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::{self, InstrKind};

use super::{InstrParam, IrError};

/// A single instruction: canonical name, target qubits, parameters, an
/// enabled flag, and (for measurements) optional explicit classical bits.
///
/// Construction goes through [`Instruction::new`], which resolves aliases
/// (`CNOT` becomes `CX`), checks qubit/parameter arity against the
/// catalog, and normalizes annealing couplers to ascending qubit order.
#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    name: String,
    bits: Vec<usize>,
    params: Vec<InstrParam>,
    enabled: bool,
    cbits: Option<Vec<usize>>,
}

impl Instruction {
    pub fn new(
        name: &str,
        bits: impl Into<Vec<usize>>,
        params: impl Into<Vec<InstrParam>>,
    ) -> Result<Instruction, IrError> {
        let def = catalog::lookup(name)
            .ok_or_else(|| IrError::UnknownInstruction(name.to_string()))?;
        let mut bits = bits.into();
        let params = params.into();
        if bits.len() != def.qubits || params.len() != def.params {
            return Err(IrError::ArityMismatch {
                name: def.name.to_string(),
                expected_bits: def.qubits,
                got_bits: bits.len(),
                expected_params: def.params,
                got_params: params.len(),
            });
        }
        if def.kind == InstrKind::Anneal {
            bits.sort_unstable();
        }
        Ok(Instruction {
            name: def.name.to_string(),
            bits,
            params,
            enabled: true,
            cbits: None,
        })
    }

    /// Gate with no parameters.
    pub fn gate(name: &str, bits: impl Into<Vec<usize>>) -> Result<Instruction, IrError> {
        Instruction::new(name, bits, Vec::new())
    }

    /// Measurement of `qubit`; the classical bit defaults to the qubit
    /// index until overridden with [`Instruction::set_cbits`].
    pub fn measure(qubit: usize) -> Instruction {
        Instruction::new("Measure", vec![qubit], Vec::new())
            .expect("Measure is always in the catalog")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bits(&self) -> &[usize] {
        &self.bits
    }

    pub fn params(&self) -> &[InstrParam] {
        &self.params
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn set_enabled(&mut self, enabled: bool) {
        self.enabled = enabled;
    }

    /// Effective classical bits: explicit ones when set, otherwise the
    /// measured qubits themselves.
    pub fn cbits(&self) -> Vec<usize> {
        match &self.cbits {
            Some(c) => c.clone(),
            None => self.bits.clone(),
        }
    }

    /// Explicit classical bits as stored (absent when defaulted).
    pub fn explicit_cbits(&self) -> Option<&[usize]> {
        self.cbits.as_deref()
    }

    pub fn set_cbits(&mut self, cbits: Vec<usize>) {
        self.cbits = Some(cbits);
    }

    pub fn kind(&self) -> InstrKind {
        catalog::lookup(&self.name)
            .expect("constructed instructions are always in the catalog")
            .kind
    }

    pub fn is_measure(&self) -> bool {
        self.kind() == InstrKind::Measure
    }

    pub fn is_anneal(&self) -> bool {
        self.kind() == InstrKind::Anneal
    }

    /// True when any parameter is still symbolic.
    pub fn is_symbolic(&self) -> bool {
        self.params.iter().any(InstrParam::is_symbolic)
    }

    /// Concrete parameter values; `None` while symbolic or text-tagged.
    pub fn concrete_params(&self) -> Option<Vec<f64>> {
        self.params.iter().map(InstrParam::as_real).collect()
    }

    /// Copy with every symbolic parameter substituted through `lookup`.
    pub fn bind(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<Instruction, IrError> {
        let params = self
            .params
            .iter()
            .map(|p| p.bind(lookup))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Instruction { params, ..self.clone() })
    }

    /// Reconstruct from persisted parts, re-validating against the
    /// catalog.
    pub(crate) fn from_parts(
        name: &str,
        bits: Vec<usize>,
        params: Vec<InstrParam>,
        enabled: bool,
        cbits: Option<Vec<usize>>,
    ) -> Result<Instruction, IrError> {
        let mut instr = Instruction::new(name, bits, params)?;
        instr.enabled = enabled;
        instr.cbits = cbits;
        Ok(instr)
    }
}

impl core::fmt::Display for Instruction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            write!(f, "(")?;
            for (i, p) in self.params.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        for b in &self.bits {
            write!(f, " q{b}")?;
        }
        if !self.enabled {
            write!(f, " [disabled]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_canonicalizes_to_cx() {
        let i = Instruction::gate("CNOT", vec![1, 0]).unwrap();
        assert_eq!(i.name(), "CX");
        assert_eq!(i.bits(), &[1, 0]);
    }

    #[test]
    fn unknown_name_rejected() {
        assert_eq!(
            Instruction::gate("Hadamard", vec![0]).unwrap_err(),
            IrError::UnknownInstruction("Hadamard".into())
        );
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(
            Instruction::gate("H", vec![0, 1]).unwrap_err(),
            IrError::ArityMismatch { .. }
        ));
        assert!(matches!(
            Instruction::new("Rx", vec![0], vec![]).unwrap_err(),
            IrError::ArityMismatch { .. }
        ));
        assert!(Instruction::new("Rx", vec![0], vec![InstrParam::Real(0.5)]).is_ok());
    }

    #[test]
    fn measure_cbit_defaults_to_qubit() {
        let mut m = Instruction::measure(3);
        assert_eq!(m.cbits(), vec![3]);
        assert_eq!(m.explicit_cbits(), None);
        m.set_cbits(vec![0]);
        assert_eq!(m.cbits(), vec![0]);
    }

    #[test]
    fn anneal_coupler_bits_are_sorted() {
        let q = Instruction::new("qmi", vec![2, 0], vec![InstrParam::Real(-1.0)]).unwrap();
        assert_eq!(q.bits(), &[0, 2]);
        assert!(q.is_anneal());
    }

    #[test]
    fn binding_resolves_symbols() {
        let rx = Instruction::new(
            "Rx",
            vec![0],
            vec![InstrParam::parse("theta/2").unwrap()],
        )
        .unwrap();
        assert!(rx.is_symbolic());
        let bound = rx
            .bind(&|n| (n == "theta").then_some(core::f64::consts::PI))
            .unwrap();
        assert!(!bound.is_symbolic());
        assert_eq!(
            bound.concrete_params().unwrap(),
            vec![core::f64::consts::FRAC_PI_2]
        );
    }
}
