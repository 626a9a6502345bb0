//! Double-dispatch traversal over IR trees.
//!
//! Implementors override only the node kinds they care about; every
//! method defaults to a no-op, so an empty `impl InstructionVisitor for
//! T {}` is the null handler.

use super::{Composite, Instruction, Node};

/// Visitor with one hook per catalog instruction plus composite entry.
#[allow(unused_variables)]
pub trait InstructionVisitor {
    fn visit_i(&mut self, instr: &Instruction) {}
    fn visit_x(&mut self, instr: &Instruction) {}
    fn visit_y(&mut self, instr: &Instruction) {}
    fn visit_z(&mut self, instr: &Instruction) {}
    fn visit_h(&mut self, instr: &Instruction) {}
    fn visit_s(&mut self, instr: &Instruction) {}
    fn visit_sdg(&mut self, instr: &Instruction) {}
    fn visit_t(&mut self, instr: &Instruction) {}
    fn visit_tdg(&mut self, instr: &Instruction) {}
    fn visit_rx(&mut self, instr: &Instruction) {}
    fn visit_ry(&mut self, instr: &Instruction) {}
    fn visit_rz(&mut self, instr: &Instruction) {}
    fn visit_u(&mut self, instr: &Instruction) {}
    fn visit_cx(&mut self, instr: &Instruction) {}
    fn visit_cz(&mut self, instr: &Instruction) {}
    fn visit_cphase(&mut self, instr: &Instruction) {}
    fn visit_swap(&mut self, instr: &Instruction) {}
    fn visit_measure(&mut self, instr: &Instruction) {}
    fn visit_qmi(&mut self, instr: &Instruction) {}
    /// Called on each composite node before its children.
    fn visit_composite(&mut self, composite: &Composite) {}
}

impl Instruction {
    /// Dispatch to the visitor method for this instruction's type.
    pub fn accept(&self, visitor: &mut dyn InstructionVisitor) {
        match self.name() {
            "I" => visitor.visit_i(self),
            "X" => visitor.visit_x(self),
            "Y" => visitor.visit_y(self),
            "Z" => visitor.visit_z(self),
            "H" => visitor.visit_h(self),
            "S" => visitor.visit_s(self),
            "Sdg" => visitor.visit_sdg(self),
            "T" => visitor.visit_t(self),
            "Tdg" => visitor.visit_tdg(self),
            "Rx" => visitor.visit_rx(self),
            "Ry" => visitor.visit_ry(self),
            "Rz" => visitor.visit_rz(self),
            "U" => visitor.visit_u(self),
            "CX" => visitor.visit_cx(self),
            "CZ" => visitor.visit_cz(self),
            "CPhase" => visitor.visit_cphase(self),
            "Swap" => visitor.visit_swap(self),
            "Measure" => visitor.visit_measure(self),
            "qmi" => visitor.visit_qmi(self),
            other => unreachable!("instruction `{other}` escaped the catalog"),
        }
    }
}

impl Composite {
    /// Pre-order traversal: the composite itself, then each child.
    pub fn accept(&self, visitor: &mut dyn InstructionVisitor) {
        visitor.visit_composite(self);
        for child in self.children() {
            match child {
                Node::Instruction(i) => i.accept(visitor),
                Node::Composite(c) => c.accept(visitor),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    #[derive(Default)]
    struct GateCensus {
        counts: BTreeMap<&'static str, usize>,
        composites: usize,
    }

    impl InstructionVisitor for GateCensus {
        fn visit_h(&mut self, _: &Instruction) {
            *self.counts.entry("H").or_default() += 1;
        }
        fn visit_cx(&mut self, _: &Instruction) {
            *self.counts.entry("CX").or_default() += 1;
        }
        fn visit_measure(&mut self, _: &Instruction) {
            *self.counts.entry("Measure").or_default() += 1;
        }
        fn visit_composite(&mut self, _: &Composite) {
            self.composites += 1;
        }
    }

    #[test]
    fn census_via_double_dispatch() {
        let mut inner = Composite::new("inner");
        inner.add_instruction(Instruction::gate("H", [1]).unwrap());
        let mut c = Composite::new("outer");
        c.add_instruction(Instruction::gate("H", [0]).unwrap());
        c.add_composite(inner);
        c.add_instruction(Instruction::gate("CX", [0, 1]).unwrap());
        c.add_instruction(Instruction::measure(0));
        c.add_instruction(Instruction::measure(1));

        let mut census = GateCensus::default();
        c.accept(&mut census);
        assert_eq!(census.counts["H"], 2);
        assert_eq!(census.counts["CX"], 1);
        assert_eq!(census.counts["Measure"], 2);
        assert_eq!(census.composites, 2);
    }

    #[test]
    fn null_handler_ignores_everything() {
        struct Null;
        impl InstructionVisitor for Null {}
        let mut c = Composite::new("c");
        c.add_instruction(Instruction::gate("X", [0]).unwrap());
        c.add_instruction(
            Instruction::new("Rz", [0], [crate::ir::InstrParam::Real(0.5)]).unwrap(),
        );
        let mut null = Null;
        c.accept(&mut null); // must simply not panic
    }
}
