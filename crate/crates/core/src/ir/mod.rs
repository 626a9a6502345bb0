//! The polymorphic intermediate representation.
//!
//! Programs are trees: a [`Composite`] holds [`Instruction`] leaves and
//! nested composites, declares free variables, and evaluates to a
//! concrete circuit when given values for them. [`IrContainer`] groups
//! the composites of one compilation unit, [`InstrGraph`] exposes the
//! qubit-dependency DAG of a composite, [`InstructionVisitor`] provides
//! double-dispatch traversal, and [`json`] persists everything.

mod composite;
mod container;
mod graph;
mod instruction;
pub mod json;
mod param;
mod transform;
mod visitor;

pub use composite::{Composite, Node};
pub use container::IrContainer;
pub use graph::InstrGraph;
pub use instruction::Instruction;
pub use param::{InstrParam, SymExpr};
pub use transform::{
    IdentityTransform, IrTransformation, SwapRouter, TransformError, TransformResult,
};
pub use visitor::InstructionVisitor;

use alloc::string::String;

/// Errors raised while building, evaluating, or persisting IR.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IrError {
    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),
    #[error("instruction `{name}` takes {expected_bits} qubit(s) and {expected_params} parameter(s), got {got_bits} and {got_params}")]
    ArityMismatch {
        name: String,
        expected_bits: usize,
        got_bits: usize,
        expected_params: usize,
        got_params: usize,
    },
    #[error("symbol `{0}` is not declared by the enclosing composite")]
    UnboundSymbol(String),
    #[error("composite `{name}` declares {expected} variable(s), got {got} value(s)")]
    LengthMismatch { name: String, expected: usize, got: usize },
    #[error("composite `{0}` is an unexpanded dynamic circuit; expand it with options first")]
    UnexpandedComposite(String),
    #[error("bad expression `{text}`: {msg}")]
    BadExpression { text: String, msg: String },
    #[error("IR parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}
