//! Execution backends: quantum buffers, the accelerator contract, the
//! local statevector simulator, the exhaustive annealing solver, and
//! accelerator decorators.

mod anneal;
mod buffer;
mod mitigation;
mod sim;
mod statevector;

pub use buffer::{qalloc, QuantumBuffer};
pub use mitigation::{
    mitigate_expectation, IdentityDecorator, IdentityDecoratorFactory, RoErrorDecorator,
    RoErrorDecoratorFactory,
};
pub use sim::{SimAccelerator, MAX_QUBITS};
pub use statevector::StateVector;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::het::{HetError, HetMap};
use crate::ir::{Composite, IrError};

/// Errors from buffer handling and program execution.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExecError {
    #[error("buffer size must be at least one qubit")]
    InvalidSize,
    #[error("simulator capacity is {cap} qubits, program needs {requested}")]
    CapacityExceeded { requested: usize, cap: usize },
    #[error("program still references symbol `{0}`; evaluate it before executing")]
    SymbolicProgram(String),
    #[error("instruction targets qubit {qubit} but the buffer holds {size}")]
    QubitOutOfRange { qubit: usize, size: usize },
    #[error("program mixes digital gates and annealing instructions")]
    MixedModelProgram,
    #[error("buffer holds neither counts nor an expectation value")]
    EmptyBuffer,
    #[error("readout channel with p01={p01} and p10={p10} is not invertible")]
    DegenerateChannel { p01: f64, p10: f64 },
    #[error("bad option: {0}")]
    BadOption(String),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error("backend failure: {0}")]
    Backend(String),
}

impl From<HetError> for ExecError {
    fn from(e: HetError) -> Self {
        ExecError::BadOption(alloc::string::ToString::to_string(&e))
    }
}

/// A target that can run concrete programs against a buffer.
///
/// Implementations are configured once (shots, seed, endpoints, …) and
/// then execute any number of programs. [`Accelerator::execute`] writes
/// results directly into the caller's buffer; the list form runs each
/// program into a fresh child buffer labeled by the program's name,
/// leaving the parent's own counts untouched.
pub trait Accelerator {
    /// Registry name of this accelerator (`"sim"`, `"remote"`, …).
    fn name(&self) -> &str;

    /// Apply execution options. Unknown keys are ignored so one options
    /// bag can configure a whole stack; known keys with the wrong type
    /// fail with [`ExecError::BadOption`].
    fn configure(&mut self, options: &HetMap) -> Result<(), ExecError> {
        let _ = options;
        Ok(())
    }

    fn execute(&self, buffer: &mut QuantumBuffer, program: &Composite) -> Result<(), ExecError>;

    fn execute_many(
        &self,
        buffer: &mut QuantumBuffer,
        programs: &[&Composite],
    ) -> Result<(), ExecError> {
        for program in programs {
            let mut child = QuantumBuffer::new(buffer.size())?;
            self.execute(&mut child, program)?;
            buffer.append_child(program.name(), child);
        }
        Ok(())
    }

    /// Qubit coupling edges; empty means all-to-all.
    fn connectivity(&self) -> Vec<(usize, usize)> {
        Vec::new()
    }

    /// Backend-reported properties (readout error rates, capacity, …).
    fn properties(&self) -> HetMap {
        HetMap::new()
    }
}

/// Wraps an accelerator with pre/post-processing while preserving the
/// full [`Accelerator`] contract.
pub trait AcceleratorDecorator {
    fn name(&self) -> &str;
    fn decorate(self: Box<Self>, inner: Box<dyn Accelerator + Send + Sync>)
        -> Box<dyn Accelerator + Send + Sync>;
}
