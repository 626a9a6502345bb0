//! Accelerator decorators: readout-error mitigation and an identity
//! wrapper.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{Accelerator, AcceleratorDecorator, ExecError, QuantumBuffer};
use crate::het::HetMap;
use crate::ir::Composite;

/// Invert a symmetric-independent readout channel on a single-qubit
/// expectation value. `p01` is the probability of reading `1` for a
/// prepared `0`; `p10` the reverse. Fails when the channel is not
/// invertible (`p01 + p10 ≥ 1`).
pub fn mitigate_expectation(raw: f64, p01: f64, p10: f64) -> Result<f64, ExecError> {
    let denom = 1.0 - p01 - p10;
    if denom <= 0.0 {
        return Err(ExecError::DegenerateChannel { p01, p10 });
    }
    Ok((raw - (p10 - p01)) / denom)
}

/// Decorator that corrects measured expectation values for readout
/// error, writing the corrected product over measured qubits to the
/// buffer's `exp-val` metadata key.
///
/// Error rates come from the decorator's own options (`p01`/`p10`,
/// scalar or per-qubit list) or, failing that, the inner accelerator's
/// properties; unspecified rates default to zero.
pub struct RoErrorDecorator {
    inner: Box<dyn Accelerator + Send + Sync>,
    p01: Vec<f64>,
    p10: Vec<f64>,
    scalar_p01: f64,
    scalar_p10: f64,
}

impl RoErrorDecorator {
    pub fn new(inner: Box<dyn Accelerator + Send + Sync>) -> Self {
        let mut d = RoErrorDecorator {
            inner,
            p01: Vec::new(),
            p10: Vec::new(),
            scalar_p01: 0.0,
            scalar_p10: 0.0,
        };
        let props = d.inner.properties();
        d.adopt_rates(&props).ok();
        d
    }

    fn adopt_rates(&mut self, options: &HetMap) -> Result<(), ExecError> {
        for (key, scalar, list) in [
            ("p01", &mut self.scalar_p01, &mut self.p01),
            ("p10", &mut self.scalar_p10, &mut self.p10),
        ] {
            if let Ok(Some(vs)) = options.opt_real_list(key) {
                *list = vs;
            } else if let Some(v) = options.opt_real(key)? {
                *scalar = v;
                list.clear();
            }
        }
        Ok(())
    }

    fn rate(&self, qubit: usize) -> (f64, f64) {
        let p01 = self.p01.get(qubit).copied().unwrap_or(self.scalar_p01);
        let p10 = self.p10.get(qubit).copied().unwrap_or(self.scalar_p10);
        (p01, p10)
    }
}

impl Accelerator for RoErrorDecorator {
    fn name(&self) -> &str {
        "ro-error"
    }

    fn configure(&mut self, options: &HetMap) -> Result<(), ExecError> {
        self.adopt_rates(options)?;
        self.inner.configure(options)
    }

    fn execute(&self, buffer: &mut QuantumBuffer, program: &Composite) -> Result<(), ExecError> {
        self.inner.execute(buffer, program)?;
        if buffer.counts().is_empty() {
            // Exact executions are noiseless; expose the uncorrected
            // value under the decorator's key for a uniform interface.
            if let Ok(v) = buffer.metadata().get_real("exp-val-z") {
                buffer.set_metadata("exp-val", v);
            }
            return Ok(());
        }
        // Correct each qubit's marginal <Z_q> independently, then take
        // the product as the multi-qubit parity estimate.
        let mut product = 1.0;
        for q in buffer.measured_bits() {
            let p1 = buffer.marginal_one(q)?;
            let raw = 1.0 - 2.0 * p1;
            let (p01, p10) = self.rate(q);
            product *= mitigate_expectation(raw, p01, p10)?;
        }
        buffer.set_metadata("exp-val", product);
        Ok(())
    }

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

    fn connectivity(&self) -> Vec<(usize, usize)> {
        self.inner.connectivity()
    }

    fn properties(&self) -> HetMap {
        self.inner.properties()
    }
}

/// Registry entry that wraps an accelerator in [`RoErrorDecorator`].
pub struct RoErrorDecoratorFactory;

impl AcceleratorDecorator for RoErrorDecoratorFactory {
    fn name(&self) -> &str {
        "ro-error"
    }

    fn decorate(
        self: Box<Self>,
        inner: Box<dyn Accelerator + Send + Sync>,
    ) -> Box<dyn Accelerator + Send + Sync> {
        Box::new(RoErrorDecorator::new(inner))
    }
}

/// Pass-through decorator; useful as a baseline and for testing
/// decorator plumbing.
pub struct IdentityDecorator {
    inner: Box<dyn Accelerator + Send + Sync>,
}

impl IdentityDecorator {
    pub fn new(inner: Box<dyn Accelerator + Send + Sync>) -> Self {
        IdentityDecorator { inner }
    }
}

impl Accelerator for IdentityDecorator {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn configure(&mut self, options: &HetMap) -> Result<(), ExecError> {
        self.inner.configure(options)
    }

    fn execute(&self, buffer: &mut QuantumBuffer, program: &Composite) -> Result<(), ExecError> {
        self.inner.execute(buffer, program)
    }

    fn execute_many(
        &self,
        buffer: &mut QuantumBuffer,
        programs: &[&Composite],
    ) -> Result<(), ExecError> {
        self.inner.execute_many(buffer, programs)
    }

    fn connectivity(&self) -> Vec<(usize, usize)> {
        self.inner.connectivity()
    }

    fn properties(&self) -> HetMap {
        self.inner.properties()
    }
}

/// Registry entry that wraps an accelerator in [`IdentityDecorator`].
pub struct IdentityDecoratorFactory;

impl AcceleratorDecorator for IdentityDecoratorFactory {
    fn name(&self) -> &str {
        "identity"
    }

    fn decorate(
        self: Box<Self>,
        inner: Box<dyn Accelerator + Send + Sync>,
    ) -> Box<dyn Accelerator + Send + Sync> {
        Box::new(IdentityDecorator::new(inner))
    }
}
