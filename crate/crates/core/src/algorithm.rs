//! Hybrid variational algorithms: energy minimization over an
//! observable (VQE) and data-driven circuit learning of a target
//! distribution (DDCL).
//!
//! An [`Algorithm`] is configured once with a heterogeneous options
//! map whose values include [`Handle`]s to live framework objects (the
//! ansatz, an observable, an accelerator, an optimizer), then executed
//! against a quantum buffer. Results land in the buffer's metadata:
//! the best objective value under `"opt-val"` and the best parameters
//! under `"opt-params"`, with per-evaluation child buffers carrying
//! their own bookkeeping.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::backend::{Accelerator, ExecError, QuantumBuffer};
use crate::het::{Handle, HetError, HetMap};
use crate::ir::{Composite, Instruction, IrError};
use crate::observable::{Observable, ObservableError};
use crate::optimize::{OptFunction, Optimizer, OptimizeError};

/// Errors from algorithm configuration or execution.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgoError {
    /// A required initialization key is missing.
    #[error("algorithm initialization requires `{0}`")]
    Initialization(String),
    /// An option is present but unusable.
    #[error("bad algorithm option: {0}")]
    BadOption(String),
    /// Two distributions that must be the same length are not.
    #[error("distribution length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// A named, configurable hybrid algorithm.
pub trait Algorithm {
    /// Registry name (`"vqe"`, `"ddcl"`).
    fn name(&self) -> &str;

    /// Accept the options map. Handles to the collaborating objects
    /// are taken here; missing required keys fail by name.
    fn initialize(&mut self, options: &HetMap) -> Result<(), AlgoError>;

    /// Run to completion against `buffer`, recording results in its
    /// metadata and children.
    fn execute(&self, buffer: &mut QuantumBuffer) -> Result<(), AlgoError>;
}

// ---------------------------------------------------------------------------
// Jensen-Shannon divergence
// ---------------------------------------------------------------------------

/// JSD(p, q) = ½·KL(p‖m) + ½·KL(q‖m) with m = (p+q)/2, natural
/// logarithm, and 0·log 0 taken as 0. Symmetric, bounded by ln 2.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64, AlgoError> {
    if p.len() != q.len() {
        return Err(AlgoError::LengthMismatch { expected: p.len(), got: q.len() });
    }
    let mut acc = 0.0;
    for (&pk, &qk) in p.iter().zip(q) {
        let mk = 0.5 * (pk + qk);
        if pk > 0.0 && mk > 0.0 {
            acc += 0.5 * pk * crate::math::ln(pk / mk);
        }
        if qk > 0.0 && mk > 0.0 {
            acc += 0.5 * qk * crate::math::ln(qk / mk);
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Handle plumbing
// ---------------------------------------------------------------------------

fn take_handle(options: &HetMap, key: &str) -> Result<Handle, AlgoError> {
    match options.get_handle(key) {
        Ok(h) => Ok(h),
        Err(HetError::KeyMissing { .. }) => Err(AlgoError::Initialization(key.to_string())),
        Err(e) => Err(AlgoError::BadOption(e.to_string())),
    }
}

fn composite_handle(options: &HetMap, key: &str) -> Result<Arc<Composite>, AlgoError> {
    match take_handle(options, key)? {
        Handle::Composite(c) => Ok(c),
        other => Err(AlgoError::BadOption(alloc::format!(
            "`{key}` holds a {} handle, expected a composite",
            other.kind()
        ))),
    }
}

fn observable_handle(
    options: &HetMap,
    key: &str,
) -> Result<Arc<dyn Observable + Send + Sync>, AlgoError> {
    match take_handle(options, key)? {
        Handle::Observable(o) => Ok(o),
        other => Err(AlgoError::BadOption(alloc::format!(
            "`{key}` holds a {} handle, expected an observable",
            other.kind()
        ))),
    }
}

fn accelerator_handle(
    options: &HetMap,
    key: &str,
) -> Result<Arc<dyn Accelerator + Send + Sync>, AlgoError> {
    match take_handle(options, key)? {
        Handle::Accelerator(a) => Ok(a),
        other => Err(AlgoError::BadOption(alloc::format!(
            "`{key}` holds a {} handle, expected an accelerator",
            other.kind()
        ))),
    }
}

fn optimizer_handle(
    options: &HetMap,
    key: &str,
) -> Result<Arc<dyn Optimizer + Send + Sync>, AlgoError> {
    match take_handle(options, key)? {
        Handle::Optimizer(o) => Ok(o),
        other => Err(AlgoError::BadOption(alloc::format!(
            "`{key}` holds a {} handle, expected an optimizer",
            other.kind()
        ))),
    }
}

// ---------------------------------------------------------------------------
// VQE
// ---------------------------------------------------------------------------

/// Variational eigensolver: minimizes
/// `E(x) = offset + Σ_terms coeff·⟨term⟩` over the ansatz parameters.
///
/// Each objective evaluation observes the ansatz (one measured circuit
/// per non-identity term), binds the current parameters, and runs all
/// term circuits in one batched accelerator call. Every term circuit
/// leaves a child buffer on the parent carrying `"parameters"`,
/// `"term"`, and `"exp-val"` metadata; the optimum lands on the parent
/// as `"opt-val"` / `"opt-params"`.
#[derive(Default)]
pub struct Vqe {
    ansatz: Option<Arc<Composite>>,
    observable: Option<Arc<dyn Observable + Send + Sync>>,
    accelerator: Option<Arc<dyn Accelerator + Send + Sync>>,
    optimizer: Option<Arc<dyn Optimizer + Send + Sync>>,
}

impl Vqe {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Algorithm for Vqe {
    fn name(&self) -> &str {
        "vqe"
    }

    fn initialize(&mut self, options: &HetMap) -> Result<(), AlgoError> {
        self.ansatz = Some(composite_handle(options, "ansatz")?);
        self.observable = Some(observable_handle(options, "observable")?);
        self.accelerator = Some(accelerator_handle(options, "accelerator")?);
        self.optimizer = Some(optimizer_handle(options, "optimizer")?);
        Ok(())
    }

    fn execute(&self, buffer: &mut QuantumBuffer) -> Result<(), AlgoError> {
        let missing = |key: &str| AlgoError::Initialization(key.to_string());
        let ansatz = self.ansatz.as_ref().ok_or_else(|| missing("ansatz"))?;
        let observable = self.observable.as_ref().ok_or_else(|| missing("observable"))?;
        let accelerator = self.accelerator.as_ref().ok_or_else(|| missing("accelerator"))?;
        let optimizer = self.optimizer.as_ref().ok_or_else(|| missing("optimizer"))?;

        let dim = ansatz.variables().len();
        if dim == 0 {
            return Err(AlgoError::BadOption(
                "the ansatz has no variables to optimize over".to_string(),
            ));
        }
        let observed = observable.observe(ansatz)?;
        let offset = observable.identity_offset();
        if observed.is_empty() {
            // Constant observable: nothing to run or optimize.
            buffer.set_metadata("opt-val", offset);
            buffer.set_metadata("opt-params", alloc::vec![0.0; dim]);
            return Ok(());
        }

        let mut failure: Option<AlgoError> = None;
        let buffer_cell = core::cell::RefCell::new(&mut *buffer);
        let mut objective = OptFunction::new(dim, |x: &[f64]| {
            if failure.is_some() {
                return 0.0;
            }
            let run = || -> Result<f64, AlgoError> {
                let mut bound = Vec::with_capacity(observed.len());
                for oc in &observed {
                    bound.push(oc.composite.evaluate(x)?);
                }
                let refs: Vec<&Composite> = bound.iter().collect();
                let mut buffer = buffer_cell.borrow_mut();
                let start = buffer.children().len();
                accelerator.execute_many(&mut buffer, &refs)?;
                let mut energy = offset;
                for (i, oc) in observed.iter().enumerate() {
                    let child = &mut buffer.children_mut()[start + i].1;
                    let exp_val = child.expectation_value_z()?;
                    child.set_metadata("exp-val", exp_val);
                    child.set_metadata("term", oc.term.clone());
                    child.set_metadata("parameters", x.to_vec());
                    energy += oc.weight() * exp_val;
                }
                Ok(energy)
            };
            match run() {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        });
        let result = optimizer.optimize(&mut objective)?;
        drop(objective);
        if let Some(e) = failure {
            return Err(e);
        }
        buffer.set_metadata("opt-val", result.value);
        buffer.set_metadata("opt-params", result.parameters);
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// DDCL
// ---------------------------------------------------------------------------

/// Data-driven circuit learning: trains the ansatz so that its output
/// distribution matches a target distribution under the
/// Jensen-Shannon divergence.
///
/// The loss is `JSD(p(x), target)` where `p(x)` is the circuit's
/// output distribution — exact `|amplitude|²` when the accelerator
/// reports a statevector, observed frequencies otherwise. With the
/// `"js-parameter-shift"` gradient strategy the loss gradient is
/// assembled by the chain rule: probabilities are shifted by ±π/2 per
/// parameter and weighted by ∂JSD/∂p_k = ½·ln(p_k/m_k).
#[derive(Default)]
pub struct Ddcl {
    ansatz: Option<Arc<Composite>>,
    accelerator: Option<Arc<dyn Accelerator + Send + Sync>>,
    optimizer: Option<Arc<dyn Optimizer + Send + Sync>>,
    target: Vec<f64>,
    renormalized: bool,
    loss: String,
    gradient: String,
}

impl Ddcl {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Algorithm for Ddcl {
    fn name(&self) -> &str {
        "ddcl"
    }

    fn initialize(&mut self, options: &HetMap) -> Result<(), AlgoError> {
        self.ansatz = Some(composite_handle(options, "ansatz")?);
        self.accelerator = Some(accelerator_handle(options, "accelerator")?);
        self.optimizer = Some(optimizer_handle(options, "optimizer")?);
        let target = match options.get_real_list("target_dist") {
            Ok(t) => t,
            Err(HetError::KeyMissing { .. }) => {
                return Err(AlgoError::Initialization("target_dist".to_string()));
            }
            Err(e) => return Err(AlgoError::BadOption(e.to_string())),
        };
        if target.iter().any(|&v| v < 0.0) {
            return Err(AlgoError::BadOption(
                "target distribution entries must be non-negative".to_string(),
            ));
        }
        let total: f64 = target.iter().sum();
        if total <= 0.0 {
            return Err(AlgoError::BadOption(
                "target distribution must have positive mass".to_string(),
            ));
        }
        self.renormalized = crate::math::abs(total - 1.0) > 1e-9;
        self.target = target.iter().map(|v| v / total).collect();
        self.loss = match options.opt_text("loss") {
            Ok(Some(l)) => l,
            Ok(None) => String::from("js"),
            Err(e) => return Err(AlgoError::BadOption(e.to_string())),
        };
        if self.loss != "js" {
            return Err(AlgoError::BadOption(alloc::format!(
                "unknown loss `{}` (only `js`)",
                self.loss
            )));
        }
        self.gradient = match options.opt_text("gradient") {
            Ok(Some(g)) => g,
            Ok(None) => String::from("js-parameter-shift"),
            Err(e) => return Err(AlgoError::BadOption(e.to_string())),
        };
        if self.gradient != "js-parameter-shift" {
            return Err(AlgoError::BadOption(alloc::format!(
                "unknown gradient strategy `{}` (only `js-parameter-shift`)",
                self.gradient
            )));
        }
        Ok(())
    }

    fn execute(&self, buffer: &mut QuantumBuffer) -> Result<(), AlgoError> {
        let missing = |key: &str| AlgoError::Initialization(key.to_string());
        let ansatz = self.ansatz.as_ref().ok_or_else(|| missing("ansatz"))?;
        let accelerator = self.accelerator.as_ref().ok_or_else(|| missing("accelerator"))?;
        let optimizer = self.optimizer.as_ref().ok_or_else(|| missing("optimizer"))?;
        if self.target.is_empty() {
            return Err(missing("target_dist"));
        }

        let dim = ansatz.variables().len();
        if dim == 0 {
            return Err(AlgoError::BadOption(
                "the ansatz has no variables to optimize over".to_string(),
            ));
        }
        let n = buffer.size();
        let expected = 1usize << n;
        if self.target.len() != expected {
            return Err(AlgoError::LengthMismatch { expected, got: self.target.len() });
        }
        if self.renormalized {
            buffer.set_metadata("target-renormalized", true);
        }

        let distribution = |x: &[f64]| -> Result<Vec<f64>, AlgoError> {
            let mut program = ansatz.evaluate(x)?;
            if !program.leaves().iter().any(|i| i.is_measure()) {
                for q in 0..n {
                    program.add_instruction(Instruction::measure(q));
                }
            }
            let mut scratch = QuantumBuffer::new(n)?;
            accelerator.execute(&mut scratch, &program)?;
            if !scratch.counts().is_empty() {
                let total = scratch.total_shots() as f64;
                let mut p = alloc::vec![0.0; expected];
                for (bitstring, &count) in scratch.counts() {
                    let idx = usize::from_str_radix(bitstring, 2).map_err(|_| {
                        AlgoError::BadOption(alloc::format!(
                            "uninterpretable bitstring `{bitstring}` in counts"
                        ))
                    })?;
                    if idx >= expected {
                        return Err(AlgoError::LengthMismatch {
                            expected,
                            got: idx + 1,
                        });
                    }
                    p[idx] += count as f64 / total;
                }
                return Ok(p);
            }
            match scratch.metadata().get_real_list("statevector") {
                Ok(flat) => Ok(flat
                    .chunks_exact(2)
                    .map(|c| c[0] * c[0] + c[1] * c[1])
                    .collect()),
                Err(_) => Err(AlgoError::BadOption(
                    "the accelerator produced neither counts nor a statevector".to_string(),
                )),
            }
        };

        let target = &self.target;
        let mut failure: Option<AlgoError> = None;
        // Derivative-free optimizers never read the gradient slice;
        // skip the 2·dim shifted executions for them.
        let wants_gradient = optimizer.name() != "neldermead";
        let mut objective = OptFunction::with_gradient(dim, |x: &[f64], grad: &mut [f64]| {
            if failure.is_some() {
                return 0.0;
            }
            let mut run = || -> Result<f64, AlgoError> {
                let p = distribution(x)?;
                let loss = js_divergence(&p, target)?;
                if wants_gradient {
                    let mut shifted = x.to_vec();
                    for i in 0..dim {
                        let base = shifted[i];
                        shifted[i] = base + core::f64::consts::FRAC_PI_2;
                        let plus = distribution(&shifted)?;
                        shifted[i] = base - core::f64::consts::FRAC_PI_2;
                        let minus = distribution(&shifted)?;
                        shifted[i] = base;
                        let mut g = 0.0;
                        for k in 0..expected {
                            let mk = 0.5 * (p[k] + target[k]);
                            if p[k] > 1e-16 && mk > 1e-16 {
                                g += 0.5 * crate::math::ln(p[k] / mk) * 0.5 * (plus[k] - minus[k]);
                            }
                        }
                        grad[i] = g;
                    }
                }
                Ok(loss)
            };
            match run() {
                Ok(l) => l,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        });
        let result = optimizer.optimize(&mut objective)?;
        drop(objective);
        if let Some(e) = failure {
            return Err(e);
        }
        buffer.set_metadata("opt-val", result.value);
        buffer.set_metadata("opt-params", result.parameters);
        Ok(())
    }
}
