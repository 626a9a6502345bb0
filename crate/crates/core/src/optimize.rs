//! Classical optimizers driving variational loops: a derivative-free
//! simplex method and shift-rule gradient descent.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::het::HetMap;

/// Errors from optimizer configuration or execution.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizeError {
    #[error("bad optimizer option: {0}")]
    BadOption(String),
    #[error("objective dimension must be at least one")]
    ZeroDimension,
}

/// An objective function of fixed dimension, optionally able to fill
/// in its own gradient (analytic or measured).
pub struct OptFunction<'a> {
    f: Box<dyn FnMut(&[f64], &mut [f64]) -> f64 + 'a>,
    dimension: usize,
    provides_gradient: bool,
}

impl<'a> OptFunction<'a> {
    /// Value-only objective; optimizers needing gradients fall back to
    /// the shift rule.
    pub fn new(dimension: usize, mut f: impl FnMut(&[f64]) -> f64 + 'a) -> Self {
        OptFunction {
            f: Box::new(move |x, _| f(x)),
            dimension,
            provides_gradient: false,
        }
    }

    /// Objective that writes ∂f/∂xᵢ into the gradient slice on each
    /// call.
    pub fn with_gradient(
        dimension: usize,
        f: impl FnMut(&[f64], &mut [f64]) -> f64 + 'a,
    ) -> Self {
        OptFunction { f: Box::new(f), dimension, provides_gradient: true }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn provides_gradient(&self) -> bool {
        self.provides_gradient
    }

    pub fn eval(&mut self, x: &[f64]) -> f64 {
        let mut scratch = alloc::vec![0.0; self.dimension];
        (self.f)(x, &mut scratch)
    }

    pub fn eval_with_gradient(&mut self, x: &[f64], gradient: &mut [f64]) -> f64 {
        (self.f)(x, gradient)
    }
}

/// Outcome of an optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Best objective value found.
    pub value: f64,
    /// Argument achieving it.
    pub parameters: Vec<f64>,
    /// Objective evaluations spent.
    pub n_evals: usize,
}

/// A configurable minimizer.
///
/// Common options: `maxeval` (default 500), `ftol` (default 1e-6),
/// `initial-parameters` (default all zeros), `step` (method-specific
/// meaning). The `nlopt-maxeval`/`nlopt-ftol` spellings are accepted
/// as aliases and `nlopt-optimizer` is accepted and ignored, for
/// compatibility with option bags written against NLopt-style
/// backends.
pub trait Optimizer {
    fn name(&self) -> &str;
    fn set_options(&mut self, options: &HetMap) -> Result<(), OptimizeError>;
    fn optimize(&self, function: &mut OptFunction) -> Result<OptResult, OptimizeError>;
}

/// Options shared by the built-in optimizers.
#[derive(Debug, Clone)]
struct CommonOptions {
    maxeval: usize,
    ftol: f64,
    step: f64,
    initial: Option<Vec<f64>>,
}

impl CommonOptions {
    fn new(default_step: f64) -> Self {
        CommonOptions { maxeval: 500, ftol: 1e-6, step: default_step, initial: None }
    }

    fn apply(&mut self, options: &HetMap) -> Result<(), OptimizeError> {
        let bad = |e: crate::het::HetError| OptimizeError::BadOption(e.to_string());
        for key in ["maxeval", "nlopt-maxeval"] {
            if let Some(v) = options.opt_int(key).map_err(bad)? {
                if v < 1 {
                    return Err(OptimizeError::BadOption("maxeval must be positive".into()));
                }
                self.maxeval = v as usize;
            }
        }
        for key in ["ftol", "nlopt-ftol"] {
            if let Some(v) = options.opt_real(key).map_err(bad)? {
                self.ftol = v;
            }
        }
        if let Some(v) = options.opt_real("step").map_err(bad)? {
            if v <= 0.0 {
                return Err(OptimizeError::BadOption("step must be positive".into()));
            }
            self.step = v;
        }
        if let Some(v) = options.opt_real_list("initial-parameters").map_err(bad)? {
            self.initial = Some(v);
        }
        Ok(())
    }

    fn start(&self, dimension: usize) -> Result<Vec<f64>, OptimizeError> {
        match &self.initial {
            None => Ok(alloc::vec![0.0; dimension]),
            Some(x) if x.len() == dimension => Ok(x.clone()),
            Some(x) => Err(OptimizeError::BadOption(alloc::format!(
                "initial-parameters has {} entries, objective takes {}",
                x.len(),
                dimension
            ))),
        }
    }
}

/// Derivative-free simplex minimizer with the standard reflection,
/// expansion, contraction, and shrink moves. `step` (default 0.5) is
/// the initial simplex displacement along each axis.
pub struct NelderMead {
    common: CommonOptions,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { common: CommonOptions::new(0.5) }
    }
}

impl NelderMead {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Optimizer for NelderMead {
    fn name(&self) -> &str {
        "neldermead"
    }

    fn set_options(&mut self, options: &HetMap) -> Result<(), OptimizeError> {
        self.common.apply(options)
    }

    fn optimize(&self, function: &mut OptFunction) -> Result<OptResult, OptimizeError> {
        let n = function.dimension();
        if n == 0 {
            return Err(OptimizeError::ZeroDimension);
        }
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        let mut n_evals = 0usize;
        let maxeval = self.common.maxeval;
        let eval = |f: &mut OptFunction, x: &[f64], n_evals: &mut usize| -> f64 {
            *n_evals += 1;
            f.eval(x)
        };

        let x0 = self.common.start(n)?;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let f0 = eval(function, &x0, &mut n_evals);
        simplex.push((x0.clone(), f0));
        for i in 0..n {
            let mut xi = x0.clone();
            xi[i] += self.common.step;
            let fi = eval(function, &xi, &mut n_evals);
            simplex.push((xi, fi));
        }

        while n_evals < maxeval {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
            let spread = simplex[n].1 - simplex[0].1;
            if spread.abs() < self.common.ftol {
                break;
            }
            // Centroid of all but the worst vertex.
            let mut centroid = alloc::vec![0.0; n];
            for (x, _) in simplex.iter().take(n) {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let reflected: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + alpha * (c - w))
                .collect();
            let fr = eval(function, &reflected, &mut n_evals);
            if fr < simplex[0].1 {
                // Try stretching further in the same direction.
                let expanded: Vec<f64> = centroid
                    .iter()
                    .zip(&reflected)
                    .map(|(c, r)| c + gamma * (r - c))
                    .collect();
                let fe = eval(function, &expanded, &mut n_evals);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
                continue;
            }
            // Contract toward the better of worst/reflected.
            let toward = if fr < worst.1 { &reflected } else { &worst.0 };
            let contracted: Vec<f64> =
                centroid.iter().zip(toward).map(|(c, t)| c + rho * (t - c)).collect();
            let fc = eval(function, &contracted, &mut n_evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
                continue;
            }
            // Shrink everything toward the best vertex.
            let best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let shrunk: Vec<f64> =
                    best.iter().zip(&vertex.0).map(|(b, v)| b + sigma * (v - b)).collect();
                let fs = eval(function, &shrunk, &mut n_evals);
                *vertex = (shrunk, fs);
                if n_evals >= maxeval {
                    break;
                }
            }
        }

        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
        let (parameters, value) = simplex.swap_remove(0);
        Ok(OptResult { value, parameters, n_evals })
    }
}

/// Fill `gradient` with the two-point shift-rule estimate
/// ∂f/∂xᵢ = [f(x + π/2·eᵢ) − f(x − π/2·eᵢ)] / 2.
///
/// The rule is exact (up to statistical noise) for expectation values
/// of circuits whose parameterized gates have two-eigenvalue
/// generators, which covers the whole rotation catalog.
pub fn parameter_shift_gradient(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x: &[f64],
    gradient: &mut [f64],
) {
    let shift = core::f64::consts::FRAC_PI_2;
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + shift;
        let plus = f(&probe);
        probe[i] = x[i] - shift;
        let minus = f(&probe);
        probe[i] = x[i];
        gradient[i] = 0.5 * (plus - minus);
    }
}

/// Fixed-step gradient descent. Uses the objective's own gradient
/// when provided, otherwise estimates it with the shift rule (two
/// evaluations per dimension per iteration). `step` (default 0.05) is
/// the descent rate.
pub struct GradientDescent {
    common: CommonOptions,
}

impl Default for GradientDescent {
    fn default() -> Self {
        GradientDescent { common: CommonOptions::new(0.05) }
    }
}

impl GradientDescent {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Optimizer for GradientDescent {
    fn name(&self) -> &str {
        "gd-paramshift"
    }

    fn set_options(&mut self, options: &HetMap) -> Result<(), OptimizeError> {
        self.common.apply(options)
    }

    fn optimize(&self, function: &mut OptFunction) -> Result<OptResult, OptimizeError> {
        let n = function.dimension();
        if n == 0 {
            return Err(OptimizeError::ZeroDimension);
        }
        let mut x = self.common.start(n)?;
        let mut n_evals = 0usize;
        let mut gradient = alloc::vec![0.0; n];

        let mut previous = f64::INFINITY;
        let mut best = OptResult { value: f64::INFINITY, parameters: x.clone(), n_evals: 0 };
        while n_evals < self.common.maxeval {
            let value = if function.provides_gradient() {
                n_evals += 1;
                function.eval_with_gradient(&x, &mut gradient)
            } else {
                n_evals += 1;
                let value = function.eval(&x);
                let mut probe = x.clone();
                for i in 0..n {
                    probe[i] = x[i] + core::f64::consts::FRAC_PI_2;
                    let plus = function.eval(&probe);
                    probe[i] = x[i] - core::f64::consts::FRAC_PI_2;
                    let minus = function.eval(&probe);
                    probe[i] = x[i];
                    gradient[i] = 0.5 * (plus - minus);
                    n_evals += 2;
                }
                value
            };
            if value < best.value {
                best = OptResult { value, parameters: x.clone(), n_evals };
            }
            if (previous - value).abs() < self.common.ftol {
                break;
            }
            previous = value;
            for (xi, g) in x.iter_mut().zip(&gradient) {
                *xi -= self.common.step * g;
            }
        }
        best.n_evals = n_evals;
        Ok(best)
    }
}
