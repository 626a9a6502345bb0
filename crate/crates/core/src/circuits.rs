//! Dynamic circuit generators: parameterized families of circuits
//! expanded from an option map at compile time.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::catalog::{self, InstrKind};
use crate::het::HetMap;
use crate::ir::{Composite, InstrParam, Instruction, SymExpr};
use crate::observable::{jordan_wigner, FermionOperator, ObservableError, SpinOperator};

/// Errors raised while expanding a generated circuit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("generator `{generator}` needs option `{option}`")]
    MissingOption { generator: String, option: String },
    #[error("bad option for generator `{generator}`: {message}")]
    BadOption { generator: String, message: String },
    #[error("term `{term}` has a complex weight; the exponent must be Hermitian")]
    ComplexCoefficient { term: String },
    #[error("operator has no non-identity terms to exponentiate")]
    EmptyOperator,
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

/// A named family of circuits, expanded on demand from an option map.
pub trait CompositeGenerator {
    fn name(&self) -> &str;
    fn expand(&self, options: &HetMap) -> Result<Composite, CircuitError>;
}

fn missing(generator: &str, option: &str) -> CircuitError {
    CircuitError::MissingOption {
        generator: generator.to_string(),
        option: option.to_string(),
    }
}

fn bad(generator: &str, message: impl Into<String>) -> CircuitError {
    CircuitError::BadOption { generator: generator.to_string(), message: message.into() }
}

/// Read the qubit window common to the range and QFT generators:
/// either `nq` (window `[0, nq)`) or `start`/`end` (half-open).
fn qubit_window(generator: &str, options: &HetMap) -> Result<(usize, usize), CircuitError> {
    let as_bad = |e: crate::het::HetError| bad(generator, e.to_string());
    let (start, end) = if let Some(n) = options.opt_int("nq").map_err(as_bad)? {
        (0, n)
    } else {
        let start = options
            .opt_int("start")
            .map_err(as_bad)?
            .ok_or_else(|| missing(generator, "nq"))?;
        let end = options
            .opt_int("end")
            .map_err(as_bad)?
            .ok_or_else(|| missing(generator, "end"))?;
        (start, end)
    };
    if start < 0 || end <= start {
        return Err(bad(generator, "qubit range is empty or negative"));
    }
    Ok((start as usize, end as usize))
}

/// Applies one single-qubit gate across a contiguous qubit range.
///
/// Options: `gate` (text, required) plus either `nq` (qubits
/// `0..nq`) or `start` and `end` (half-open window).
pub struct RangeGenerator;

impl CompositeGenerator for RangeGenerator {
    fn name(&self) -> &str {
        "range"
    }

    fn expand(&self, options: &HetMap) -> Result<Composite, CircuitError> {
        let gate = options
            .opt_text("gate")
            .map_err(|e| bad("range", e.to_string()))?
            .ok_or_else(|| missing("range", "gate"))?;
        let def = catalog::lookup(&gate)
            .ok_or_else(|| bad("range", alloc::format!("unknown gate `{gate}`")))?;
        if def.kind != InstrKind::Gate || def.qubits != 1 || def.params != 0 {
            return Err(bad(
                "range",
                alloc::format!("`{gate}` is not a single-qubit parameterless gate"),
            ));
        }
        let (start, end) = qubit_window("range", options)?;
        let mut out = Composite::new("range");
        for q in start..end {
            out.add_instruction(Instruction::gate(&gate, [q]).expect("validated above"));
        }
        Ok(out)
    }
}

/// Quantum Fourier transform over a qubit window.
///
/// Options: `nq` or `start`/`end` as for `range`. The lowest window
/// index is the most significant bit of the transformed value, so on
/// `[0, n)` the circuit's unitary is literally the DFT matrix of size
/// 2^n.
pub struct QftGenerator;

impl CompositeGenerator for QftGenerator {
    fn name(&self) -> &str {
        "qft"
    }

    fn expand(&self, options: &HetMap) -> Result<Composite, CircuitError> {
        let (start, end) = qubit_window("qft", options)?;
        let mut out = Composite::new("qft");
        for target in start..end {
            out.add_instruction(Instruction::gate("H", [target]).expect("catalog gate"));
            for control in target + 1..end {
                let angle = core::f64::consts::PI / (1u64 << (control - target)) as f64;
                out.add_instruction(
                    Instruction::new(
                        "CPhase",
                        alloc::vec![control, target],
                        alloc::vec![InstrParam::Real(angle)],
                    )
                    .expect("catalog gate"),
                );
            }
        }
        let width = end - start;
        for q in 0..width / 2 {
            out.add_instruction(
                Instruction::gate("Swap", [start + q, end - 1 - q]).expect("catalog gate"),
            );
        }
        Ok(out)
    }
}

/// First-order circuit for `exp(iθH)` with `H` a weighted sum of
/// Pauli strings.
///
/// Options: `pauli` (text) or `fermion` (text, mapped through the
/// parity-chain transform first), and optionally `variable` (text,
/// default `"theta"`) naming the circuit's free parameter θ.
///
/// Each term `c·P` contributes a standard block: basis rotations onto
/// Z, a CNOT parity ladder, `Rz(-2c·θ)` on the last site (the sign
/// makes the block equal `exp(icθP)` under the half-angle convention
/// `Rz(φ) = exp(-iφZ/2)`), then the ladder and rotations undone.
/// Pauli terms are emitted in the order they were written; identity
/// terms only shift global phase and are skipped.
pub struct ExpIThetaGenerator;

impl CompositeGenerator for ExpIThetaGenerator {
    fn name(&self) -> &str {
        "exp_i_theta"
    }

    fn expand(&self, options: &HetMap) -> Result<Composite, CircuitError> {
        let variable = options
            .opt_text("variable")
            .map_err(|e| bad("exp_i_theta", e.to_string()))?
            .unwrap_or_else(|| "theta".to_string());
        // Single-term operators in source order.
        let pieces: Vec<SpinOperator> = if let Some(text) =
            options.opt_text("pauli").map_err(|e| bad("exp_i_theta", e.to_string()))?
        {
            split_top_level_terms(&text)
                .into_iter()
                .map(|piece| SpinOperator::parse(&piece))
                .collect::<Result<_, _>>()?
        } else if let Some(text) =
            options.opt_text("fermion").map_err(|e| bad("exp_i_theta", e.to_string()))?
        {
            let mapped = jordan_wigner(&FermionOperator::parse(&text)?);
            mapped
                .terms()
                .map(|(term, c)| SpinOperator::from_term(c, term.clone()))
                .collect()
        } else {
            return Err(missing("exp_i_theta", "pauli"));
        };

        let mut out = Composite::with_variables("exp_i_theta", [variable.clone()]);
        let mut emitted = false;
        for piece in &pieces {
            for (term, coefficient) in piece.terms() {
                if term.is_identity() {
                    continue;
                }
                if coefficient.im.abs() > 1e-12 {
                    return Err(CircuitError::ComplexCoefficient { term: term.text() });
                }
                emit_term_block(&mut out, term.iter().collect(), coefficient.re, &variable);
                emitted = true;
            }
        }
        if !emitted {
            return Err(CircuitError::EmptyOperator);
        }
        Ok(out)
    }
}

/// Append the standard `exp(i·c·θ·P)` block for one Pauli product.
fn emit_term_block(
    out: &mut Composite,
    basis: Vec<(usize, char)>,
    coefficient: f64,
    variable: &str,
) {
    let sites: Vec<usize> = basis.iter().map(|&(s, _)| s).collect();
    // Rotate X/Y factors onto the Z axis.
    for &(site, op) in &basis {
        match op {
            'X' => out.add_instruction(Instruction::gate("H", [site]).expect("catalog gate")),
            'Y' => out.add_instruction(rx(site, core::f64::consts::FRAC_PI_2)),
            _ => {}
        }
    }
    // Fold parity onto the last site.
    for pair in sites.windows(2) {
        out.add_instruction(Instruction::gate("CX", [pair[0], pair[1]]).expect("catalog gate"));
    }
    let angle = SymExpr::scaled_variable(-2.0 * coefficient, variable);
    out.add_instruction(
        Instruction::new(
            "Rz",
            alloc::vec![*sites.last().expect("non-identity term has sites")],
            alloc::vec![InstrParam::Sym(angle)],
        )
        .expect("catalog gate"),
    );
    // Undo the ladder and the basis rotations.
    for pair in sites.windows(2).rev() {
        out.add_instruction(Instruction::gate("CX", [pair[0], pair[1]]).expect("catalog gate"));
    }
    for &(site, op) in basis.iter().rev() {
        match op {
            'X' => out.add_instruction(Instruction::gate("H", [site]).expect("catalog gate")),
            'Y' => out.add_instruction(rx(site, -core::f64::consts::FRAC_PI_2)),
            _ => {}
        }
    }
}

/// Split operator text at top-level `+`/`-` so terms keep their
/// written order; signs are folded into the returned pieces.
/// Separators inside `(re,im)` coefficients don't split.
fn split_top_level_terms(text: &str) -> Vec<String> {
    let mut pieces = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    let mut sign = "";
    for (idx, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' | '-' if depth == 0 && idx != 0 => {
                if !current.trim().is_empty() {
                    pieces.push(alloc::format!("{sign}{}", current.trim()));
                }
                sign = if ch == '-' { "-" } else { "" };
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    if !current.trim().is_empty() {
        pieces.push(alloc::format!("{sign}{}", current.trim()));
    }
    pieces
}

fn rx(site: usize, angle: f64) -> Instruction {
    Instruction::new("Rx", alloc::vec![site], alloc::vec![InstrParam::Real(angle)])
        .expect("catalog gate")
}

/// The built-in generators in registration order.
pub fn builtin_generators() -> Vec<alloc::boxed::Box<dyn CompositeGenerator + Send + Sync>> {
    alloc::vec![
        alloc::boxed::Box::new(RangeGenerator),
        alloc::boxed::Box::new(QftGenerator),
        alloc::boxed::Box::new(ExpIThetaGenerator),
    ]
}
