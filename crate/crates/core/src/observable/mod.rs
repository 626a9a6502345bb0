//! Measurable operators: Pauli-basis spin operators, second-quantized
//! fermionic operators, and transforms between them.

mod fermion;
mod spin;

pub use fermion::{jordan_wigner, FermionOperator, JordanWignerTransform, LadderOp};
pub use spin::{PauliTerm, SpinOperator};

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ir::Composite;

/// Errors from parsing or transforming observables.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ObservableError {
    #[error("observable parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("transform `{transform}` does not take `{kind}` observables")]
    WrongKind { transform: String, kind: String },
}

/// One measurable circuit produced by [`Observable::observe`]: the
/// input program extended with the basis rotations and measurements
/// for a single operator term.
#[derive(Debug, Clone)]
pub struct ObservedCircuit {
    /// Program plus basis change plus measurements, named after the term.
    pub composite: Composite,
    /// Canonical text of the measured term, e.g. `"X0 Z2"`.
    pub term: String,
    /// The term's weight. Imaginary parts only arise for
    /// non-Hermitian operators.
    pub coefficient: Complex64,
    /// Qubits the term acts on, ascending.
    pub sites: Vec<usize>,
}

impl ObservedCircuit {
    /// Real part of the coefficient, the weight used when estimating
    /// the expectation of a Hermitian operator.
    pub fn weight(&self) -> f64 {
        self.coefficient.re
    }
}

/// An operator whose expectation can be estimated by running measured
/// variants of a state-preparation program.
pub trait Observable {
    /// Representation name (`"pauli"`, `"fermion"`).
    fn kind(&self) -> &str;

    /// Canonical text form; parseable back into the same operator.
    fn to_text(&self) -> String;

    /// Number of stored terms, the identity included.
    fn n_terms(&self) -> usize;

    /// Coefficient of the identity term (real part), the constant
    /// offset added to any expectation value.
    fn identity_offset(&self) -> f64;

    /// Largest qubit index the operator touches.
    fn max_site(&self) -> Option<usize>;

    /// Produce one measured circuit per non-identity term.
    fn observe(&self, program: &Composite) -> Result<Vec<ObservedCircuit>, ObservableError>;

    /// Runtime-typed view for transforms that need the concrete
    /// representation.
    fn as_any(&self) -> &dyn core::any::Any;
}

/// Rewrites an observable into another representation, e.g. fermionic
/// modes into Pauli strings.
pub trait ObservableTransform {
    fn name(&self) -> &str;
    fn transform(
        &self,
        observable: &dyn Observable,
    ) -> Result<Arc<dyn Observable + Send + Sync>, ObservableError>;
}

/// Parse an observable from its representation name and text, the
/// `<kind>:<text>` convention used on the command line.
pub fn parse_observable(
    kind: &str,
    text: &str,
) -> Result<Arc<dyn Observable + Send + Sync>, ObservableError> {
    match kind {
        "pauli" => Ok(Arc::new(SpinOperator::parse(text)?)),
        "fermion" => Ok(Arc::new(FermionOperator::parse(text)?)),
        other => Err(ObservableError::Parse {
            at: 0,
            message: alloc::format!("unknown observable kind `{other}`"),
        }),
    }
}
