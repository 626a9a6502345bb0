//! Second-quantized fermionic operators and the mapping onto Pauli
//! strings.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::spin::{PauliTerm, SpinOperator};
use super::{Observable, ObservableError, ObservableTransform, ObservedCircuit};
use crate::ir::Composite;

/// One ladder operator: the mode index and whether it is a creation
/// operator (`3^`) or an annihilation operator (`3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderOp {
    pub mode: usize,
    pub creation: bool,
}

/// A weighted sum of ladder-operator products, e.g. `0^ 1 + 1^ 0`.
///
/// Products keep their written order — fermionic operators
/// anticommute, so no reordering is attempted here; the qubit mapping
/// preserves ordering exactly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    terms: Vec<(Complex64, Vec<LadderOp>)>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        FermionOperator::default()
    }

    pub fn from_term(coefficient: Complex64, ops: Vec<LadderOp>) -> Self {
        FermionOperator { terms: alloc::vec![(coefficient, ops)] }
    }

    pub fn terms(&self) -> &[(Complex64, Vec<LadderOp>)] {
        &self.terms
    }

    pub fn add(&self, other: &FermionOperator) -> FermionOperator {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FermionOperator { terms }
    }

    /// Parse text like `"0^ 1 + 2.5 1^ 0"`: terms separated by
    /// top-level `+`/`-`, each an optional real coefficient followed
    /// by mode indices, `^` marking creation. Coefficients must carry
    /// a decimal point or sign to distinguish them from mode indices
    /// (`"2.0 0^ 1"` scales, `"2 0^ 1"` is the three-operator product).
    pub fn parse(text: &str) -> Result<FermionOperator, ObservableError> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut sign = 1.0;
        let mut expect_term = true;
        let mut terms: Vec<(Complex64, Vec<LadderOp>)> = Vec::new();
        skip_ws(bytes, &mut pos);
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            sign = if bytes[pos] == b'-' { -1.0 } else { 1.0 };
            pos += 1;
        }
        loop {
            skip_ws(bytes, &mut pos);
            if pos >= bytes.len() {
                break;
            }
            let (coeff, ops, next) = parse_term(bytes, pos)?;
            terms.push((coeff * sign, ops));
            expect_term = false;
            pos = next;
            skip_ws(bytes, &mut pos);
            if pos >= bytes.len() {
                break;
            }
            match bytes[pos] {
                b'+' => sign = 1.0,
                b'-' => sign = -1.0,
                other => {
                    return Err(ObservableError::Parse {
                        at: pos,
                        message: alloc::format!(
                            "expected `+` or `-` between terms, found `{}`",
                            other as char
                        ),
                    })
                }
            }
            pos += 1;
            expect_term = true;
        }
        if terms.is_empty() || expect_term {
            return Err(ObservableError::Parse { at: pos, message: "expected a term".to_string() });
        }
        Ok(FermionOperator { terms })
    }

    /// Canonical text; parseable back into an equal operator.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (c, ops)) in self.terms.iter().enumerate() {
            let real = c.im.abs() <= 1e-12;
            if idx == 0 {
                if real && c.re < 0.0 {
                    out.push_str("- ");
                }
            } else if real && c.re < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            if !real {
                // Complex weights are printable for inspection but lie
                // outside the real-coefficient grammar parsed above.
                parts.push(alloc::format!("({},{})", c.re, c.im));
            } else if (c.re.abs() - 1.0).abs() > 1e-12 || ops.is_empty() {
                // `{:?}` keeps a decimal point on round values, which
                // the parser requires to see a coefficient.
                parts.push(alloc::format!("{:?}", c.re.abs()));
            }
            for op in ops {
                parts.push(if op.creation {
                    alloc::format!("{}^", op.mode)
                } else {
                    alloc::format!("{}", op.mode)
                });
            }
            out.push_str(&parts.join(" "));
        }
        out
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

/// Parse one term: an optional leading coefficient followed by ladder
/// operators.
///
/// A leading numeric token counts as a coefficient only when it
/// carries a decimal point or an explicit sign; bare integers are
/// always mode indices, so constant terms are written `3.0`, not `3`.
fn parse_term(
    bytes: &[u8],
    mut pos: usize,
) -> Result<(Complex64, Vec<LadderOp>, usize), ObservableError> {
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut ops: Vec<LadderOp> = Vec::new();
    let mut first = true;
    loop {
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        let mut end = pos;
        if first && (bytes[end] == b'+' || bytes[end] == b'-') {
            end += 1;
        }
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end == pos {
            break;
        }
        let token = core::str::from_utf8(&bytes[start..end]).unwrap();
        let dagger = end < bytes.len() && bytes[end] == b'^';
        let is_coefficient = first
            && !dagger
            && (token.contains('.') || token.starts_with('+') || token.starts_with('-'));
        if is_coefficient {
            coeff = Complex64::new(
                token.parse().map_err(|_| ObservableError::Parse {
                    at: start,
                    message: alloc::format!("`{token}` is not a number"),
                })?,
                0.0,
            );
            pos = end;
        } else {
            let mode: usize = token.parse().map_err(|_| ObservableError::Parse {
                at: start,
                message: alloc::format!("`{token}` is not a mode index"),
            })?;
            ops.push(LadderOp { mode, creation: dagger });
            pos = end + usize::from(dagger);
        }
        first = false;
    }
    if first {
        return Err(ObservableError::Parse { at: pos, message: "expected a term".to_string() });
    }
    Ok((coeff, ops, pos))
}

/// Map a fermionic operator onto Pauli strings, threading parity
/// through a Z chain: mode `p` becomes `Z₀…Z_{p−1} (X_p ∓ iY_p)/2`,
/// with `−` for creation and `+` for annihilation.
pub fn jordan_wigner(op: &FermionOperator) -> SpinOperator {
    let mut out = SpinOperator::zero();
    for (coeff, ops) in op.terms() {
        let mut product = SpinOperator::constant(1.0);
        for ladder in ops {
            product = product.mul(&ladder_to_spin(ladder));
        }
        out = out.add(&product.scaled(*coeff));
    }
    out
}

fn ladder_to_spin(op: &LadderOp) -> SpinOperator {
    let chain: Vec<(usize, char)> = (0..op.mode).map(|q| (q, 'Z')).collect();
    let mut x_sites = chain.clone();
    x_sites.push((op.mode, 'X'));
    let mut y_sites = chain;
    y_sites.push((op.mode, 'Y'));
    let x_part = SpinOperator::from_term(
        Complex64::new(0.5, 0.0),
        PauliTerm::new(x_sites).expect("distinct sites by construction"),
    );
    let y_sign = if op.creation { -0.5 } else { 0.5 };
    let y_part = SpinOperator::from_term(
        Complex64::new(0.0, y_sign),
        PauliTerm::new(y_sites).expect("distinct sites by construction"),
    );
    x_part.add(&y_part)
}

impl Observable for FermionOperator {
    fn kind(&self) -> &str {
        "fermion"
    }

    fn to_text(&self) -> String {
        FermionOperator::to_text(self)
    }

    fn n_terms(&self) -> usize {
        self.terms.len()
    }

    fn identity_offset(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(_, ops)| ops.is_empty())
            .map(|(c, _)| c.re)
            .sum()
    }

    fn max_site(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(_, ops)| ops.iter().map(|o| o.mode))
            .max()
    }

    /// Fermionic operators are measured through their qubit image:
    /// observing maps through the parity-chain transform first.
    fn observe(&self, program: &Composite) -> Result<Vec<ObservedCircuit>, ObservableError> {
        jordan_wigner(self).observe(program)
    }

    fn as_any(&self) -> &dyn core::any::Any {
        self
    }
}

impl core::fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The parity-chain mapping as a registrable observable transform.
pub struct JordanWignerTransform;

impl ObservableTransform for JordanWignerTransform {
    fn name(&self) -> &str {
        "jordan-wigner"
    }

    fn transform(
        &self,
        observable: &dyn Observable,
    ) -> Result<Arc<dyn Observable + Send + Sync>, ObservableError> {
        if let Some(fermion) = observable.as_any().downcast_ref::<FermionOperator>() {
            return Ok(Arc::new(jordan_wigner(fermion)));
        }
        if let Some(spin) = observable.as_any().downcast_ref::<SpinOperator>() {
            // Already in the qubit representation.
            return Ok(Arc::new(spin.clone()));
        }
        Err(ObservableError::WrongKind {
            transform: "jordan-wigner".to_string(),
            kind: observable.kind().to_string(),
        })
    }
}
