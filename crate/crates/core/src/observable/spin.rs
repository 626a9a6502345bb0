//! Weighted sums of Pauli strings with parsing, algebra, and
//! measurement-circuit generation.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Observable, ObservableError, ObservedCircuit};
use crate::ir::{Composite, InstrParam, Instruction};

/// Coefficients below this magnitude are dropped during simplification.
const EPS: f64 = 1e-12;

/// A product of single-qubit Pauli operators, at most one per site.
///
/// The empty product is the identity. Ordering and equality follow the
/// canonical text form (`"X0 Z2"` — ascending sites, space separated).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct PauliTerm {
    ops: BTreeMap<usize, char>,
}

impl PauliTerm {
    pub fn identity() -> Self {
        PauliTerm::default()
    }

    pub fn new(ops: impl IntoIterator<Item = (usize, char)>) -> Result<Self, ObservableError> {
        let mut map = BTreeMap::new();
        for (site, op) in ops {
            if !matches!(op, 'X' | 'Y' | 'Z') {
                return Err(ObservableError::Parse {
                    at: 0,
                    message: alloc::format!("`{op}` is not a Pauli operator"),
                });
            }
            if map.insert(site, op).is_some() {
                return Err(ObservableError::Parse {
                    at: 0,
                    message: alloc::format!("site {site} listed twice in one term"),
                });
            }
        }
        Ok(PauliTerm { ops: map })
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn sites(&self) -> Vec<usize> {
        self.ops.keys().copied().collect()
    }

    pub fn op_at(&self, site: usize) -> Option<char> {
        self.ops.get(&site).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, char)> + '_ {
        self.ops.iter().map(|(&s, &o)| (s, o))
    }

    /// Canonical text: `"X0 Y3"`, or `"I"` for the identity.
    pub fn text(&self) -> String {
        if self.ops.is_empty() {
            return "I".to_string();
        }
        let parts: Vec<String> =
            self.ops.iter().map(|(s, o)| alloc::format!("{o}{s}")).collect();
        parts.join(" ")
    }

    /// Multiply two Pauli products, returning the accumulated phase
    /// and the resulting product.
    pub fn mul(&self, other: &PauliTerm) -> (Complex64, PauliTerm) {
        let mut phase = Complex64::new(1.0, 0.0);
        let mut ops = self.ops.clone();
        for (&site, &b) in &other.ops {
            match ops.remove(&site) {
                None => {
                    ops.insert(site, b);
                }
                Some(a) => {
                    let (p, prod) = mul_pauli(a, b);
                    phase *= p;
                    if let Some(op) = prod {
                        ops.insert(site, op);
                    }
                }
            }
        }
        (phase, PauliTerm { ops })
    }
}

/// Single-site Pauli product table: returns the phase and the
/// resulting operator (`None` = identity).
fn mul_pauli(a: char, b: char) -> (Complex64, Option<char>) {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    match (a, b) {
        _ if a == b => (one, None),
        ('X', 'Y') => (i, Some('Z')),
        ('Y', 'X') => (-i, Some('Z')),
        ('Y', 'Z') => (i, Some('X')),
        ('Z', 'Y') => (-i, Some('X')),
        ('Z', 'X') => (i, Some('Y')),
        ('X', 'Z') => (-i, Some('Y')),
        _ => unreachable!("operators validated at construction"),
    }
}

/// A weighted sum of Pauli products — the qubit-side observable
/// representation.
///
/// Supports the usual ring operations, text round-tripping, and
/// generation of measured circuits, one per non-identity term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpinOperator {
    terms: BTreeMap<PauliTerm, Complex64>,
}

impl SpinOperator {
    pub fn zero() -> Self {
        SpinOperator::default()
    }

    /// The operator `c·I`.
    pub fn constant(c: f64) -> Self {
        SpinOperator::from_term(Complex64::new(c, 0.0), PauliTerm::identity())
    }

    pub fn from_term(coefficient: Complex64, term: PauliTerm) -> Self {
        let mut op = SpinOperator::zero();
        op.accumulate(coefficient, term);
        op.simplify();
        op
    }

    /// Convenience constructor from site/operator pairs.
    pub fn term(
        coefficient: f64,
        ops: impl IntoIterator<Item = (usize, char)>,
    ) -> Result<Self, ObservableError> {
        Ok(SpinOperator::from_term(Complex64::new(coefficient, 0.0), PauliTerm::new(ops)?))
    }

    fn accumulate(&mut self, coefficient: Complex64, term: PauliTerm) {
        *self.terms.entry(term).or_insert(Complex64::new(0.0, 0.0)) += coefficient;
    }

    fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() > EPS);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliTerm, Complex64)> + '_ {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn coefficient(&self, term: &PauliTerm) -> Complex64 {
        self.terms.get(term).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is real, i.e. the operator is
    /// Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= EPS)
    }

    pub fn add(&self, other: &SpinOperator) -> SpinOperator {
        let mut out = self.clone();
        for (term, c) in &other.terms {
            out.accumulate(*c, term.clone());
        }
        out.simplify();
        out
    }

    pub fn sub(&self, other: &SpinOperator) -> SpinOperator {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> SpinOperator {
        let mut out = SpinOperator::zero();
        for (term, c) in &self.terms {
            out.accumulate(c * factor, term.clone());
        }
        out.simplify();
        out
    }

    /// Operator product, with Pauli multiplication phases.
    pub fn mul(&self, other: &SpinOperator) -> SpinOperator {
        let mut out = SpinOperator::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let (phase, prod) = ta.mul(tb);
                out.accumulate(ca * cb * phase, prod);
            }
        }
        out.simplify();
        out
    }

    /// Parse text like `"15.53 - 2.14 X0 X1 + (0,1) Y2"`.
    ///
    /// Terms are separated by top-level `+`/`-`; each term is an
    /// optional coefficient — a decimal number or a complex `(re,im)`
    /// pair — followed by zero or more Pauli factors `X<k>`/`Y<k>`/
    /// `Z<k>` (or a bare `I`). Omitted coefficients default to 1.
    pub fn parse(text: &str) -> Result<SpinOperator, ObservableError> {
        let mut op = SpinOperator::zero();
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut expect_term = true; // guards against "+ +" and trailing separators
        let mut sign = 1.0;
        let mut any = false;
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
            op.accumulate(coeff * sign, ops);
            any = true;
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
        if !any || expect_term {
            return Err(ObservableError::Parse {
                at: pos,
                message: "expected a term".to_string(),
            });
        }
        op.simplify();
        Ok(op)
    }

    /// Canonical text; [`SpinOperator::parse`] accepts it back.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (term, c)) in self.terms.iter().enumerate() {
            let real = c.im.abs() <= EPS;
            if idx == 0 {
                if real && c.re < 0.0 {
                    out.push_str("- ");
                }
            } else if real && c.re < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let magnitude = if real { c.re.abs() } else { 0.0 };
            match (real, term.is_identity()) {
                (true, true) => out.push_str(&alloc::format!("{magnitude}")),
                (true, false) => {
                    if (magnitude - 1.0).abs() > EPS {
                        out.push_str(&alloc::format!("{magnitude} "));
                    }
                    out.push_str(&term.text());
                }
                (false, true) => out.push_str(&alloc::format!("({},{})", c.re, c.im)),
                (false, false) => {
                    out.push_str(&alloc::format!("({},{}) ", c.re, c.im));
                    out.push_str(&term.text());
                }
            }
        }
        out
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_number(bytes: &[u8], mut pos: usize) -> Option<(f64, usize)> {
    let start = pos;
    if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
        pos += 1;
    }
    let mut digits = false;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
        digits = true;
    }
    if pos < bytes.len() && bytes[pos] == b'.' {
        pos += 1;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
            digits = true;
        }
    }
    if !digits {
        return None;
    }
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        let mut epos = pos + 1;
        if epos < bytes.len() && (bytes[epos] == b'+' || bytes[epos] == b'-') {
            epos += 1;
        }
        if epos < bytes.len() && bytes[epos].is_ascii_digit() {
            while epos < bytes.len() && bytes[epos].is_ascii_digit() {
                epos += 1;
            }
            pos = epos;
        }
    }
    let s = core::str::from_utf8(&bytes[start..pos]).ok()?;
    s.parse::<f64>().ok().map(|v| (v, pos))
}

fn parse_index(bytes: &[u8], mut pos: usize) -> Option<(usize, usize)> {
    let start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == start {
        return None;
    }
    let s = core::str::from_utf8(&bytes[start..pos]).ok()?;
    s.parse::<usize>().ok().map(|v| (v, pos))
}

/// Parse one term (coefficient and Pauli factors) starting at `pos`.
fn parse_term(
    bytes: &[u8],
    mut pos: usize,
) -> Result<(Complex64, PauliTerm, usize), ObservableError> {
    let mut coeff = Complex64::new(1.0, 0.0);
    skip_ws(bytes, &mut pos);
    if pos < bytes.len() && bytes[pos] == b'(' {
        // Complex coefficient `(re,im)`.
        let open = pos;
        pos += 1;
        skip_ws(bytes, &mut pos);
        let (re, next) = parse_number(bytes, pos).ok_or(ObservableError::Parse {
            at: pos,
            message: "expected real part".to_string(),
        })?;
        pos = next;
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() || bytes[pos] != b',' {
            return Err(ObservableError::Parse {
                at: open,
                message: "expected `,` inside complex coefficient".to_string(),
            });
        }
        pos += 1;
        skip_ws(bytes, &mut pos);
        let (im, next) = parse_number(bytes, pos).ok_or(ObservableError::Parse {
            at: pos,
            message: "expected imaginary part".to_string(),
        })?;
        pos = next;
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() || bytes[pos] != b')' {
            return Err(ObservableError::Parse {
                at: open,
                message: "unclosed complex coefficient".to_string(),
            });
        }
        pos += 1;
        coeff = Complex64::new(re, im);
    } else if let Some((v, next)) = parse_number(bytes, pos) {
        coeff = Complex64::new(v, 0.0);
        pos = next;
    }

    let mut ops: Vec<(usize, char)> = Vec::new();
    loop {
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() {
            break;
        }
        match bytes[pos] {
            b'X' | b'Y' | b'Z' => {
                let op = bytes[pos] as char;
                let (site, next) = parse_index(bytes, pos + 1).ok_or(ObservableError::Parse {
                    at: pos + 1,
                    message: alloc::format!("`{op}` needs a qubit index"),
                })?;
                ops.push((site, op));
                pos = next;
            }
            b'I' => {
                // Bare identity factor; an index is allowed and ignored.
                pos += 1;
                if let Some((_, next)) = parse_index(bytes, pos) {
                    pos = next;
                }
            }
            _ => break,
        }
    }
    let term = PauliTerm::new(ops).map_err(|e| match e {
        ObservableError::Parse { message, .. } => ObservableError::Parse { at: pos, message },
        other => other,
    })?;
    Ok((coeff, term, pos))
}

impl Observable for SpinOperator {
    fn kind(&self) -> &str {
        "pauli"
    }

    fn to_text(&self) -> String {
        SpinOperator::to_text(self)
    }

    fn n_terms(&self) -> usize {
        self.terms.len()
    }

    fn identity_offset(&self) -> f64 {
        self.coefficient(&PauliTerm::identity()).re
    }

    fn max_site(&self) -> Option<usize> {
        self.terms.keys().filter_map(|t| t.sites().last().copied()).max()
    }

    fn observe(&self, program: &Composite) -> Result<Vec<ObservedCircuit>, ObservableError> {
        let mut out = Vec::new();
        for (term, coeff) in self.terms.iter() {
            if term.is_identity() {
                continue;
            }
            let mut circuit = program.clone();
            let compact: String = term.text().split_whitespace().collect();
            circuit.set_name(&compact);
            for (site, op) in term.iter() {
                match op {
                    // Measuring X: rotate the X eigenbasis onto Z.
                    'X' => circuit.add_instruction(
                        Instruction::gate("H", [site]).expect("catalog gate"),
                    ),
                    // Measuring Y: Rx(π/2) maps the Y eigenbasis onto Z.
                    'Y' => circuit.add_instruction(
                        Instruction::new(
                            "Rx",
                            alloc::vec![site],
                            alloc::vec![InstrParam::Real(core::f64::consts::FRAC_PI_2)],
                        )
                        .expect("catalog gate"),
                    ),
                    _ => {}
                }
            }
            for site in term.sites() {
                circuit.add_instruction(Instruction::measure(site));
            }
            out.push(ObservedCircuit {
                composite: circuit,
                term: term.text(),
                coefficient: *coeff,
                sites: term.sites(),
            });
        }
        Ok(out)
    }

    fn as_any(&self) -> &dyn core::any::Any {
        self
    }
}

impl core::fmt::Display for SpinOperator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeff_of(op: &SpinOperator, spec: &[(usize, char)]) -> Complex64 {
        op.coefficient(&PauliTerm::new(spec.iter().copied()).unwrap())
    }

    #[test]
    fn parses_weighted_sum_with_implicit_coefficients() {
        let op = SpinOperator::parse("5.907 - 2.1433 X0 X1 - 2.1433 Y0 Y1 + .21829 Z0 + Z1")
            .unwrap();
        assert_eq!(op.n_terms(), 5);
        assert_eq!(op.identity_offset(), 5.907);
        assert_eq!(coeff_of(&op, &[(0, 'X'), (1, 'X')]).re, -2.1433);
        assert_eq!(coeff_of(&op, &[(0, 'Y'), (1, 'Y')]).re, -2.1433);
        assert_eq!(coeff_of(&op, &[(0, 'Z')]).re, 0.21829);
        assert_eq!(coeff_of(&op, &[(1, 'Z')]).re, 1.0);
        assert_eq!(op.max_site(), Some(1));
    }

    #[test]
    fn accepts_compact_products_and_complex_coefficients() {
        let op = SpinOperator::parse("(0,0.5) X0Y1Z2 + 1 I").unwrap();
        let c = coeff_of(&op, &[(0, 'X'), (1, 'Y'), (2, 'Z')]);
        assert_eq!((c.re, c.im), (0.0, 0.5));
        assert_eq!(op.identity_offset(), 1.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(SpinOperator::parse("").is_err());
        assert!(SpinOperator::parse("X").is_err());
        assert!(SpinOperator::parse("2.0 X0 +").is_err());
        assert!(SpinOperator::parse("X0 X0").is_err(), "duplicate site");
        assert!(SpinOperator::parse("Q3").is_err());
    }

    #[test]
    fn text_round_trip_preserves_operator() {
        let op = SpinOperator::parse("3.5 - 0.25 X0 Z2 + (0,1) Y1 - Z0").unwrap();
        let again = SpinOperator::parse(&op.to_text()).unwrap();
        assert_eq!(op, again);
    }

    #[test]
    fn pauli_products_carry_phases() {
        // (X0)(Y0) = i Z0.
        let x = SpinOperator::term(1.0, [(0, 'X')]).unwrap();
        let y = SpinOperator::term(1.0, [(0, 'Y')]).unwrap();
        let prod = x.mul(&y);
        let c = coeff_of(&prod, &[(0, 'Z')]);
        assert!((c.im - 1.0).abs() < 1e-12 && c.re.abs() < 1e-12);
        // (Y0)(X0) = -i Z0.
        let c2 = coeff_of(&y.mul(&x), &[(0, 'Z')]);
        assert!((c2.im + 1.0).abs() < 1e-12);
        // X0 X0 = I.
        assert_eq!(x.mul(&x), SpinOperator::constant(1.0));
        // Different sites commute without phase.
        let x0 = SpinOperator::term(1.0, [(0, 'X')]).unwrap();
        let z1 = SpinOperator::term(1.0, [(1, 'Z')]).unwrap();
        let c3 = coeff_of(&x0.mul(&z1), &[(0, 'X'), (1, 'Z')]);
        assert_eq!(c3.re, 1.0);
    }

    #[test]
    fn addition_cancels_and_simplifies() {
        let a = SpinOperator::parse("2 X0 + Z1").unwrap();
        let b = SpinOperator::parse("-2 X0 + Z1").unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.n_terms(), 1);
        assert_eq!(coeff_of(&sum, &[(1, 'Z')]).re, 2.0);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn observe_appends_basis_changes_and_measures() {
        let op = SpinOperator::parse("1.5 X0 Y1 + 0.5 Z2 + 7").unwrap();
        let mut prep = Composite::new("prep");
        prep.add_instruction(Instruction::gate("H", [0]).unwrap());
        let circuits = op.observe(&prep).unwrap();
        // Identity term contributes no circuit.
        assert_eq!(circuits.len(), 2);

        let xy = circuits.iter().find(|c| c.term == "X0 Y1").unwrap();
        assert_eq!(xy.composite.name(), "X0Y1");
        assert_eq!(xy.weight(), 1.5);
        assert_eq!(xy.sites, alloc::vec![0, 1]);
        let names: Vec<&str> =
            xy.composite.leaves().iter().map(|i| i.name()).collect();
        assert_eq!(names, alloc::vec!["H", "H", "Rx", "Measure", "Measure"]);

        let z2 = circuits.iter().find(|c| c.term == "Z2").unwrap();
        let names: Vec<&str> =
            z2.composite.leaves().iter().map(|i| i.name()).collect();
        assert_eq!(names, alloc::vec!["H", "Measure"]);
        // Z needs no rotation; the measure targets site 2.
        assert_eq!(z2.composite.leaves()[1].bits(), &[2]);
    }

    #[test]
    fn observed_y_circuit_measures_y_expectation() {
        use crate::backend::{qalloc, Accelerator, SimAccelerator};
        // |+i> = S H |0> has <Y> = +1.
        let op = SpinOperator::term(1.0, [(0, 'Y')]).unwrap();
        let mut prep = Composite::new("prep");
        prep.add_instruction(Instruction::gate("H", [0]).unwrap());
        prep.add_instruction(Instruction::gate("S", [0]).unwrap());
        let circuits = op.observe(&prep).unwrap();
        let acc = SimAccelerator::with_shots(0);
        let mut buf = qalloc(1).unwrap();
        acc.execute(&mut buf, &circuits[0].composite).unwrap();
        assert!((buf.expectation_value_z().unwrap() - 1.0).abs() < 1e-9);
    }
}
