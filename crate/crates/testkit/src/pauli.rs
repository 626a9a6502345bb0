//! Pauli matrices, Kronecker-assembled Pauli words, and a minimal
//! independent parser for weighted Pauli-sum text.

use num_complex::Complex64;

use crate::mat::CMat;

/// The 2x2 Pauli matrix for `'I'`, `'X'`, `'Y'` or `'Z'`.
pub fn pauli_matrix(op: char) -> CMat {
    match op {
        'I' => CMat::identity(2),
        'X' => CMat::from_rows(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        'Y' => CMat::from_rows(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
        'Z' => CMat::from_rows(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]),
        other => panic!("not a Pauli operator: {other}"),
    }
}

/// Dense matrix of a Pauli word on `n_qubits` qubits, e.g.
/// `[(0, 'X'), (2, 'Z')]` for X on qubit 0 and Z on qubit 2. Sites not
/// listed carry the identity; an empty word is the identity matrix.
pub fn pauli_word_matrix(n_qubits: usize, word: &[(usize, char)]) -> CMat {
    let mut factors = vec!['I'; n_qubits];
    for &(site, op) in word {
        assert!(site < n_qubits, "site {site} outside {n_qubits} qubits");
        assert_eq!(factors[site], 'I', "duplicate site {site} in Pauli word");
        factors[site] = op;
    }
    let mut m = CMat::identity(1);
    for op in factors {
        m = m.kron(&pauli_matrix(op));
    }
    m
}

/// Dense Hermitian matrix of a weighted Pauli sum written as text, e.g.
/// `"5.9 + 2.2 X0X1 - .4 Z0 + 0.1 Y0 Y1"`. Factors may be packed
/// (`X0Y1`), spaced (`X0 Y1`), or joined with `*`. A term with no
/// Pauli factors contributes a multiple of the identity.
pub fn pauli_sum_matrix(n_qubits: usize, text: &str) -> CMat {
    let dim = 1usize << n_qubits;
    let mut total = CMat::zeros(dim);
    for (sign, term) in split_terms(text) {
        let (coeff, word) = parse_term(term);
        let matrix = pauli_word_matrix(n_qubits, &word);
        total = total.add_scaled(Complex64::new(sign * coeff, 0.0), &matrix);
    }
    total
}

/// Split on top-level `+` / `-`, yielding `(sign, term_text)` pairs.
/// A `-` belonging to a number's exponent (`1e-3`) stays in the term.
fn split_terms(text: &str) -> Vec<(f64, &str)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut sign = 1.0;
    let mut start = 0usize;
    for i in 0..=bytes.len() {
        let splits = i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') && {
            let in_exponent = i >= 2
                && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E')
                && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.');
            !in_exponent
        };
        if i == bytes.len() || splits {
            let term = text[start..i].trim();
            if !term.is_empty() {
                out.push((sign, term));
            }
            if i < bytes.len() {
                sign = if bytes[i] == b'-' { -1.0 } else { 1.0 };
                start = i + 1;
            }
        }
    }
    out
}

/// Parse one term into `(coefficient, word)`.
fn parse_term(term: &str) -> (f64, Vec<(usize, char)>) {
    let mut coeff = 1.0;
    let mut word = Vec::new();
    for token in term.split(|c: char| c.is_whitespace() || c == '*') {
        if token.is_empty() {
            continue;
        }
        let mut chars = token.char_indices().peekable();
        while let Some(&(pos, c)) = chars.peek() {
            if matches!(c, 'I' | 'X' | 'Y' | 'Z') {
                chars.next();
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                assert!(!digits.is_empty(), "Pauli factor without site in {term:?}");
                word.push((digits.parse().unwrap(), c));
            } else {
                // The rest of the token is a numeric coefficient.
                let rest = &token[pos..];
                coeff *= rest
                    .parse::<f64>()
                    .unwrap_or_else(|_| panic!("bad coefficient {rest:?} in {term:?}"));
                break;
            }
        }
    }
    (coeff, word)
}
