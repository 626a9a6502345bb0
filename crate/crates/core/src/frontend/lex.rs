//! Shared token scanner for the three source dialects.
//!
//! Every token carries its 1-based line and column so parse errors can
//! point at the offending source position. Comments run from `//` or
//! `#` to end of line in every dialect.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::CompileError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TokKind {
    Ident,
    Number,
    Str,
    Punct(char),
}

#[derive(Clone, Debug)]
pub(crate) struct Tok {
    pub kind: TokKind,
    pub text: String,
    pub line: usize,
    pub col: usize,
}

impl Tok {
    pub fn is_punct(&self, ch: char) -> bool {
        self.kind == TokKind::Punct(ch)
    }

    pub fn is_ident(&self, word: &str) -> bool {
        self.kind == TokKind::Ident && self.text == word
    }
}

const PUNCT: &str = "()[]{},;=<>+-*/.";

/// Tokenize `text`, numbering lines from `base_line`.
pub(crate) fn lex(text: &str, base_line: usize) -> Result<Vec<Tok>, CompileError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = base_line;
    let mut col = 1;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        // Comments to end of line.
        if ch == '#' || (ch == '/' && bytes.get(i + 1) == Some(&b'/')) {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        match ch {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            ' ' | '\t' | '\r' => {
                col += 1;
                i += 1;
            }
            '"' => {
                let (start_line, start_col) = (line, col);
                i += 1;
                col += 1;
                let start = i;
                while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                    i += 1;
                    col += 1;
                }
                if i >= bytes.len() || bytes[i] != b'"' {
                    return Err(CompileError::Syntax {
                        line: start_line,
                        column: start_col,
                        message: "unterminated string literal".to_string(),
                    });
                }
                out.push(Tok {
                    kind: TokKind::Str,
                    text: text[start..i].to_string(),
                    line: start_line,
                    col: start_col,
                });
                i += 1;
                col += 1;
            }
            '0'..='9' => {
                let (start_line, start_col) = (line, col);
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                    col += 1;
                }
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    i += 1;
                    col += 1;
                    if i < bytes.len() && matches!(bytes[i] as char, '+' | '-') {
                        i += 1;
                        col += 1;
                    }
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                        col += 1;
                    }
                }
                out.push(Tok {
                    kind: TokKind::Number,
                    text: text[start..i].to_string(),
                    line: start_line,
                    col: start_col,
                });
            }
            _ if ch.is_ascii_alphabetic() || ch == '_' => {
                let (start_line, start_col) = (line, col);
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                    col += 1;
                }
                out.push(Tok {
                    kind: TokKind::Ident,
                    text: text[start..i].to_string(),
                    line: start_line,
                    col: start_col,
                });
            }
            // A leading `.21829`-style number.
            '.' if bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit()) => {
                let (start_line, start_col) = (line, col);
                let start = i;
                i += 1;
                col += 1;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9') {
                    i += 1;
                    col += 1;
                }
                out.push(Tok {
                    kind: TokKind::Number,
                    text: text[start..i].to_string(),
                    line: start_line,
                    col: start_col,
                });
            }
            _ if PUNCT.contains(ch) => {
                out.push(Tok {
                    kind: TokKind::Punct(ch),
                    text: ch.to_string(),
                    line,
                    col,
                });
                i += 1;
                col += 1;
            }
            _ => {
                return Err(CompileError::Syntax {
                    line,
                    column: col,
                    message: alloc::format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

/// Join a token span back into parseable expression text, substituting
/// integer loop variables. A space is inserted only where two
/// word-like tokens would otherwise fuse.
pub(crate) fn render_tokens(tokens: &[Tok], bindings: &dyn Fn(&str) -> Option<i64>) -> String {
    let mut out = String::new();
    let mut prev_wordy = false;
    for tok in tokens {
        let piece = match tok.kind {
            TokKind::Ident => match bindings(&tok.text) {
                Some(v) => alloc::format!("{v}"),
                None => tok.text.clone(),
            },
            _ => tok.text.clone(),
        };
        let wordy = matches!(tok.kind, TokKind::Ident | TokKind::Number);
        if prev_wordy && wordy {
            out.push(' ');
        }
        out.push_str(&piece);
        prev_wordy = wordy;
    }
    out
}
