//! Instruction parameters and the restricted symbolic expression grammar.
//!
//! A parameter is an integer, a real, a text tag, or a symbolic arithmetic
//! expression over named variables (`theta/2`, `-2.5*t`, `x[3]+1`). The
//! predefined constant `pi` is folded at parse time, so an expression with
//! no variables always collapses to a plain real parameter.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::IrError;

/// One instruction parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum InstrParam {
    Int(i64),
    Real(f64),
    Sym(SymExpr),
    Text(String),
}

impl InstrParam {
    /// Symbolic parameter from expression source text; constant
    /// expressions fold to [`InstrParam::Real`].
    pub fn parse(text: &str) -> Result<InstrParam, IrError> {
        let expr = Expr::parse(text)?;
        Ok(match expr.constant_value() {
            Some(v) => InstrParam::Real(v),
            None => InstrParam::Sym(SymExpr::from_expr(expr)),
        })
    }

    /// Concrete numeric value, widening integers; `None` for symbols and
    /// text.
    pub fn as_real(&self) -> Option<f64> {
        match self {
            InstrParam::Int(v) => Some(*v as f64),
            InstrParam::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, InstrParam::Sym(_))
    }

    /// Substitute variable bindings, producing a concrete parameter.
    /// Non-symbolic parameters pass through unchanged.
    pub fn bind(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<InstrParam, IrError> {
        match self {
            InstrParam::Sym(s) => Ok(InstrParam::Real(s.evaluate(lookup)?)),
            other => Ok(other.clone()),
        }
    }

    /// Rewrite variable names inside a symbolic parameter (used when a
    /// translation target cannot spell the original names).
    pub fn rename_variables(&self, rename: &dyn Fn(&str) -> String) -> InstrParam {
        match self {
            InstrParam::Sym(s) => InstrParam::Sym(SymExpr::from_expr(s.expr.rename(rename))),
            other => other.clone(),
        }
    }

    /// Substitute the variables `lookup` knows, leaving the rest
    /// symbolic; a fully constant result folds to [`InstrParam::Real`].
    pub fn substitute(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> InstrParam {
        match self {
            InstrParam::Sym(s) => {
                let expr = s.expr.substitute(lookup);
                match expr.constant_value() {
                    Some(v) => InstrParam::Real(v),
                    None => InstrParam::Sym(SymExpr::from_expr(expr)),
                }
            }
            other => other.clone(),
        }
    }
}

impl core::fmt::Display for InstrParam {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InstrParam::Int(v) => write!(f, "{v}"),
            InstrParam::Real(v) => write!(f, "{v}"),
            InstrParam::Sym(s) => write!(f, "{s}"),
            InstrParam::Text(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for InstrParam {
    fn from(v: i64) -> Self {
        InstrParam::Int(v)
    }
}

impl From<f64> for InstrParam {
    fn from(v: f64) -> Self {
        InstrParam::Real(v)
    }
}

/// A parsed symbolic expression plus its canonical source rendering.
///
/// Equality and serialization both use the canonical text, so expressions
/// that parse identically compare equal regardless of input spacing.
#[derive(Clone, Debug)]
pub struct SymExpr {
    text: String,
    expr: Expr,
}

impl SymExpr {
    /// Parse expression text. Unlike [`InstrParam::parse`] the result
    /// stays symbolic even when constant.
    pub fn parse(text: &str) -> Result<SymExpr, IrError> {
        Ok(SymExpr::from_expr(Expr::parse(text)?))
    }

    /// Symbol referencing a single variable.
    pub fn variable(name: &str) -> SymExpr {
        SymExpr::from_expr(Expr::Var(name.to_string()))
    }

    /// The product `c * v`, the workhorse of generated rotation angles.
    pub fn scaled_variable(coefficient: f64, name: &str) -> SymExpr {
        SymExpr::from_expr(Expr::Mul(
            Box::new(Expr::Const(coefficient)),
            Box::new(Expr::Var(name.to_string())),
        ))
    }

    fn from_expr(expr: Expr) -> SymExpr {
        SymExpr { text: expr.render(0), expr }
    }

    /// Canonical source text (`theta/2`, `-4.2866*t`, …).
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Variable names in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.expr.collect_vars(&mut vars);
        vars
    }

    pub fn evaluate(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<f64, IrError> {
        self.expr.evaluate(lookup)
    }
}

impl PartialEq for SymExpr {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl core::fmt::Display for SymExpr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Const(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn parse(text: &str) -> Result<Expr, IrError> {
        let tokens = tokenize(text)?;
        let mut p = Parser { text, tokens, pos: 0 };
        let expr = p.expression()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("trailing input"));
        }
        Ok(expr)
    }

    fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Const(v) => Some(*v),
            Expr::Var(_) => None,
            Expr::Neg(a) => a.constant_value().map(|v| -v),
            Expr::Add(a, b) => Some(a.constant_value()? + b.constant_value()?),
            Expr::Sub(a, b) => Some(a.constant_value()? - b.constant_value()?),
            Expr::Mul(a, b) => Some(a.constant_value()? * b.constant_value()?),
            Expr::Div(a, b) => Some(a.constant_value()? / b.constant_value()?),
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            Expr::Neg(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn evaluate(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<f64, IrError> {
        Ok(match self {
            Expr::Const(v) => *v,
            Expr::Var(name) => {
                lookup(name).ok_or_else(|| IrError::UnboundSymbol(name.clone()))?
            }
            Expr::Neg(a) => -a.evaluate(lookup)?,
            Expr::Add(a, b) => a.evaluate(lookup)? + b.evaluate(lookup)?,
            Expr::Sub(a, b) => a.evaluate(lookup)? - b.evaluate(lookup)?,
            Expr::Mul(a, b) => a.evaluate(lookup)? * b.evaluate(lookup)?,
            Expr::Div(a, b) => a.evaluate(lookup)? / b.evaluate(lookup)?,
        })
    }

    fn substitute(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Var(name) => match lookup(name) {
                Some(v) => Expr::Const(v),
                None => Expr::Var(name.clone()),
            },
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(lookup))),
            Expr::Add(a, b) => {
                Expr::Add(Box::new(a.substitute(lookup)), Box::new(b.substitute(lookup)))
            }
            Expr::Sub(a, b) => {
                Expr::Sub(Box::new(a.substitute(lookup)), Box::new(b.substitute(lookup)))
            }
            Expr::Mul(a, b) => {
                Expr::Mul(Box::new(a.substitute(lookup)), Box::new(b.substitute(lookup)))
            }
            Expr::Div(a, b) => {
                Expr::Div(Box::new(a.substitute(lookup)), Box::new(b.substitute(lookup)))
            }
        }
    }

    fn rename(&self, rename: &dyn Fn(&str) -> String) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Var(name) => Expr::Var(rename(name)),
            Expr::Neg(a) => Expr::Neg(Box::new(a.rename(rename))),
            Expr::Add(a, b) => Expr::Add(Box::new(a.rename(rename)), Box::new(b.rename(rename))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.rename(rename)), Box::new(b.rename(rename))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.rename(rename)), Box::new(b.rename(rename))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.rename(rename)), Box::new(b.rename(rename))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Const(_) | Expr::Var(_) => 4,
        }
    }

    /// Canonical compact rendering; `min_prec` is the binding strength of
    /// the surrounding context.
    fn render(&self, min_prec: u8) -> String {
        let prec = self.precedence();
        let body = match self {
            Expr::Const(v) => format!("{v}"),
            Expr::Var(name) => name.clone(),
            Expr::Neg(a) => format!("-{}", a.render(3)),
            Expr::Add(a, b) => format!("{}+{}", a.render(1), b.render(2)),
            Expr::Sub(a, b) => format!("{}-{}", a.render(1), b.render(2)),
            Expr::Mul(a, b) => format!("{}*{}", a.render(2), b.render(3)),
            Expr::Div(a, b) => format!("{}/{}", a.render(2), b.render(3)),
        };
        if prec < min_prec {
            format!("({body})")
        } else {
            body
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, IrError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let bad = |msg: &str| IrError::BadExpression { text: text.to_string(), msg: msg.to_string() };
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E') {
                    // Accept an exponent sign only directly after e/E.
                    i += 1;
                    if i < bytes.len()
                        && matches!(bytes[i] as char, '+' | '-')
                        && matches!(bytes[i - 1] as char, 'e' | 'E')
                    {
                        i += 1;
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit.parse().map_err(|_| bad("malformed number"))?;
                tokens.push(Token::Number(value));
            }
            _ if ch.is_ascii_alphabetic() || ch == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let mut name = text[start..i].to_string();
                // An indexed reference like `x[3]` is one variable name.
                if i < bytes.len() && bytes[i] == b'[' {
                    let close = text[i..]
                        .find(']')
                        .ok_or_else(|| bad("unterminated index"))?;
                    let idx = &text[i + 1..i + close];
                    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad("index must be a non-negative integer"));
                    }
                    name.push('[');
                    name.push_str(idx);
                    name.push(']');
                    i += close + 1;
                }
                if name == "pi" {
                    tokens.push(Token::Number(core::f64::consts::PI));
                } else {
                    tokens.push(Token::Ident(name));
                }
            }
            _ => return Err(bad("unexpected character")),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> IrError {
        IrError::BadExpression { text: self.text.to_string(), msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expression(&mut self) -> Result<Expr, IrError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, IrError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, IrError> {
        match self.next() {
            Some(Token::Minus) => Ok(Expr::Neg(Box::new(self.factor()?))),
            Some(Token::Number(v)) => Ok(Expr::Const(v)),
            Some(Token::Ident(name)) => Ok(Expr::Var(name)),
            Some(Token::Open) => {
                let inner = self.expression()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(self.error("missing closing parenthesis")),
                }
            }
            _ => Err(self.error("expected a value")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn sym(text: &str) -> SymExpr {
        match InstrParam::parse(text).unwrap() {
            InstrParam::Sym(s) => s,
            other => panic!("{text} should stay symbolic, got {other:?}"),
        }
    }

    fn eval1(text: &str, var: &str, value: f64) -> f64 {
        sym(text)
            .evaluate(&|name| (name == var).then_some(value))
            .unwrap()
    }

    #[test]
    fn restricted_forms_evaluate_correctly() {
        // Frozen against hand evaluation of each grammar form.
        assert_eq!(eval1("theta/2", "theta", PI), PI / 2.0);
        assert_eq!(eval1("2*t", "t", 0.25), 0.5);
        assert_eq!(eval1("-t", "t", 3.0), -3.0);
        assert_eq!(eval1("t+1", "t", 2.0), 3.0);
        assert_eq!(eval1("t-0.5", "t", 2.0), 1.5);
        assert_eq!(eval1("-4.2866*t", "t", 2.0), -8.5732);
    }

    #[test]
    fn pi_and_constant_folding() {
        assert_eq!(InstrParam::parse("pi").unwrap(), InstrParam::Real(PI));
        assert_eq!(InstrParam::parse("-pi/2").unwrap(), InstrParam::Real(-PI / 2.0));
        assert_eq!(InstrParam::parse("3").unwrap(), InstrParam::Real(3.0));
        assert_eq!(InstrParam::parse(".21829").unwrap(), InstrParam::Real(0.21829));
    }

    #[test]
    fn indexed_names_are_single_variables() {
        let s = sym("x[3]/2");
        assert_eq!(s.variables(), ["x[3]"]);
        assert_eq!(s.text(), "x[3]/2");
        assert_eq!(
            s.evaluate(&|n| (n == "x[3]").then_some(1.0)).unwrap(),
            0.5
        );
    }

    #[test]
    fn canonical_text_is_stable_under_reparse() {
        for text in ["theta/2", "-2*t", "t-0.5", "a+b", "-(t+1)", "2*(t+1)"] {
            let s = SymExpr::parse(text).unwrap();
            let again = SymExpr::parse(s.text()).unwrap();
            assert_eq!(s, again, "round-trip of `{text}` via `{}`", s.text());
        }
    }

    #[test]
    fn spacing_does_not_change_identity() {
        assert_eq!(sym("theta / 2"), sym("theta/2"));
    }

    #[test]
    fn unbound_symbol_errors() {
        let err = sym("theta/2").evaluate(&|_| None).unwrap_err();
        assert_eq!(err, IrError::UnboundSymbol("theta".into()));
    }

    #[test]
    fn malformed_expressions_error() {
        assert!(InstrParam::parse("2*").is_err());
        assert!(InstrParam::parse("(t").is_err());
        assert!(InstrParam::parse("t$").is_err());
        assert!(InstrParam::parse("x[").is_err());
        assert!(InstrParam::parse("x[a]").is_err());
    }

    #[test]
    fn partial_substitution_keeps_free_variables() {
        let p = InstrParam::parse("a+2*b").unwrap();
        let half = p.substitute(&|n| (n == "b").then_some(3.0));
        match &half {
            InstrParam::Sym(s) => assert_eq!(s.variables(), ["a"]),
            other => panic!("expected symbolic, got {other:?}"),
        }
        assert_eq!(
            half.substitute(&|n| (n == "a").then_some(1.0)),
            InstrParam::Real(7.0)
        );
        // Full substitution folds immediately.
        assert_eq!(
            p.substitute(&|n| Some(if n == "a" { 1.0 } else { 3.0 })),
            InstrParam::Real(7.0)
        );
    }

    #[test]
    fn scaled_variable_renders_compactly() {
        let s = SymExpr::scaled_variable(-4.2866, "t");
        assert_eq!(s.text(), "-4.2866*t");
        let neg = SymExpr::scaled_variable(2.0, "t");
        assert_eq!(neg.text(), "2*t");
    }
}
