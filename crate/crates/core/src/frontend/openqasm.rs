//! The register-based circuit description dialect.
//!
//! Statements end with `;`. A version line (`OPENQASM 2.0;`) and
//! `include` lines are accepted and ignored, `qreg`/`creg` declare the
//! quantum and classical registers, lowercase gate statements apply to
//! indexed register operands (`cx q[0],q[1];`), and measurements use
//! the arrow form (`measure q[0] -> c[0];`).
//!
//! A source without any `__qpu__` kernel header is accepted whole as a
//! single kernel named `main`, with its parameters inferred from the
//! free symbols in gate expressions.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ir::{Composite, InstrParam, Instruction, IrContainer};

use super::lex::{self, Tok, TokKind};
use super::{
    compile_source, finalize_variables, rewrite, signature_params, specialize, syntax, CallArg,
    CompileError, Compiler, KernelHeader, KernelResolver,
};

pub struct OpenQasmCompiler;

/// Lowercase statement mnemonics and the catalog gate each becomes.
/// `u1`/`u2` are shorthands filled out to the full three-angle gate.
const GATES: &[(&str, &str)] = &[
    ("id", "I"),
    ("x", "X"),
    ("y", "Y"),
    ("z", "Z"),
    ("h", "H"),
    ("s", "S"),
    ("sdg", "Sdg"),
    ("t", "T"),
    ("tdg", "Tdg"),
    ("rx", "Rx"),
    ("ry", "Ry"),
    ("rz", "Rz"),
    ("cx", "CX"),
    ("cz", "CZ"),
    ("swap", "Swap"),
    ("u1", "U"),
    ("u2", "U"),
    ("u3", "U"),
    ("u", "U"),
];

/// Instruction names a translated program may contain natively. The
/// identity is rewritten to `u3(0,0,0)` instead.
const EMITTABLE: &[&str] = &[
    "X", "Y", "Z", "H", "S", "T", "Rx", "Ry", "Rz", "CX", "CZ", "U", "Measure",
];

impl Compiler for OpenQasmCompiler {
    fn name(&self) -> &str {
        "openqasm"
    }

    fn compile(&self, source: &str) -> Result<IrContainer, CompileError> {
        if source.contains("__qpu__") {
            return compile_source(self, source);
        }
        let header = KernelHeader {
            name: String::from("main"),
            buffer: String::from("q"),
            params: None,
        };
        let main = self.compile_kernel(&header, source, 1, &|_| None)?;
        let mut out = IrContainer::new();
        out.add(main);
        Ok(out)
    }

    fn compile_kernel(
        &self,
        header: &KernelHeader,
        body: &str,
        body_line: usize,
        resolver: &KernelResolver,
    ) -> Result<Composite, CompileError> {
        let toks = lex::lex(body, body_line)?;
        let mut out = Composite::new(&header.name);
        let mut adopted: Vec<String> = Vec::new();
        let mut regs = Regs::default();
        let mut start = 0usize;
        for (i, tok) in toks.iter().enumerate() {
            if tok.is_punct(';') {
                parse_statement(&toks[start..i], header, resolver, &mut regs, &mut adopted, &mut out)?;
                start = i + 1;
            }
        }
        if start < toks.len() {
            let t = &toks[start];
            return Err(syntax(t.line, t.col, "expected `;` to end the statement"));
        }
        finalize_variables(&mut out, header.params.as_deref(), &adopted, body_line)?;
        Ok(out)
    }

    fn translate(&self, composite: &Composite) -> Result<String, CompileError> {
        let instrs = rewrite::flatten_for_dialect(
            composite,
            "openqasm",
            &|n| EMITTABLE.contains(&n),
            true,
        )?;
        let n_qubits = instrs
            .iter()
            .flat_map(|i| i.bits().iter().copied())
            .max()
            .map_or(1, |m| m + 1);
        let cbit_extent = instrs
            .iter()
            .filter(|i| i.name() == "Measure")
            .flat_map(|i| i.cbits())
            .max()
            .map(|m| m + 1);
        let mut src = alloc::format!("__qpu__ void {}(qbit q", composite.name());
        for p in signature_params(composite) {
            src.push_str(", double ");
            src.push_str(&p);
        }
        src.push_str(") {\n");
        src.push_str("OPENQASM 2.0;\n");
        src.push_str("include \"qelib1.inc\";\n");
        src.push_str(&alloc::format!("qreg q[{n_qubits}];\n"));
        if let Some(m) = cbit_extent {
            src.push_str(&alloc::format!("creg c[{m}];\n"));
        }
        for instr in &instrs {
            if instr.name() == "Measure" {
                let q = instr.bits()[0];
                let c = instr.cbits()[0];
                src.push_str(&alloc::format!("measure q[{q}] -> c[{c}];\n"));
                continue;
            }
            let mnemonic = match instr.name() {
                "U" => String::from("u3"),
                other => other.to_lowercase(),
            };
            src.push_str(&mnemonic);
            if !instr.params().is_empty() {
                let texts: Vec<String> =
                    instr.params().iter().map(|p| p.to_string()).collect();
                src.push_str(&alloc::format!("({})", texts.join(", ")));
            }
            let qubits: Vec<String> = instr
                .bits()
                .iter()
                .map(|b| alloc::format!("q[{b}]"))
                .collect();
            src.push_str(&alloc::format!(" {};\n", qubits.join(",")));
        }
        src.push_str("}\n");
        Ok(src)
    }
}

/// Declared registers; a `None` size means the register was adopted
/// from first use and indices go unchecked.
#[derive(Default)]
struct Regs {
    qreg: Option<(String, Option<usize>)>,
    creg: Option<(String, Option<usize>)>,
}

fn parse_statement(
    toks: &[Tok],
    header: &KernelHeader,
    resolver: &KernelResolver,
    regs: &mut Regs,
    adopted: &mut Vec<String>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let Some(head) = toks.first() else {
        return Ok(());
    };
    if head.kind != TokKind::Ident {
        return Err(syntax(head.line, head.col, "expected a statement"));
    }
    match head.text.as_str() {
        "OPENQASM" => return Ok(()),
        "include" => return Ok(()),
        "barrier" => return Ok(()),
        "qreg" => return declare_reg(toks, &mut regs.qreg, "quantum"),
        "creg" => return declare_reg(toks, &mut regs.creg, "classical"),
        "measure" => return parse_measure(toks, regs, out),
        _ => {}
    }
    if let Some((_, gate)) = GATES.iter().find(|(m, _)| *m == head.text) {
        return parse_gate(head, gate, &toks[1..], header, regs, adopted, out);
    }
    if toks.get(1).is_some_and(|t| t.is_punct('(')) {
        if let Some(callee) = resolver(&head.text) {
            return parse_kernel_call(&callee, toks, header, regs, adopted, out);
        }
    }
    Err(CompileError::UnknownInstruction {
        line: head.line,
        name: head.text.clone(),
    })
}

/// `qreg name[n]` / `creg name[n]`.
fn declare_reg(
    toks: &[Tok],
    slot: &mut Option<(String, Option<usize>)>,
    what: &str,
) -> Result<(), CompileError> {
    let head = &toks[0];
    if slot.as_ref().is_some_and(|(_, size)| size.is_some()) {
        return Err(syntax(
            head.line,
            head.col,
            alloc::format!("only one {what} register is supported"),
        ));
    }
    match &toks[1..] {
        [name, open, size, close]
            if name.kind == TokKind::Ident
                && open.is_punct('[')
                && size.kind == TokKind::Number
                && close.is_punct(']') =>
        {
            let n: usize = size.text.parse().map_err(|_| {
                syntax(size.line, size.col, "register size must be a non-negative integer")
            })?;
            *slot = Some((name.text.clone(), Some(n)));
            Ok(())
        }
        _ => Err(syntax(head.line, head.col, "expected `name[size]`")),
    }
}

/// `reg[idx]` at `pos`; advances past it and returns the index.
fn parse_operand(
    toks: &[Tok],
    pos: &mut usize,
    reg: &mut Option<(String, Option<usize>)>,
    what: &str,
) -> Result<usize, CompileError> {
    let err_at = |t: &Tok, msg: String| syntax(t.line, t.col, msg);
    let Some(name) = toks.get(*pos) else {
        let (line, col) = toks.last().map_or((1, 1), |t| (t.line, t.col));
        return Err(syntax(line, col, alloc::format!("expected a {what} operand")));
    };
    if name.kind != TokKind::Ident {
        return Err(err_at(name, alloc::format!("expected a {what} register name")));
    }
    match reg {
        Some((declared, _)) if declared != &name.text => {
            return Err(err_at(
                name,
                alloc::format!("unknown {what} register `{}`", name.text),
            ));
        }
        Some(_) => {}
        None => *reg = Some((name.text.clone(), None)),
    }
    match (toks.get(*pos + 1), toks.get(*pos + 2), toks.get(*pos + 3)) {
        (Some(open), Some(idx), Some(close))
            if open.is_punct('[') && idx.kind == TokKind::Number && close.is_punct(']') =>
        {
            let i: usize = idx
                .text
                .parse()
                .map_err(|_| err_at(idx, String::from("index must be a non-negative integer")))?;
            if let Some((_, Some(size))) = reg {
                if i >= *size {
                    return Err(err_at(
                        idx,
                        alloc::format!("index {i} is out of range for a register of size {size}"),
                    ));
                }
            }
            *pos += 4;
            Ok(i)
        }
        _ => Err(err_at(name, alloc::format!("expected `{}[index]`", name.text))),
    }
}

/// `measure q[i] -> c[j]`.
fn parse_measure(
    toks: &[Tok],
    regs: &mut Regs,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let head = &toks[0];
    let mut pos = 1;
    let qubit = parse_operand(toks, &mut pos, &mut regs.qreg, "quantum")?;
    let mut instr = Instruction::measure(qubit);
    if pos < toks.len() {
        let arrow = toks.get(pos).zip(toks.get(pos + 1));
        if !arrow.is_some_and(|(a, b)| a.is_punct('-') && b.is_punct('>')) {
            let t = &toks[pos];
            return Err(syntax(t.line, t.col, "expected `->`"));
        }
        pos += 2;
        let cbit = parse_operand(toks, &mut pos, &mut regs.creg, "classical")?;
        instr.set_cbits(alloc::vec![cbit]);
        if pos != toks.len() {
            let t = &toks[pos];
            return Err(syntax(t.line, t.col, "unexpected tokens after the measurement"));
        }
    } else if pos != toks.len() {
        let t = &toks[pos];
        return Err(syntax(t.line, t.col, "unexpected tokens after the measurement"));
    }
    let _ = head;
    out.add_instruction(instr);
    Ok(())
}

fn parse_gate(
    head: &Tok,
    gate: &str,
    rest: &[Tok],
    header: &KernelHeader,
    regs: &mut Regs,
    adopted: &[String],
    out: &mut Composite,
) -> Result<(), CompileError> {
    let mut pos = 0usize;
    let mut params: Vec<InstrParam> = Vec::new();
    if rest.get(pos).is_some_and(|t| t.is_punct('(')) {
        pos += 1;
        for span in split_paren_args(rest, &mut pos)? {
            let text = lex::render_tokens(span, &|_| None);
            let (eline, ecol) = span.first().map_or((head.line, head.col), |t| (t.line, t.col));
            let param =
                InstrParam::parse(&text).map_err(|e| syntax(eline, ecol, e.to_string()))?;
            if let InstrParam::Sym(s) = &param {
                for v in s.variables() {
                    if !knows(header, adopted, &v) {
                        return Err(CompileError::UndeclaredVariable { line: eline, name: v });
                    }
                }
            }
            params.push(param);
        }
    }
    // The one- and two-angle shorthands become the full gate.
    match head.text.as_str() {
        "u1" if params.len() == 1 => {
            let lambda = params.pop().expect("checked");
            params = alloc::vec![InstrParam::Real(0.0), InstrParam::Real(0.0), lambda];
        }
        "u2" if params.len() == 2 => {
            let lambda = params.pop().expect("checked");
            let phi = params.pop().expect("checked");
            params = alloc::vec![
                InstrParam::Real(core::f64::consts::FRAC_PI_2),
                phi,
                lambda,
            ];
        }
        _ => {}
    }
    let mut qubits = Vec::new();
    loop {
        qubits.push(parse_operand(rest, &mut pos, &mut regs.qreg, "quantum")?);
        match rest.get(pos) {
            Some(t) if t.is_punct(',') => pos += 1,
            Some(t) => return Err(syntax(t.line, t.col, "expected `,` or `;`")),
            None => break,
        }
    }
    let instr = Instruction::new(gate, qubits, params)
        .map_err(|e| syntax(head.line, head.col, e.to_string()))?;
    out.add_instruction(instr);
    Ok(())
}

fn knows(header: &KernelHeader, adopted: &[String], name: &str) -> bool {
    let base = name.split('[').next().unwrap_or(name);
    match &header.params {
        None => true,
        Some(ps) => ps.iter().any(|p| p == base) || adopted.iter().any(|a| a == base),
    }
}

/// Comma-separated spans between `(` (already consumed) and its `)`.
fn split_paren_args<'a>(
    toks: &'a [Tok],
    pos: &mut usize,
) -> Result<Vec<&'a [Tok]>, CompileError> {
    let mut spans = Vec::new();
    let mut start = *pos;
    let mut depth = 0usize;
    loop {
        let Some(t) = toks.get(*pos) else {
            let (line, col) = toks.last().map_or((1, 1), |t| (t.line, t.col));
            return Err(syntax(line, col, "expected `)`"));
        };
        match t.kind {
            TokKind::Punct('(') | TokKind::Punct('[') => depth += 1,
            TokKind::Punct(']') => depth = depth.saturating_sub(1),
            TokKind::Punct(')') => {
                if depth == 0 {
                    if *pos > start {
                        spans.push(&toks[start..*pos]);
                    }
                    *pos += 1;
                    return Ok(spans);
                }
                depth -= 1;
            }
            TokKind::Punct(',') if depth == 0 => {
                spans.push(&toks[start..*pos]);
                start = *pos + 1;
            }
            _ => {}
        }
        *pos += 1;
    }
}

fn parse_kernel_call(
    callee: &Composite,
    toks: &[Tok],
    header: &KernelHeader,
    regs: &Regs,
    adopted: &mut Vec<String>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let head = &toks[0];
    let mut pos = 2; // name (
    let spans = split_paren_args(toks, &mut pos)?;
    if pos != toks.len() {
        let t = &toks[pos];
        return Err(syntax(t.line, t.col, "unexpected tokens after the kernel call"));
    }
    let buffer_names: Vec<&str> = core::iter::once(header.buffer.as_str())
        .chain(regs.qreg.as_ref().map(|(n, _)| n.as_str()))
        .collect();
    let mut args: Vec<CallArg> = Vec::new();
    for (idx, span) in spans.iter().enumerate() {
        if let [t] = span {
            if t.kind == TokKind::Ident && buffer_names.contains(&t.text.as_str()) {
                if idx != 0 {
                    return Err(syntax(t.line, t.col, "the buffer may only be the first argument"));
                }
                continue;
            }
        }
        let text = lex::render_tokens(span, &|_| None);
        let (eline, ecol) = span.first().map_or((head.line, head.col), |t| (t.line, t.col));
        match InstrParam::parse(&text) {
            Ok(InstrParam::Real(v)) => args.push(CallArg::Value(v)),
            Ok(InstrParam::Sym(s)) if s.variables().len() == 1 && s.text() == s.variables()[0] => {
                args.push(CallArg::Name(s.variables().remove(0)));
            }
            _ => {
                return Err(syntax(
                    eline,
                    ecol,
                    "kernel arguments must be parameter names or constants",
                ));
            }
        }
    }
    if args.len() != callee.variables().len() {
        return Err(syntax(
            head.line,
            head.col,
            alloc::format!(
                "kernel `{}` takes {} parameter(s), got {}",
                callee.name(),
                callee.variables().len(),
                args.len()
            ),
        ));
    }
    for arg in &args {
        if let CallArg::Name(n) = arg {
            if !knows(header, adopted, n) {
                adopted.push(n.clone());
            }
        }
    }
    out.add_composite(specialize(callee, &args));
    Ok(())
}
