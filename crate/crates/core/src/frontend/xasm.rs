//! The C-style quantum assembly dialect.
//!
//! Statements are `Name(q[idx]{, q[idx]}{, param-expr});` with the
//! buffer indexed for qubit operands, C-style integer `for` loops that
//! unroll at compile time, calls to the dynamic circuit generators
//! (`range`, `qft`, `exp_i_theta`) with a brace map literal of
//! options, and calls to previously compiled kernels, inlined by copy.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::catalog;
use crate::circuits::{builtin_generators, CompositeGenerator};
use crate::het::HetMap;
use crate::ir::{Composite, InstrParam, Instruction};

use super::lex::{self, Tok, TokKind};
use super::{
    finalize_variables, rewrite, signature_params, specialize, syntax, CallArg, CompileError,
    Compiler, KernelHeader, KernelResolver,
};

pub struct XasmCompiler;

impl Compiler for XasmCompiler {
    fn name(&self) -> &str {
        "xasm"
    }

    fn compile_kernel(
        &self,
        header: &KernelHeader,
        body: &str,
        body_line: usize,
        resolver: &KernelResolver,
    ) -> Result<Composite, CompileError> {
        let toks = lex::lex(body, body_line)?;
        let mut ctx = Ctx {
            buffer: header.buffer.clone(),
            declared: header.params.clone(),
            adopted: Vec::new(),
            resolver,
            generators: builtin_generators(),
        };
        let mut out = Composite::new(&header.name);
        let mut p = P { toks: &toks, pos: 0 };
        let bindings = BTreeMap::new();
        while p.peek().is_some() {
            parse_statement(&mut p, &mut ctx, &bindings, &mut out)?;
        }
        finalize_variables(&mut out, ctx.declared.as_deref(), &ctx.adopted, body_line)?;
        Ok(out)
    }

    fn translate(&self, composite: &Composite) -> Result<String, CompileError> {
        let instrs = rewrite::flatten_for_dialect(composite, "xasm", &|_| true, false)?;
        let mut src = alloc::format!("__qpu__ void {}(qbit q", composite.name());
        for p in signature_params(composite) {
            src.push_str(", double ");
            src.push_str(&p);
        }
        src.push_str(") {\n");
        for instr in &instrs {
            src.push_str("  ");
            src.push_str(instr.name());
            src.push('(');
            let mut first = true;
            for b in instr.bits() {
                if !first {
                    src.push_str(", ");
                }
                src.push_str(&alloc::format!("q[{b}]"));
                first = false;
            }
            for p in instr.params() {
                src.push_str(", ");
                src.push_str(&p.to_string());
            }
            src.push_str(");\n");
        }
        src.push_str("}\n");
        Ok(src)
    }
}

struct Ctx<'a> {
    buffer: String,
    declared: Option<Vec<String>>,
    adopted: Vec<String>,
    resolver: &'a KernelResolver<'a>,
    generators: Vec<alloc::boxed::Box<dyn CompositeGenerator + Send + Sync>>,
}

impl Ctx<'_> {
    /// A variable name is acceptable when its base is a declared
    /// parameter or an adopted call argument (or everything is being
    /// inferred).
    fn knows(&self, name: &str) -> bool {
        let base = name.split('[').next().unwrap_or(name);
        match &self.declared {
            None => true,
            Some(ps) => {
                ps.iter().any(|p| p == base) || self.adopted.iter().any(|a| a == base)
            }
        }
    }

    fn check_param_vars(&self, param: &InstrParam, line: usize) -> Result<(), CompileError> {
        if let InstrParam::Sym(s) = param {
            for v in s.variables() {
                if !self.knows(&v) {
                    return Err(CompileError::UndeclaredVariable { line, name: v });
                }
            }
        }
        Ok(())
    }
}

struct P<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn last_pos(&self) -> (usize, usize) {
        self.toks
            .last()
            .map_or((1, 1), |t| (t.line, t.col + t.text.len()))
    }

    fn expect_punct(&mut self, ch: char) -> Result<&'a Tok, CompileError> {
        match self.next() {
            Some(t) if t.is_punct(ch) => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, alloc::format!("expected `{ch}`"))),
            None => {
                let (line, col) = self.last_pos();
                Err(syntax(line, col, alloc::format!("expected `{ch}`")))
            }
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<&'a Tok, CompileError> {
        match self.next() {
            Some(t) if t.kind == TokKind::Ident => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, alloc::format!("expected {what}"))),
            None => {
                let (line, col) = self.last_pos();
                Err(syntax(line, col, alloc::format!("expected {what}")))
            }
        }
    }

    /// Collect the token span up to a `,` or `)` at depth zero,
    /// leaving the delimiter unconsumed.
    fn arg_span(&mut self) -> Result<&'a [Tok], CompileError> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t.kind {
                TokKind::Punct('(') | TokKind::Punct('[') | TokKind::Punct('{') => depth += 1,
                TokKind::Punct(')') | TokKind::Punct(']') | TokKind::Punct('}') => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                TokKind::Punct(',') if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        Ok(&self.toks[start..self.pos])
    }
}

fn parse_statement(
    p: &mut P,
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let t = p.peek().expect("caller checked");
    if t.is_ident("for") {
        return parse_for(p, ctx, bindings, out);
    }
    if t.kind != TokKind::Ident {
        return Err(syntax(t.line, t.col, "expected a statement"));
    }
    parse_call(p, ctx, bindings, out)
}

fn parse_for(
    p: &mut P,
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    p.next(); // for
    p.expect_punct('(')?;
    let kw = p.expect_ident("`int`")?;
    if kw.text != "int" {
        return Err(syntax(kw.line, kw.col, "loop counters are declared `int`"));
    }
    let var = p.expect_ident("the loop variable")?.text.clone();
    p.expect_punct('=')?;
    let init_span = {
        let start = p.pos;
        while p.peek().is_some_and(|t| !t.is_punct(';')) {
            p.pos += 1;
        }
        &p.toks[start..p.pos]
    };
    let init = eval_int(init_span, bindings, "loop start")?;
    p.expect_punct(';')?;
    let cond_var = p.expect_ident("the loop variable")?;
    if cond_var.text != var {
        return Err(syntax(cond_var.line, cond_var.col, "condition must test the loop variable"));
    }
    p.expect_punct('<')?;
    let bound_span = {
        let start = p.pos;
        while p.peek().is_some_and(|t| !t.is_punct(';')) {
            p.pos += 1;
        }
        &p.toks[start..p.pos]
    };
    let bound = eval_int(bound_span, bindings, "loop bound")?;
    p.expect_punct(';')?;
    let inc_var = p.expect_ident("the loop variable")?;
    if inc_var.text != var {
        return Err(syntax(inc_var.line, inc_var.col, "increment must use the loop variable"));
    }
    p.expect_punct('+')?;
    p.expect_punct('+')?;
    p.expect_punct(')')?;
    p.expect_punct('{')?;
    // Capture the body token span (balanced braces).
    let body_start = p.pos;
    let mut depth = 1usize;
    while let Some(t) = p.next() {
        match t.kind {
            TokKind::Punct('{') => depth += 1,
            TokKind::Punct('}') => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        let (line, col) = p.last_pos();
        return Err(syntax(line, col, "for-loop body is missing its closing `}`"));
    }
    let body = &p.toks[body_start..p.pos - 1];
    for value in init..bound {
        let mut inner = bindings.clone();
        inner.insert(var.clone(), value);
        let mut q = P { toks: body, pos: 0 };
        while q.peek().is_some() {
            parse_statement(&mut q, ctx, &inner, out)?;
        }
    }
    Ok(())
}

fn eval_int(
    span: &[Tok],
    bindings: &BTreeMap<String, i64>,
    what: &str,
) -> Result<i64, CompileError> {
    let (line, col) = span.first().map_or((1, 1), |t| (t.line, t.col));
    let text = lex::render_tokens(span, &|n| bindings.get(n).copied());
    match InstrParam::parse(&text) {
        Ok(InstrParam::Real(v)) if crate::math::fract(v) == 0.0 => Ok(v as i64),
        _ => Err(syntax(line, col, alloc::format!("{what} must be an integer constant"))),
    }
}

/// One parsed call argument.
enum Arg<'a> {
    /// The bare buffer name.
    Buffer,
    /// `buffer[index]` with the index already evaluated.
    Qubit(usize),
    /// A brace map literal, parsed into options.
    Map(HetMap, usize, usize),
    /// Anything else: an expression token span.
    Expr(&'a [Tok]),
}

fn parse_call(
    p: &mut P,
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let name_tok = p.expect_ident("an instruction name")?;
    let name = name_tok.text.clone();
    let (line, col) = (name_tok.line, name_tok.col);
    p.expect_punct('(')?;
    let mut args: Vec<Arg> = Vec::new();
    loop {
        match p.peek() {
            Some(t) if t.is_punct(')') => {
                p.next();
                break;
            }
            None => {
                let (l, c) = p.last_pos();
                return Err(syntax(l, c, "expected `)`"));
            }
            _ => {}
        }
        if !args.is_empty() {
            p.expect_punct(',')?;
        }
        args.push(parse_arg(p, ctx, bindings)?);
    }
    p.expect_punct(';')?;

    if catalog::lookup(&name).is_some() {
        return add_instruction(&name, line, col, &args, ctx, bindings, out);
    }
    if let Some(generator) = ctx.generators.iter().position(|g| g.name() == name) {
        return add_generated(generator, line, col, &args, ctx, bindings, out);
    }
    if let Some(callee) = (ctx.resolver)(&name) {
        return add_kernel_call(&callee, line, col, &args, ctx, bindings, out);
    }
    Err(CompileError::UnknownInstruction { line, name })
}

fn parse_arg<'a>(
    p: &mut P<'a>,
    ctx: &Ctx,
    bindings: &BTreeMap<String, i64>,
) -> Result<Arg<'a>, CompileError> {
    if let Some(t) = p.peek() {
        if t.is_punct('{') {
            let (line, col) = (t.line, t.col);
            let map = parse_map(p, bindings)?;
            return Ok(Arg::Map(map, line, col));
        }
        if t.kind == TokKind::Ident && t.text == ctx.buffer {
            let after = p.toks.get(p.pos + 1);
            if after.is_some_and(|n| n.is_punct('[')) {
                let (line, col) = (t.line, t.col);
                p.next(); // buffer
                p.next(); // [
                let span = p.arg_span()?;
                // arg_span stops at the `]` closing our bracket.
                let idx_text = lex::render_tokens(span, &|n| bindings.get(n).copied());
                p.expect_punct(']')?;
                let idx = match InstrParam::parse(&idx_text) {
                    Ok(InstrParam::Real(v)) if crate::math::fract(v) == 0.0 && v >= 0.0 => v as usize,
                    _ => {
                        return Err(syntax(line, col, "qubit index must be a concrete non-negative integer"));
                    }
                };
                return Ok(Arg::Qubit(idx));
            }
            p.next();
            return Ok(Arg::Buffer);
        }
    }
    let span = p.arg_span()?;
    if span.is_empty() {
        let (line, col) = p.last_pos();
        return Err(syntax(line, col, "expected an argument"));
    }
    Ok(Arg::Expr(span))
}

/// `{{"key", value}, ...}` into a heterogeneous option map.
fn parse_map(p: &mut P, bindings: &BTreeMap<String, i64>) -> Result<HetMap, CompileError> {
    p.expect_punct('{')?;
    let mut map = HetMap::new();
    loop {
        match p.peek() {
            Some(t) if t.is_punct('}') => {
                p.next();
                break;
            }
            _ => {}
        }
        if !map.is_empty() {
            p.expect_punct(',')?;
        }
        p.expect_punct('{')?;
        let key = match p.next() {
            Some(t) if t.kind == TokKind::Str => t.text.clone(),
            Some(t) => return Err(syntax(t.line, t.col, "map keys are string literals")),
            None => {
                let (l, c) = p.last_pos();
                return Err(syntax(l, c, "map keys are string literals"));
            }
        };
        p.expect_punct(',')?;
        let value = p.next().cloned();
        match value {
            Some(t) if t.kind == TokKind::Str => {
                map.insert(&key, t.text.clone());
            }
            Some(t) if t.kind == TokKind::Number => insert_number(&mut map, &key, &t, false)?,
            Some(t) if t.is_punct('-') => {
                let n = p.next().cloned();
                match n {
                    Some(n) if n.kind == TokKind::Number => {
                        insert_number(&mut map, &key, &n, true)?;
                    }
                    _ => return Err(syntax(t.line, t.col, "expected a number after `-`")),
                }
            }
            Some(t) if t.is_ident("true") => {
                map.insert(&key, true);
            }
            Some(t) if t.is_ident("false") => {
                map.insert(&key, false);
            }
            Some(t) if t.kind == TokKind::Ident && bindings.contains_key(&t.text) => {
                map.insert(&key, bindings[&t.text]);
            }
            Some(t) => {
                return Err(syntax(t.line, t.col, "map values are strings, numbers, or booleans"));
            }
            None => {
                let (l, c) = p.last_pos();
                return Err(syntax(l, c, "expected a map value"));
            }
        }
        p.expect_punct('}')?;
    }
    Ok(map)
}

fn insert_number(
    map: &mut HetMap,
    key: &str,
    tok: &Tok,
    negate: bool,
) -> Result<(), CompileError> {
    let text = &tok.text;
    if text.contains('.') || text.contains('e') || text.contains('E') {
        let v: f64 = text
            .parse()
            .map_err(|_| syntax(tok.line, tok.col, "malformed number"))?;
        map.insert(key, if negate { -v } else { v });
    } else {
        let v: i64 = text
            .parse()
            .map_err(|_| syntax(tok.line, tok.col, "malformed integer"))?;
        map.insert(key, if negate { -v } else { v });
    }
    Ok(())
}

fn add_instruction(
    name: &str,
    line: usize,
    col: usize,
    args: &[Arg],
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let mut qubits = Vec::new();
    let mut params = Vec::new();
    for arg in args {
        match arg {
            Arg::Qubit(q) => {
                if !params.is_empty() {
                    return Err(syntax(line, col, "qubit operands come before parameters"));
                }
                qubits.push(*q);
            }
            Arg::Expr(span) => {
                let text = lex::render_tokens(span, &|n| bindings.get(n).copied());
                let (eline, _) = span.first().map_or((line, col), |t| (t.line, t.col));
                let param = InstrParam::parse(&text).map_err(|e| {
                    syntax(eline, span.first().map_or(col, |t| t.col), e.to_string())
                })?;
                ctx.check_param_vars(&param, eline)?;
                params.push(param);
            }
            Arg::Buffer => {
                return Err(syntax(line, col, "instructions take indexed qubits, not the bare buffer"));
            }
            Arg::Map(_, mline, mcol) => {
                return Err(syntax(*mline, *mcol, "instructions do not take option maps"));
            }
        }
    }
    let instr = Instruction::new(name, qubits, params)
        .map_err(|e| syntax(line, col, e.to_string()))?;
    out.add_instruction(instr);
    Ok(())
}

fn add_generated(
    generator: usize,
    line: usize,
    col: usize,
    args: &[Arg],
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let generator = &ctx.generators[generator];
    let err = |msg: &str| syntax(line, col, msg.to_string());
    let mut options = match args.last() {
        Some(Arg::Map(m, ..)) => m.clone(),
        _ => return Err(err("generator calls end with an option map literal")),
    };
    match args.first() {
        Some(Arg::Buffer) => {}
        _ => return Err(err("generator calls start with the buffer")),
    }
    let middle = &args[1..args.len() - 1];
    let child = match (generator.name(), middle) {
        ("exp_i_theta", [Arg::Expr(span)]) => {
            let text = lex::render_tokens(span, &|n| bindings.get(n).copied());
            match InstrParam::parse(&text) {
                Ok(InstrParam::Real(v)) => {
                    // Concrete angle: expand then bind it.
                    let expanded = generator
                        .expand(&options)
                        .map_err(|e| syntax(line, col, e.to_string()))?;
                    expanded
                        .evaluate(&alloc::vec![v; expanded.variables().len()])
                        .map_err(|e| syntax(line, col, e.to_string()))?
                }
                Ok(InstrParam::Sym(s)) if s.variables().len() == 1 && s.text() == s.variables()[0] =>
                {
                    let var = s.variables().remove(0);
                    let vline = span.first().map_or(line, |t| t.line);
                    if !ctx.knows(&var) {
                        return Err(CompileError::UndeclaredVariable { line: vline, name: var });
                    }
                    options.insert("variable", var);
                    generator
                        .expand(&options)
                        .map_err(|e| syntax(line, col, e.to_string()))?
                }
                _ => {
                    return Err(err("the angle argument must be a parameter name or a constant"));
                }
            }
        }
        ("exp_i_theta", _) => {
            return Err(err("expected `(buffer, angle, {options})`"));
        }
        (_, []) => generator
            .expand(&options)
            .map_err(|e| syntax(line, col, e.to_string()))?,
        _ => return Err(err("expected `(buffer, {options})`")),
    };
    out.add_composite(child);
    Ok(())
}

fn add_kernel_call(
    callee: &Composite,
    line: usize,
    col: usize,
    args: &[Arg],
    ctx: &mut Ctx,
    bindings: &BTreeMap<String, i64>,
    out: &mut Composite,
) -> Result<(), CompileError> {
    let mut scalar_args: Vec<CallArg> = Vec::new();
    for (idx, arg) in args.iter().enumerate() {
        match arg {
            Arg::Buffer => {
                if idx != 0 {
                    return Err(syntax(line, col, "the buffer may only be the first argument"));
                }
            }
            Arg::Expr(span) => {
                let text = lex::render_tokens(span, &|n| bindings.get(n).copied());
                let (eline, ecol) = span.first().map_or((line, col), |t| (t.line, t.col));
                match InstrParam::parse(&text) {
                    Ok(InstrParam::Real(v)) => scalar_args.push(CallArg::Value(v)),
                    Ok(InstrParam::Sym(s))
                        if s.variables().len() == 1 && s.text() == s.variables()[0] =>
                    {
                        scalar_args.push(CallArg::Name(s.variables().remove(0)));
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
            Arg::Qubit(_) => {
                return Err(syntax(line, col, "kernel calls pass the whole buffer, not qubits"));
            }
            Arg::Map(_, mline, mcol) => {
                return Err(syntax(*mline, *mcol, "kernel calls do not take option maps"));
            }
        }
    }
    if scalar_args.len() != callee.variables().len() {
        return Err(syntax(
            line,
            col,
            alloc::format!(
                "kernel `{}` takes {} parameter(s), got {}",
                callee.name(),
                callee.variables().len(),
                scalar_args.len()
            ),
        ));
    }
    for arg in &scalar_args {
        if let CallArg::Name(n) = arg {
            if !ctx.knows(n) && !ctx.adopted.contains(n) {
                ctx.adopted.push(n.clone());
            }
        }
    }
    out.add_composite(specialize(callee, &scalar_args));
    Ok(())
}
