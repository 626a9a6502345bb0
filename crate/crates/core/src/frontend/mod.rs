//! Source-language compilers and IR-to-source translation.
//!
//! Three dialects are supported, each behind the common [`Compiler`]
//! trait: a C-style quantum assembly (`"xasm"`), a Quil subset
//! (`"quil"`), and an OpenQASM 2 subset (`"openqasm"`). Sources hold
//! one or more kernels marked `__qpu__`; each kernel becomes a
//! [`Composite`] whose variables are the kernel's declared `double`
//! parameters. Kernels may call previously defined kernels, which are
//! inlined by copy with positional argument substitution.
//!
//! [`CompilationDb`] implements the directive form: a source whose
//! `.compiler` / `.circuit` / `.parameters` / `.qbit` lines supply the
//! header information out of band, with compiled circuits stored under
//! their `.circuit` names for later retrieval.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ir::{Composite, Instruction, IrContainer};

mod lex;
mod openqasm;
mod quil;
mod rewrite;
mod xasm;

pub use openqasm::OpenQasmCompiler;
pub use quil::QuilCompiler;
pub use xasm::XasmCompiler;

/// Errors raised while compiling source text or translating IR back to
/// a dialect.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown instruction `{name}` at line {line}")]
    UnknownInstruction { line: usize, name: String },
    #[error("variable `{name}` at line {line} is not a declared kernel parameter")]
    UndeclaredVariable { line: usize, name: String },
    #[error("instruction `{name}` cannot be expressed in the {dialect} dialect")]
    UntranslatableInstruction { name: String, dialect: String },
    #[error("enhanced source is missing the required `{0}` directive")]
    MissingDirective(String),
    #[error("no circuit named `{0}` has been compiled")]
    NameNotCompiled(String),
    #[error("no compiler named `{0}` is available")]
    UnknownCompiler(String),
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> CompileError {
    CompileError::Syntax { line, column, message: message.into() }
}

/// Parsed kernel signature: the composite name, the buffer parameter
/// name qubit references use, and the scalar parameter names.
/// `params: None` asks the dialect to infer free variables from the
/// body (used for bare OpenQASM sources compiled as `main`).
#[derive(Clone, Debug)]
pub struct KernelHeader {
    pub name: String,
    pub buffer: String,
    pub params: Option<Vec<String>>,
}

/// One kernel cut out of a multi-kernel source.
#[derive(Debug)]
pub struct Kernel {
    pub header: KernelHeader,
    pub body: String,
    /// 1-based source line the body starts on, for error positions.
    pub body_line: usize,
}

/// Looks up a previously compiled kernel by name for call inlining.
pub type KernelResolver<'a> = dyn Fn(&str) -> Option<Composite> + 'a;

/// A source-dialect compiler: text to IR and IR back to text.
pub trait Compiler: Send + Sync {
    fn name(&self) -> &str;

    /// Compile annotated kernel source to one composite per kernel.
    fn compile(&self, source: &str) -> Result<IrContainer, CompileError> {
        compile_source(self, source)
    }

    /// Compile one kernel body whose header arrived out of band.
    fn compile_kernel(
        &self,
        header: &KernelHeader,
        body: &str,
        body_line: usize,
        resolver: &KernelResolver,
    ) -> Result<Composite, CompileError>;

    /// Emit a complete single-kernel source for `composite` in this
    /// dialect, decomposing gates the dialect cannot spell. The output
    /// recompiles under the same compiler to an equivalent circuit.
    fn translate(&self, composite: &Composite) -> Result<String, CompileError>;
}

/// The built-in dialect compilers.
pub fn builtin_compilers() -> Vec<Box<dyn Compiler>> {
    alloc::vec![
        Box::new(XasmCompiler),
        Box::new(QuilCompiler),
        Box::new(OpenQasmCompiler),
    ]
}

// ---------------------------------------------------------------------------
// Kernel splitting
// ---------------------------------------------------------------------------

/// Split a source into `__qpu__` kernels. Text outside kernels must be
/// whitespace or comments.
/// Shared body of [`Compiler::compile`]: split the source into
/// kernels and compile them in order, letting later kernels call
/// earlier ones.
pub(crate) fn compile_source(
    compiler: &(impl Compiler + ?Sized),
    source: &str,
) -> Result<IrContainer, CompileError> {
    let kernels = split_kernels(source)?;
    if kernels.is_empty() {
        return Err(syntax(1, 1, "source contains no `__qpu__` kernels"));
    }
    let mut out = IrContainer::new();
    for kernel in &kernels {
        if out.get(&kernel.header.name).is_some() {
            return Err(syntax(
                kernel.body_line,
                1,
                alloc::format!("duplicate kernel name `{}`", kernel.header.name),
            ));
        }
        let resolver = |name: &str| out.get(name).cloned();
        let compiled =
            compiler.compile_kernel(&kernel.header, &kernel.body, kernel.body_line, &resolver)?;
        out.add(compiled);
    }
    Ok(out)
}

pub fn split_kernels(source: &str) -> Result<Vec<Kernel>, CompileError> {
    let bytes = source.as_bytes();
    let mut kernels = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if bytes[*i] == b'\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if ch == '#' || (ch == '/' && bytes.get(i + 1) == Some(&b'/')) {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if !source[i..].starts_with("__qpu__") {
            return Err(syntax(line, col, "expected a `__qpu__` kernel"));
        }
        // Header runs to the opening brace.
        let brace = source[i..].find('{').ok_or_else(|| {
            syntax(line, col, "kernel header is missing its `{` body")
        })?;
        let header_text = &source[i..i + brace];
        let header = parse_header(header_text, line, col)?;
        for _ in 0..brace {
            advance(&mut i, &mut line, &mut col);
        }
        // Consume the `{`.
        advance(&mut i, &mut line, &mut col);
        let body_start = i;
        let body_line = line;
        let mut depth = 1usize;
        while i < bytes.len() && depth > 0 {
            match bytes[i] as char {
                '"' => {
                    advance(&mut i, &mut line, &mut col);
                    while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                        advance(&mut i, &mut line, &mut col);
                    }
                    if i < bytes.len() {
                        advance(&mut i, &mut line, &mut col);
                    }
                }
                '#' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                        col += 1;
                    }
                }
                '/' if bytes.get(i + 1) == Some(&b'/') => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                        col += 1;
                    }
                }
                '{' => {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col);
                }
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                    advance(&mut i, &mut line, &mut col);
                }
                _ => advance(&mut i, &mut line, &mut col),
            }
        }
        if depth != 0 {
            return Err(syntax(line, col, "kernel body is missing its closing `}`"));
        }
        let body = source[body_start..i].to_string();
        // Consume the `}`.
        advance(&mut i, &mut line, &mut col);
        kernels.push(Kernel { header, body, body_line });
    }
    Ok(kernels)
}

/// Parse `__qpu__ [void] name(qbit|AcceleratorBuffer buf {, double p})`.
fn parse_header(text: &str, line: usize, col: usize) -> Result<KernelHeader, CompileError> {
    let toks = lex::lex(text, line)?;
    let err = |msg: &str| syntax(line, col, msg.to_string());
    let mut pos = 0;
    let next_ident = |pos: &mut usize, expected: &str| -> Result<String, CompileError> {
        let t = toks
            .get(*pos)
            .ok_or_else(|| syntax(line, col, alloc::format!("expected {expected}")))?;
        *pos += 1;
        if t.kind != lex::TokKind::Ident {
            return Err(syntax(t.line, t.col, alloc::format!("expected {expected}")));
        }
        Ok(t.text.clone())
    };
    if next_ident(&mut pos, "`__qpu__`")? != "__qpu__" {
        return Err(err("expected `__qpu__`"));
    }
    let mut name = next_ident(&mut pos, "the kernel name")?;
    if name == "void" {
        name = next_ident(&mut pos, "the kernel name")?;
    }
    let open = toks.get(pos).ok_or_else(|| err("expected `(`"))?;
    if !open.is_punct('(') {
        return Err(syntax(open.line, open.col, "expected `(`"));
    }
    pos += 1;
    let buf_type = next_ident(&mut pos, "the buffer type")?;
    if buf_type != "qbit" && buf_type != "AcceleratorBuffer" {
        return Err(err("the first kernel parameter must be a `qbit` or `AcceleratorBuffer`"));
    }
    let buffer = next_ident(&mut pos, "the buffer name")?;
    let mut params = Vec::new();
    loop {
        let t = toks.get(pos).ok_or_else(|| err("expected `)`"))?;
        if t.is_punct(')') {
            pos += 1;
            break;
        }
        if !t.is_punct(',') {
            return Err(syntax(t.line, t.col, "expected `,` or `)`"));
        }
        pos += 1;
        let ty = next_ident(&mut pos, "a parameter type")?;
        if ty != "double" {
            return Err(err(&alloc::format!(
                "unsupported kernel parameter type `{ty}` (only `double` scalars)"
            )));
        }
        params.push(next_ident(&mut pos, "the parameter name")?);
    }
    if pos != toks.len() {
        let t = &toks[pos];
        return Err(syntax(t.line, t.col, "unexpected text after the kernel signature"));
    }
    Ok(KernelHeader { name, buffer, params: Some(params) })
}

// ---------------------------------------------------------------------------
// Kernel-call inlining
// ---------------------------------------------------------------------------

/// One positional argument of a kernel call.
#[derive(Clone, Debug)]
pub(crate) enum CallArg {
    /// Caller-side variable name the callee's parameter is renamed to.
    Name(String),
    /// Concrete value the callee's parameter is bound to.
    Value(f64),
}

/// Inline `callee` for a call site: constant arguments are substituted,
/// identifier arguments rename the callee's variables positionally.
pub(crate) fn specialize(callee: &Composite, args: &[CallArg]) -> Composite {
    let vars = callee.variables().to_vec();
    let bound: BTreeMap<&str, f64> = vars
        .iter()
        .zip(args)
        .filter_map(|(v, a)| match a {
            CallArg::Value(x) => Some((v.as_str(), *x)),
            CallArg::Name(_) => None,
        })
        .collect();
    let renames: BTreeMap<&str, &str> = vars
        .iter()
        .zip(args)
        .filter_map(|(v, a)| match a {
            CallArg::Name(n) => Some((v.as_str(), n.as_str())),
            CallArg::Value(_) => None,
        })
        .collect();
    let substituted = partial_bind(callee, &|name| bound.get(name).copied());
    let mut renamed = substituted.rename_variables(&|name| {
        renames.get(name).map_or_else(|| name.to_string(), |n| n.to_string())
    });
    dedup_variables(&mut renamed);
    renamed
}

/// Bind a subset of variables to constants throughout the tree,
/// dropping them from every variables list.
fn partial_bind(c: &Composite, lookup: &dyn Fn(&str) -> Option<f64>) -> Composite {
    let keep: Vec<String> =
        c.variables().iter().filter(|v| lookup(v).is_none()).cloned().collect();
    let mut out = Composite::with_variables(c.name(), keep);
    for child in c.children() {
        match child {
            crate::ir::Node::Instruction(i) => {
                let params: Vec<_> = i.params().iter().map(|p| p.substitute(lookup)).collect();
                let instr = Instruction::from_parts(
                    i.name(),
                    i.bits().to_vec(),
                    params,
                    i.is_enabled(),
                    i.explicit_cbits().map(<[usize]>::to_vec),
                )
                .expect("substitution preserves arity");
                out.add_instruction(instr);
            }
            crate::ir::Node::Composite(cc) => out.add_composite(partial_bind(cc, lookup)),
        }
    }
    out
}

fn dedup_variables(c: &mut Composite) {
    let mut seen = Vec::new();
    for v in c.variables() {
        if !seen.contains(v) {
            seen.push(v.clone());
        }
    }
    c.set_variables(seen);
}

// ---------------------------------------------------------------------------
// Variable finalization
// ---------------------------------------------------------------------------

/// Fix a freshly parsed kernel's variable list.
///
/// Declared parameters keep their declaration order; a parameter used
/// only in indexed form (`x[2]`) expands to its referenced indices in
/// ascending order. Names adopted from kernel-call arguments follow.
/// With `declared: None` the referenced symbols themselves become the
/// variables in first-use order.
pub(crate) fn finalize_variables(
    composite: &mut Composite,
    declared: Option<&[String]>,
    adopted: &[String],
    err_line: usize,
) -> Result<(), CompileError> {
    let refs = composite.referenced_symbols();
    let vars = match declared {
        None => refs,
        Some(params) => {
            let mut vars = Vec::new();
            for p in params {
                let bare = refs.iter().any(|r| r == p);
                let mut indexed: Vec<(u64, &String)> = refs
                    .iter()
                    .filter_map(|r| {
                        let rest = r.strip_prefix(p.as_str())?.strip_prefix('[')?;
                        let idx: u64 = rest.strip_suffix(']')?.parse().ok()?;
                        Some((idx, r))
                    })
                    .collect();
                if bare && !indexed.is_empty() {
                    return Err(syntax(
                        err_line,
                        1,
                        alloc::format!("parameter `{p}` is used both bare and indexed"),
                    ));
                }
                if indexed.is_empty() {
                    vars.push(p.clone());
                } else {
                    indexed.sort_unstable_by_key(|&(idx, _)| idx);
                    vars.extend(indexed.into_iter().map(|(_, r)| r.clone()));
                }
            }
            for a in adopted {
                if !vars.contains(a) {
                    vars.push(a.clone());
                }
            }
            vars
        }
    };
    composite.set_variables(vars);
    Ok(())
}

/// Collapse a variable list to unique base names (`x[3]` → `x`) in
/// first-occurrence order, for emitting kernel signatures.
pub(crate) fn signature_params(composite: &Composite) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in composite.variables() {
        let base = v.split('[').next().unwrap_or(v).to_string();
        if !out.contains(&base) {
            out.push(base);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Enhanced-source directives and the compilation database
// ---------------------------------------------------------------------------

/// Compiled-circuit store fed by directive-form sources.
///
/// A directive source names its dialect once with `.compiler`, then
/// gives one or more `.circuit NAME` blocks; `.parameters` and `.qbit`
/// lines supply each block's scalar parameter names and buffer name.
/// Later circuits may call earlier ones (including circuits from
/// previous [`CompilationDb::qasm`] calls) by name.
pub struct CompilationDb {
    compilers: Vec<Box<dyn Compiler>>,
    circuits: BTreeMap<String, Composite>,
}

impl Default for CompilationDb {
    fn default() -> Self {
        Self::new()
    }
}

struct DirectiveCircuit {
    name: String,
    params: Vec<String>,
    buffer: Option<String>,
    body: Vec<String>,
    body_line: usize,
}

impl CompilationDb {
    pub fn new() -> CompilationDb {
        CompilationDb { compilers: builtin_compilers(), circuits: BTreeMap::new() }
    }

    /// Compile an enhanced source and store its circuits; returns the
    /// circuit names in definition order.
    pub fn qasm(&mut self, source: &str) -> Result<Vec<String>, CompileError> {
        let mut compiler_name: Option<String> = None;
        let mut circuits: Vec<DirectiveCircuit> = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix(".compiler") {
                if compiler_name.is_some() {
                    return Err(syntax(line_no, 1, "duplicate `.compiler` directive"));
                }
                let name = rest.trim();
                if name.is_empty() {
                    return Err(syntax(line_no, 1, "`.compiler` needs a compiler name"));
                }
                compiler_name = Some(name.to_string());
            } else if let Some(rest) = line.strip_prefix(".circuit") {
                let name = rest.trim();
                if name.is_empty() {
                    return Err(syntax(line_no, 1, "`.circuit` needs a circuit name"));
                }
                circuits.push(DirectiveCircuit {
                    name: name.to_string(),
                    params: Vec::new(),
                    buffer: None,
                    body: Vec::new(),
                    body_line: line_no + 1,
                });
            } else if let Some(rest) = line.strip_prefix(".parameters") {
                let current = circuits
                    .last_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`.parameters` before any `.circuit`"))?;
                current.params = rest
                    .split(',')
                    .map(|p| p.trim().to_string())
                    .filter(|p| !p.is_empty())
                    .collect();
                current.body_line = line_no + 1;
            } else if let Some(rest) = line.strip_prefix(".qbit") {
                let current = circuits
                    .last_mut()
                    .ok_or_else(|| syntax(line_no, 1, "`.qbit` before any `.circuit`"))?;
                current.buffer = Some(rest.trim().to_string());
                current.body_line = line_no + 1;
            } else if line.starts_with('.') {
                return Err(syntax(line_no, 1, alloc::format!("unknown directive `{line}`")));
            } else {
                let current = circuits
                    .last_mut()
                    .ok_or_else(|| syntax(line_no, 1, "statement before any `.circuit`"))?;
                if current.body.is_empty() {
                    current.body_line = line_no;
                }
                current.body.push(raw.to_string());
            }
        }
        let compiler_name =
            compiler_name.ok_or_else(|| CompileError::MissingDirective(".compiler".into()))?;
        let compiler = self
            .compilers
            .iter()
            .find(|c| c.name() == compiler_name)
            .ok_or(CompileError::UnknownCompiler(compiler_name))?;

        let mut new_names = Vec::new();
        let mut compiled_now: Vec<Composite> = Vec::new();
        for circuit in &circuits {
            let header = KernelHeader {
                name: circuit.name.clone(),
                buffer: circuit.buffer.clone().unwrap_or_else(|| "q".to_string()),
                params: Some(circuit.params.clone()),
            };
            let resolver = |name: &str| {
                compiled_now
                    .iter()
                    .find(|c| c.name() == name)
                    .cloned()
                    .or_else(|| self.circuits.get(name).cloned())
            };
            let body = circuit.body.join("\n");
            let compiled =
                compiler.compile_kernel(&header, &body, circuit.body_line, &resolver)?;
            new_names.push(circuit.name.clone());
            compiled_now.push(compiled);
        }
        for c in compiled_now {
            self.circuits.insert(c.name().to_string(), c);
        }
        Ok(new_names)
    }

    /// Retrieve a circuit compiled by an earlier [`CompilationDb::qasm`].
    pub fn get_compiled(&self, name: &str) -> Result<&Composite, CompileError> {
        self.circuits
            .get(name)
            .ok_or_else(|| CompileError::NameNotCompiled(name.to_string()))
    }
}
