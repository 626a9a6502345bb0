//! Composite IR nodes: named n-ary trees of instructions and nested
//! composites, with declared free variables.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Instruction, IrError};

/// One child of a composite.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Instruction(Instruction),
    Composite(Composite),
}

impl Node {
    pub fn as_instruction(&self) -> Option<&Instruction> {
        match self {
            Node::Instruction(i) => Some(i),
            Node::Composite(_) => None,
        }
    }

    pub fn as_composite(&self) -> Option<&Composite> {
        match self {
            Node::Composite(c) => Some(c),
            Node::Instruction(_) => None,
        }
    }
}

impl From<Instruction> for Node {
    fn from(i: Instruction) -> Self {
        Node::Instruction(i)
    }
}

impl From<Composite> for Node {
    fn from(c: Composite) -> Self {
        Node::Composite(c)
    }
}

/// A named program tree. Children run in order; nested composites run
/// depth-first. `variables` declares the symbols that parameterize the
/// tree — every symbolic parameter below must reference one of them.
///
/// A composite produced by a dynamic circuit generator starts *unexpanded*
/// (no children, a remembered generator name) and must be expanded with
/// concrete options before evaluation or execution.
#[derive(Clone, Debug, PartialEq)]
pub struct Composite {
    name: String,
    variables: Vec<String>,
    children: Vec<Node>,
    generator: Option<String>,
}

impl Composite {
    pub fn new(name: impl Into<String>) -> Composite {
        Composite {
            name: name.into(),
            variables: Vec::new(),
            children: Vec::new(),
            generator: None,
        }
    }

    pub fn with_variables(
        name: impl Into<String>,
        variables: impl IntoIterator<Item = impl Into<String>>,
    ) -> Composite {
        let mut c = Composite::new(name);
        c.variables = variables.into_iter().map(Into::into).collect();
        c
    }

    /// Placeholder produced by a dynamic generator service; stays inert
    /// until [`Composite::replace_body`] installs the generated circuit.
    pub fn unexpanded(name: impl Into<String>, generator: impl Into<String>) -> Composite {
        let mut c = Composite::new(name);
        c.generator = Some(generator.into());
        c
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn add_variable(&mut self, name: impl Into<String>) {
        let name = name.into();
        if !self.variables.contains(&name) {
            self.variables.push(name);
        }
    }

    pub fn set_variables(&mut self, variables: Vec<String>) {
        self.variables = variables;
    }

    pub fn children(&self) -> &[Node] {
        &self.children
    }

    pub fn children_mut(&mut self) -> &mut [Node] {
        &mut self.children
    }

    pub fn add_instruction(&mut self, instruction: Instruction) {
        self.children.push(Node::Instruction(instruction));
    }

    pub fn add_composite(&mut self, composite: Composite) {
        self.children.push(Node::Composite(composite));
    }

    pub fn add_node(&mut self, node: Node) {
        self.children.push(node);
    }

    /// Name of the generator service that produced this still-unexpanded
    /// composite, if any.
    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }

    pub fn is_unexpanded(&self) -> bool {
        self.generator.is_some() && self.children.is_empty()
    }

    /// Install generated children (and any generated variables), marking
    /// the composite expanded.
    pub fn replace_body(&mut self, body: Composite) {
        self.children = body.children;
        for v in body.variables {
            self.add_variable(v);
        }
        self.generator = None;
    }

    /// Number of leaf instructions, counted recursively through nested
    /// composites (disabled leaves included).
    pub fn leaf_count(&self) -> usize {
        self.children
            .iter()
            .map(|n| match n {
                Node::Instruction(_) => 1,
                Node::Composite(c) => c.leaf_count(),
            })
            .sum()
    }

    pub fn n_children(&self) -> usize {
        self.children.len()
    }

    /// Visit every leaf in execution order.
    pub fn for_each_leaf<'a>(&'a self, f: &mut dyn FnMut(&'a Instruction)) {
        for child in &self.children {
            match child {
                Node::Instruction(i) => f(i),
                Node::Composite(c) => c.for_each_leaf(f),
            }
        }
    }

    /// Mutable leaf visit (e.g. toggling enabled flags).
    pub fn for_each_leaf_mut(&mut self, f: &mut dyn FnMut(&mut Instruction)) {
        for child in &mut self.children {
            match child {
                Node::Instruction(i) => f(i),
                Node::Composite(c) => c.for_each_leaf_mut(f),
            }
        }
    }

    /// All leaves in execution order.
    pub fn leaves(&self) -> Vec<&Instruction> {
        let mut out = Vec::new();
        self.for_each_leaf(&mut |i| out.push(i));
        out
    }

    /// Enabled leaves in execution order — what evaluation, execution,
    /// translation, and the graph view operate on.
    pub fn enabled_leaves(&self) -> Vec<&Instruction> {
        let mut out = Vec::new();
        self.for_each_leaf(&mut |i| {
            if i.is_enabled() {
                out.push(i);
            }
        });
        out
    }

    /// Highest qubit index referenced plus one (0 for an empty tree).
    pub fn qubit_extent(&self) -> usize {
        let mut max = None::<usize>;
        self.for_each_leaf(&mut |i| {
            for &b in i.bits() {
                max = Some(max.map_or(b, |m| m.max(b)));
            }
        });
        max.map_or(0, |m| m + 1)
    }

    /// Variable names actually referenced by symbolic parameters, in
    /// first-use order.
    pub fn referenced_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.for_each_leaf(&mut |i| {
            for p in i.params() {
                if let super::InstrParam::Sym(s) = p {
                    for v in s.variables() {
                        if !out.iter().any(|o| o == &v) {
                            out.push(v);
                        }
                    }
                }
            }
        });
        out
    }

    /// Check the declaration invariant: every referenced symbol is
    /// declared in `variables`.
    pub fn validate_symbols(&self) -> Result<(), IrError> {
        for v in self.referenced_symbols() {
            if !self.variables.contains(&v) {
                return Err(IrError::UnboundSymbol(v));
            }
        }
        Ok(())
    }

    /// Depth-first search for a descendant still carrying a generator
    /// marker, i.e. a dynamic circuit that was never expanded.
    pub fn find_unexpanded(&self) -> Option<&Composite> {
        if self.is_unexpanded() {
            return Some(self);
        }
        self.children.iter().find_map(|n| match n {
            Node::Composite(c) => c.find_unexpanded(),
            Node::Instruction(_) => None,
        })
    }

    /// Substitute `values` for the declared variables (by position),
    /// producing a fully concrete, variable-free copy.
    pub fn evaluate(&self, values: &[f64]) -> Result<Composite, IrError> {
        if values.len() != self.variables.len() {
            return Err(IrError::LengthMismatch {
                name: self.name.clone(),
                expected: self.variables.len(),
                got: values.len(),
            });
        }
        if let Some(u) = self.find_unexpanded() {
            return Err(IrError::UnexpandedComposite(u.name().to_string()));
        }
        let bindings: BTreeMap<&str, f64> = self
            .variables
            .iter()
            .map(String::as_str)
            .zip(values.iter().copied())
            .collect();
        self.substitute(&|name| bindings.get(name).copied())
    }

    fn substitute(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<Composite, IrError> {
        let mut out = Composite::new(self.name.clone());
        for child in &self.children {
            match child {
                Node::Instruction(i) => out.add_instruction(i.bind(lookup)?),
                Node::Composite(c) => out.add_composite(c.substitute(lookup)?),
            }
        }
        Ok(out)
    }

    /// Rename variables throughout the tree (declarations and symbol
    /// references alike).
    pub fn rename_variables(&self, rename: &dyn Fn(&str) -> String) -> Composite {
        let mut out = Composite {
            name: self.name.clone(),
            variables: self.variables.iter().map(|v| rename(v)).collect(),
            children: Vec::new(),
            generator: self.generator.clone(),
        };
        for child in &self.children {
            match child {
                Node::Instruction(i) => {
                    let params: Vec<_> =
                        i.params().iter().map(|p| p.rename_variables(rename)).collect();
                    let renamed = Instruction::from_parts(
                        i.name(),
                        i.bits().to_vec(),
                        params,
                        i.is_enabled(),
                        i.explicit_cbits().map(<[usize]>::to_vec),
                    )
                    .expect("renaming preserves validity");
                    out.add_instruction(renamed);
                }
                Node::Composite(c) => out.add_composite(c.rename_variables(rename)),
            }
        }
        out
    }
}

impl core::fmt::Display for Composite {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.variables.is_empty() {
            write!(f, "({})", self.variables.join(", "))?;
        }
        write!(f, ": {} leaves", self.leaf_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::InstrParam;
    use alloc::vec;

    fn foo() -> Composite {
        // X 0; Ry(theta) 1; CX 1 0
        let mut c = Composite::with_variables("foo", ["theta"]);
        c.add_instruction(Instruction::gate("X", vec![0]).unwrap());
        c.add_instruction(
            Instruction::new("Ry", vec![1], vec![InstrParam::parse("theta").unwrap()]).unwrap(),
        );
        c.add_instruction(Instruction::gate("CX", vec![1, 0]).unwrap());
        c
    }

    #[test]
    fn construction_and_counts() {
        let c = foo();
        assert_eq!(c.name(), "foo");
        assert_eq!(c.variables(), ["theta"]);
        assert_eq!(c.leaf_count(), 3);
        assert_eq!(c.qubit_extent(), 2);
        c.validate_symbols().unwrap();
    }

    #[test]
    fn nested_leaves_count_recursively() {
        let mut outer = Composite::with_variables("outer", ["theta"]);
        outer.add_composite(foo());
        outer.add_instruction(Instruction::gate("H", vec![0]).unwrap());
        outer.add_instruction(Instruction::measure(0));
        assert_eq!(outer.n_children(), 3);
        assert_eq!(outer.leaf_count(), 5);
    }

    #[test]
    fn evaluate_substitutes_and_clears_variables() {
        let c = foo();
        let e = c.evaluate(&[core::f64::consts::PI]).unwrap();
        assert!(e.variables().is_empty());
        let leaves = e.leaves();
        assert_eq!(leaves[1].concrete_params().unwrap(), vec![core::f64::consts::PI]);
        // The original is untouched.
        assert!(c.leaves()[1].is_symbolic());
    }

    #[test]
    fn evaluate_arity_is_checked() {
        let err = foo().evaluate(&[]).unwrap_err();
        assert_eq!(
            err,
            IrError::LengthMismatch { name: "foo".into(), expected: 1, got: 0 }
        );
    }

    #[test]
    fn evaluate_rejects_undeclared_symbols() {
        let mut c = Composite::new("bad");
        c.add_instruction(
            Instruction::new("Rz", vec![0], vec![InstrParam::parse("phi").unwrap()]).unwrap(),
        );
        assert_eq!(c.evaluate(&[]).unwrap_err(), IrError::UnboundSymbol("phi".into()));
        assert!(c.validate_symbols().is_err());
    }

    #[test]
    fn unexpanded_composites_refuse_evaluation() {
        let mut outer = Composite::new("outer");
        outer.add_composite(Composite::unexpanded("qft", "qft"));
        assert_eq!(
            outer.evaluate(&[]).unwrap_err(),
            IrError::UnexpandedComposite("qft".into())
        );
    }

    #[test]
    fn disabled_leaves_are_excluded_from_enabled_view() {
        let mut c = foo();
        c.for_each_leaf_mut(&mut |i| {
            if i.name() == "X" {
                i.set_enabled(false);
            }
        });
        assert_eq!(c.leaf_count(), 3);
        assert_eq!(c.enabled_leaves().len(), 2);
    }
}
