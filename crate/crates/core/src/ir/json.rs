//! JSON persistence for the IR.
//!
//! The document layout is fixed and versionless:
//!
//! ```json
//! {"composites": [
//!   {"kind": "composite", "name": "foo", "variables": ["theta"],
//!    "children": [
//!      {"kind": "instruction", "name": "Ry", "bits": [1],
//!       "params": [{"t": "sym", "v": "theta"}], "enabled": true}
//!    ]}
//! ]}
//! ```
//!
//! Parameters are tagged `int` / `real` / `sym` / `txt`; symbolic
//! parameters persist as their canonical source text. `cbits` appears on
//! measurements only when explicitly set. Loading re-validates every
//! instruction against the catalog, so a structurally well-formed file
//! with an unknown gate still fails.
//!
//! Unexpanded dynamic composites have no schema representation: they
//! serialize as ordinary (empty) composites and lose their generator tag.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Composite, Instruction, InstrParam, IrContainer, IrError, Node, SymExpr};

#[derive(Serialize, Deserialize)]
struct Document {
    composites: Vec<NodeDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NodeDto {
    Composite {
        name: String,
        variables: Vec<String>,
        children: Vec<NodeDto>,
    },
    Instruction {
        name: String,
        bits: Vec<usize>,
        params: Vec<ParamDto>,
        enabled: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        cbits: Option<Vec<usize>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t", content = "v", rename_all = "lowercase")]
enum ParamDto {
    Int(i64),
    Real(f64),
    Sym(String),
    Txt(String),
}

fn param_to_dto(p: &InstrParam) -> ParamDto {
    match p {
        InstrParam::Int(v) => ParamDto::Int(*v),
        InstrParam::Real(v) => ParamDto::Real(*v),
        InstrParam::Sym(s) => ParamDto::Sym(s.text().to_string()),
        InstrParam::Text(s) => ParamDto::Txt(s.clone()),
    }
}

fn param_from_dto(p: ParamDto) -> Result<InstrParam, IrError> {
    Ok(match p {
        ParamDto::Int(v) => InstrParam::Int(v),
        ParamDto::Real(v) => InstrParam::Real(v),
        ParamDto::Sym(text) => InstrParam::Sym(SymExpr::parse(&text)?),
        ParamDto::Txt(s) => InstrParam::Text(s),
    })
}

fn composite_to_dto(c: &Composite) -> NodeDto {
    NodeDto::Composite {
        name: c.name().to_string(),
        variables: c.variables().to_vec(),
        children: c
            .children()
            .iter()
            .map(|n| match n {
                Node::Instruction(i) => NodeDto::Instruction {
                    name: i.name().to_string(),
                    bits: i.bits().to_vec(),
                    params: i.params().iter().map(param_to_dto).collect(),
                    enabled: i.is_enabled(),
                    cbits: i.explicit_cbits().map(<[usize]>::to_vec),
                },
                Node::Composite(c) => composite_to_dto(c),
            })
            .collect(),
    }
}

fn composite_from_dto(dto: NodeDto) -> Result<Composite, IrError> {
    match dto {
        NodeDto::Instruction { name, .. } => Err(semantic_error(format!(
            "expected a composite, found instruction `{name}` at top level"
        ))),
        NodeDto::Composite { name, variables, children } => {
            let mut c = Composite::with_variables(name, variables);
            for child in children {
                match child {
                    NodeDto::Instruction { name, bits, params, enabled, cbits } => {
                        let params = params
                            .into_iter()
                            .map(param_from_dto)
                            .collect::<Result<Vec<_>, _>>()?;
                        c.add_instruction(Instruction::from_parts(
                            &name, bits, params, enabled, cbits,
                        )?);
                    }
                    nested @ NodeDto::Composite { .. } => {
                        c.add_composite(composite_from_dto(nested)?);
                    }
                }
            }
            Ok(c)
        }
    }
}

fn semantic_error(msg: String) -> IrError {
    IrError::Parse { line: 0, column: 0, msg }
}

fn syntax_error(err: serde_json::Error) -> IrError {
    IrError::Parse { line: err.line(), column: err.column(), msg: err.to_string() }
}

/// Serialize a container to the persistence document.
pub fn to_json(ir: &IrContainer) -> String {
    let doc = Document { composites: ir.iter().map(composite_to_dto).collect() };
    serde_json::to_string(&doc).expect("IR serialization is infallible")
}

/// Pretty-printed variant of [`to_json`] for files meant to be read.
pub fn to_json_pretty(ir: &IrContainer) -> String {
    let doc = Document { composites: ir.iter().map(composite_to_dto).collect() };
    serde_json::to_string_pretty(&doc).expect("IR serialization is infallible")
}

/// Parse a persistence document back into a container.
pub fn from_json(text: &str) -> Result<IrContainer, IrError> {
    let doc: Document = serde_json::from_str(text).map_err(syntax_error)?;
    doc.composites.into_iter().map(composite_from_dto).collect()
}

/// Serialize one composite (the form used by the remote wire protocol).
pub fn composite_to_json(c: &Composite) -> String {
    serde_json::to_string(&composite_to_dto(c)).expect("IR serialization is infallible")
}

/// Parse one composite.
pub fn composite_from_json(text: &str) -> Result<Composite, IrError> {
    let dto: NodeDto = serde_json::from_str(text).map_err(syntax_error)?;
    composite_from_dto(dto)
}

/// The serde value of one composite, for embedding into larger documents.
pub fn composite_to_value(c: &Composite) -> serde_json::Value {
    serde_json::to_value(composite_to_dto(c)).expect("IR serialization is infallible")
}

/// Reconstruct a composite from an embedded serde value.
pub fn composite_from_value(value: serde_json::Value) -> Result<Composite, IrError> {
    let dto: NodeDto = serde_json::from_value(value)
        .map_err(|e| semantic_error(e.to_string()))?;
    composite_from_dto(dto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fig_like_container() -> IrContainer {
        let mut foo = Composite::with_variables("foo", ["theta"]);
        foo.add_instruction(Instruction::gate("X", [0]).unwrap());
        foo.add_instruction(
            Instruction::new("Ry", [1], [InstrParam::parse("theta/2").unwrap()]).unwrap(),
        );
        foo.add_instruction(Instruction::gate("CNOT", [1, 0]).unwrap());
        foo.add_instruction(Instruction::measure(0));
        let mut ir = IrContainer::new();
        ir.add(foo);
        ir
    }

    #[test]
    fn round_trip_is_structurally_identical() {
        let ir = fig_like_container();
        let text = to_json(&ir);
        let back = from_json(&text).unwrap();
        assert_eq!(ir, back);
    }

    #[test]
    fn schema_is_bit_exact_for_a_known_circuit() {
        let mut c = Composite::with_variables("k", ["theta"]);
        c.add_instruction(
            Instruction::new("Ry", [1], [InstrParam::parse("theta/2").unwrap()]).unwrap(),
        );
        let mut m = Instruction::measure(0);
        m.set_cbits(vec![2]);
        c.add_instruction(m);
        let mut ir = IrContainer::new();
        ir.add(c);
        assert_eq!(
            to_json(&ir),
            r#"{"composites":[{"kind":"composite","name":"k","variables":["theta"],"children":[{"kind":"instruction","name":"Ry","bits":[1],"params":[{"t":"sym","v":"theta/2"}],"enabled":true},{"kind":"instruction","name":"Measure","bits":[0],"params":[],"enabled":true,"cbits":[2]}]}]}"#
        );
    }

    #[test]
    fn default_cbits_are_omitted() {
        let mut c = Composite::new("m");
        c.add_instruction(Instruction::measure(1));
        let mut ir = IrContainer::new();
        ir.add(c);
        let text = to_json(&ir);
        assert!(!text.contains("cbits"));
        let back = from_json(&text).unwrap();
        assert_eq!(back.get("m").unwrap().leaves()[0].cbits(), vec![1]);
    }

    #[test]
    fn param_tags_cover_all_variants() {
        let mut c = Composite::with_variables("p", ["t"]);
        c.add_instruction(
            Instruction::new("Rz", [0], [InstrParam::Real(0.25)]).unwrap(),
        );
        c.add_instruction(
            Instruction::new("Rx", [0], [InstrParam::parse("2*t").unwrap()]).unwrap(),
        );
        let mut ir = IrContainer::new();
        ir.add(c);
        let text = to_json(&ir);
        assert!(text.contains(r#"{"t":"real","v":0.25}"#));
        assert!(text.contains(r#"{"t":"sym","v":"2*t"}"#));
        assert_eq!(from_json(&text).unwrap(), ir);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = from_json("{\"composites\": [ {\"kind\": }").unwrap_err();
        match err {
            IrError::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_gate_in_valid_json_is_rejected() {
        let text = r#"{"composites":[{"kind":"composite","name":"c","variables":[],"children":[{"kind":"instruction","name":"Quux","bits":[0],"params":[],"enabled":true}]}]}"#;
        let err = from_json(text).unwrap_err();
        assert!(matches!(err, IrError::UnknownInstruction(name) if name == "Quux"));
    }

    #[test]
    fn disabled_and_nested_structure_survive() {
        let mut inner = Composite::with_variables("inner", ["t"]);
        inner.add_instruction(
            Instruction::new("Ry", [0], [InstrParam::parse("-2*t").unwrap()]).unwrap(),
        );
        let mut outer = Composite::with_variables("outer", ["t"]);
        let mut x = Instruction::gate("X", [1]).unwrap();
        x.set_enabled(false);
        outer.add_instruction(x);
        outer.add_composite(inner);
        let mut ir = IrContainer::new();
        ir.add(outer);
        let back = from_json(&to_json(&ir)).unwrap();
        assert_eq!(back, ir);
        let outer_back = back.get("outer").unwrap();
        assert!(!outer_back.leaves()[0].is_enabled());
        assert_eq!(outer_back.children()[1].as_composite().unwrap().name(), "inner");
    }

    #[test]
    fn single_composite_form_round_trips() {
        let ir = fig_like_container();
        let c = ir.get("foo").unwrap();
        let text = composite_to_json(c);
        let back = composite_from_json(&text).unwrap();
        assert_eq!(&back, c);
    }
}
