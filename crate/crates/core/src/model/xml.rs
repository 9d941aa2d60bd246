//! XML persistence of flow graphs.
//!
//! ```xml
//! <flowgraphs>
//!   <graph method="f">
//!     <var name="a" origin="param"/>
//!     <instr id="0" kind="method" txt="f()">
//!       <def var="a"/>
//!       <cfNext ref="1"/>
//!     </instr>
//!     ...
//!   </graph>
//! </flowgraphs>
//! ```
//!
//! `cfPrev` is not written; it is rebuilt from `cfNext` on load.

use std::fmt::Write as _;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

use super::{FlowGraph, GraphId, InstrKind, VarDef, VarId, VarOrigin};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid flow graph XML at byte {offset}: {message}")]
pub struct XmlError {
    pub offset: u64,
    pub message: String,
}

pub fn graphs_to_xml<'a>(graphs: impl IntoIterator<Item = &'a FlowGraph>) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<flowgraphs>\n");
    for graph in graphs {
        write_graph(&mut out, graph);
    }
    out.push_str("</flowgraphs>\n");
    out
}

fn write_graph(out: &mut String, graph: &FlowGraph) {
    let _ = writeln!(out, "  <graph method=\"{}\">", escape(graph.method_name()));
    for var in graph.vars() {
        let _ = writeln!(
            out,
            "    <var name=\"{}\" origin=\"{}\"/>",
            escape(var.name.as_str()),
            var.origin.as_str()
        );
    }
    for instr in graph.instrs() {
        let head = format!(
            "    <instr id=\"{}\" kind=\"{}\" txt=\"{}\"",
            instr.id.index(),
            instr.kind.as_str(),
            escape(instr.txt.as_str())
        );
        let mut children = String::new();
        for v in &instr.defs {
            let _ = writeln!(children, "      <def var=\"{}\"/>", escape(graph.var(*v).name.as_str()));
        }
        for v in &instr.uses {
            let _ = writeln!(children, "      <use var=\"{}\"/>", escape(graph.var(*v).name.as_str()));
        }
        for t in &instr.cf_next {
            let _ = writeln!(children, "      <cfNext ref=\"{}\"/>", t.index());
        }
        for t in &instr.df_next {
            let _ = writeln!(children, "      <dfNext ref=\"{}\"/>", t.index());
        }
        if children.is_empty() {
            let _ = writeln!(out, "{head}/>");
        } else {
            let _ = writeln!(out, "{head}>\n{children}    </instr>");
        }
    }
    out.push_str("  </graph>\n");
}

#[derive(Default)]
struct InstrRecord {
    id: usize,
    kind: Option<InstrKind>,
    txt: String,
    defs: Vec<String>,
    uses: Vec<String>,
    cf_next: Vec<usize>,
    df_next: Vec<usize>,
}

#[derive(Default)]
struct GraphRecord {
    method: String,
    vars: Vec<VarDef>,
    instrs: Vec<InstrRecord>,
}

pub fn graphs_from_xml(text: &str) -> Result<Vec<FlowGraph>, XmlError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut graphs = Vec::new();
    let mut current: Option<GraphRecord> = None;
    let mut in_root = false;
    let mut in_instr = false;
    loop {
        let offset = reader.buffer_position();
        let err = |message: String| XmlError { offset, message };
        let event = reader.read_event().map_err(|e| err(e.to_string()))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let empty = matches!(event, Event::Empty(_));
                let name = e.name().as_ref().to_vec();
                match (name.as_slice(), in_root, current.is_some(), in_instr) {
                    (b"flowgraphs", false, _, _) => in_root = !empty,
                    (b"graph", true, false, _) => {
                        let record = GraphRecord {
                            method: attr(e, "method").map_err(err)?,
                            ..GraphRecord::default()
                        };
                        if empty {
                            graphs.push(build(record).map_err(err)?);
                        } else {
                            current = Some(record);
                        }
                    }
                    (b"var", true, true, false) => {
                        let origin = match attr(e, "origin").map_err(err)?.as_str() {
                            "param" => VarOrigin::Param,
                            "local" => VarOrigin::Local,
                            other => return Err(err(format!("unknown variable origin `{other}`"))),
                        };
                        let name = attr(e, "name").map_err(err)?;
                        current.as_mut().unwrap().vars.push(VarDef { name, origin });
                    }
                    (b"instr", true, true, false) => {
                        let kind = attr(e, "kind").map_err(err)?;
                        let record = InstrRecord {
                            id: number(e, "id").map_err(err)?,
                            kind: Some(
                                InstrKind::parse(&kind)
                                    .ok_or_else(|| err(format!("unknown instruction kind `{kind}`")))?,
                            ),
                            txt: attr(e, "txt").map_err(err)?,
                            ..InstrRecord::default()
                        };
                        current.as_mut().unwrap().instrs.push(record);
                        in_instr = !empty;
                    }
                    (b"def" | b"use" | b"cfNext" | b"dfNext", true, true, true) if empty => {
                        let instr = current.as_mut().unwrap().instrs.last_mut().unwrap();
                        match name.as_slice() {
                            b"def" => instr.defs.push(attr(e, "var").map_err(err)?),
                            b"use" => instr.uses.push(attr(e, "var").map_err(err)?),
                            b"cfNext" => instr.cf_next.push(number(e, "ref").map_err(err)?),
                            _ => instr.df_next.push(number(e, "ref").map_err(err)?),
                        }
                    }
                    _ => return Err(err(format!("unexpected element <{}>", String::from_utf8_lossy(&name)))),
                }
            }
            Event::End(e) => match e.name().as_ref() {
                b"instr" => in_instr = false,
                b"graph" => {
                    let record = current.take().ok_or_else(|| err("unbalanced </graph>".into()))?;
                    graphs.push(build(record).map_err(err)?);
                }
                b"flowgraphs" => in_root = false,
                other => return Err(err(format!("unexpected </{}>", String::from_utf8_lossy(other)))),
            },
            Event::Text(t) => {
                let text = t.unescape().map_err(|e| err(e.to_string()))?;
                if !text.trim().is_empty() {
                    return Err(err(format!("unexpected text `{}`", text.trim())));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if current.is_some() || in_root {
        return Err(XmlError {
            offset: text.len() as u64,
            message: "unexpected end of document".into(),
        });
    }
    Ok(graphs)
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<String, String> {
    for a in e.attributes() {
        let a = a.map_err(|e| e.to_string())?;
        if a.key.as_ref() == key.as_bytes() {
            return a.unescape_value().map(|v| v.into_owned()).map_err(|e| e.to_string());
        }
    }
    Err(format!(
        "<{}> lacks attribute `{key}`",
        String::from_utf8_lossy(e.name().as_ref())
    ))
}

fn number(e: &BytesStart<'_>, key: &str) -> Result<usize, String> {
    let v = attr(e, key)?;
    v.parse()
        .map_err(|_| format!("attribute `{key}` is not a number: `{v}`"))
}

fn build(record: GraphRecord) -> Result<FlowGraph, String> {
    let mut graph = FlowGraph {
        id: GraphId::fresh(),
        method_name: record.method,
        instrs: Vec::new(),
        vars: Vec::new(),
        exit: None,
    };
    for var in record.vars {
        graph.add_var(var.name, var.origin).map_err(|e| e.to_string())?;
    }
    let var = |graph: &FlowGraph, name: &str| -> Result<VarId, String> {
        graph
            .var_by_name(name)
            .ok_or_else(|| format!("undeclared variable `{name}`"))
    };
    for (index, r) in record.instrs.iter().enumerate() {
        if r.id != index {
            return Err(format!(
                "instruction ids must be 0..n in order; found {} at {index}",
                r.id
            ));
        }
        let kind = r.kind.expect("kind is parsed with the element");
        let id = graph.push(kind, r.txt.clone());
        if kind == InstrKind::Exit {
            if graph.exit.is_some() {
                return Err("more than one exit node".into());
            }
            graph.exit = Some(id);
        }
        for name in &r.defs {
            let v = var(&graph, name)?;
            graph.instrs[index].defs.insert(v);
        }
        for name in &r.uses {
            let v = var(&graph, name)?;
            graph.instrs[index].uses.insert(v);
        }
    }
    for (index, r) in record.instrs.iter().enumerate() {
        let source = graph.instrs[index].id;
        for &t in &r.cf_next {
            let target = graph.id_at(t).ok_or_else(|| format!("cfNext ref {t} out of range"))?;
            graph.link_cf(source, target).map_err(|e| e.to_string())?;
        }
        for &t in &r.df_next {
            let target = graph.id_at(t).ok_or_else(|| format!("dfNext ref {t} out of range"))?;
            graph.link_df(source, target).map_err(|e| e.to_string())?;
        }
    }
    graph.audit().map_err(|e| e.to_string())?;
    Ok(graph)
}
