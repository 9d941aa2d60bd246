use std::fmt::Write as _;
use std::str::FromStr;

use super::{FlowGraph, InstrKind};

/// Which links to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeSet {
    #[default]
    Cf,
    Df,
    Both,
}

impl EdgeSet {
    fn cf(self) -> bool {
        matches!(self, EdgeSet::Cf | EdgeSet::Both)
    }

    fn df(self) -> bool {
        matches!(self, EdgeSet::Df | EdgeSet::Both)
    }
}

impl FromStr for EdgeSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cf" => Ok(EdgeSet::Cf),
            "df" => Ok(EdgeSet::Df),
            "both" => Ok(EdgeSet::Both),
            other => Err(format!("unknown edge set `{other}` (expected cf, df or both)")),
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders one `digraph` per graph. Nodes are `n<id>` labelled with their txt;
/// control flow is drawn solid, data flow dashed.
pub fn graphs_to_dot<'a>(graphs: impl IntoIterator<Item = &'a FlowGraph>, edges: EdgeSet) -> String {
    let mut out = String::new();
    for graph in graphs {
        write_graph(&mut out, graph, edges);
    }
    out
}

fn write_graph(out: &mut String, graph: &FlowGraph, edges: EdgeSet) {
    let _ = writeln!(out, "digraph {} {{", quote(graph.method_name()));
    out.push_str("  node [shape=box];\n");
    for instr in graph.instrs() {
        let shape = match instr.kind() {
            InstrKind::Method | InstrKind::Exit => ", shape=ellipse",
            InstrKind::Expr => ", shape=diamond",
            _ => "",
        };
        let _ = writeln!(out, "  n{} [label={}{shape}];", instr.id().index(), quote(instr.txt()));
    }
    for instr in graph.instrs() {
        let from = instr.id().index();
        if edges.cf() {
            let branches = instr.cf_next().len() == 2;
            for (i, to) in instr.cf_next().iter().enumerate() {
                if branches {
                    let label = if i == 0 { "true" } else { "false" };
                    let _ = writeln!(out, "  n{from} -> n{} [label=\"{label}\"];", to.index());
                } else {
                    let _ = writeln!(out, "  n{from} -> n{};", to.index());
                }
            }
        }
        if edges.df() {
            for to in instr.df_next() {
                let _ = writeln!(out, "  n{from} -> n{} [style=dashed];", to.index());
            }
        }
    }
    out.push_str("}\n");
}
