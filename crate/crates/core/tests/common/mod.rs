#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use flowgraphs::frontend::{ast::MethodDecl, parse_java, CompilationUnit};
use flowgraphs::model::FlowGraph;
use flowgraphs::pipeline::{transform_method_observed, Options, PhaseTimes, Stage};
use flowgraphs::validator::{parse_assertions, Command};

pub struct Program {
    pub name: String,
    pub dir: PathBuf,
    pub source: String,
}

impl Program {
    pub fn unit(&self) -> CompilationUnit {
        parse_java(&self.source).unwrap_or_else(|e| panic!("{}: {e}", self.name))
    }

    pub fn read(&self, file: &str) -> String {
        std::fs::read_to_string(self.dir.join(file)).unwrap_or_else(|e| panic!("{}/{file}: {e}", self.name))
    }
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every program under `corpus/`, sorted by name.
pub fn corpus() -> Vec<Program> {
    let mut out: Vec<Program> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_dir())
        .map(|dir| Program {
            name: dir.file_name().unwrap().to_string_lossy().into_owned(),
            source: std::fs::read_to_string(dir.join("input.java")).unwrap(),
            dir,
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Runs the pipeline on `method`, auditing the graph after every stage.
/// Returns the graph and the number of audits performed.
pub fn audited_method(method: &MethodDecl, options: Options) -> (FlowGraph, usize) {
    let mut audits = 0;
    let graph = transform_method_observed(
        method,
        options,
        &mut PhaseTimes::default(),
        &mut |stage: Stage, g: &FlowGraph| {
            if let Err(e) = g.audit() {
                panic!("{} after {stage:?}: {e}", g.method_name());
            }
            audits += 1;
        },
    )
    .unwrap_or_else(|e| panic!("{}: {e}", method.name));
    (graph, audits)
}

pub fn audited(unit: &CompilationUnit) -> Vec<FlowGraph> {
    unit.methods()
        .map(|m| audited_method(m, Options::default()).0)
        .collect()
}

/// Edges of a graph as `(source txt, target txt)` pairs.
pub fn txt_edges(
    graph: &FlowGraph,
    edges: Vec<(flowgraphs::model::InstrId, flowgraphs::model::InstrId)>,
) -> BTreeSet<(String, String)> {
    let txt = |id| graph.get(id).unwrap().txt().to_string();
    edges.into_iter().map(|(s, t)| (txt(s), txt(t))).collect()
}

/// Pairs listed with `command` in an assertion file.
pub fn listed_edges(text: &str, command: Command) -> Vec<(String, String)> {
    parse_assertions(text)
        .unwrap()
        .into_iter()
        .filter(|a| a.command == command)
        .map(|a| (a.source, a.target))
        .collect()
}

/// True when no two instructions share a txt.
pub fn txt_unique(graph: &FlowGraph) -> bool {
    let set: BTreeSet<&str> = graph.instrs().iter().map(|i| i.txt()).collect();
    set.len() == graph.len()
}
