//! The flow-graph target model.
//!
//! A [`FlowGraph`] owns its instructions in an arena. Instructions are
//! addressed by [`InstrId`], which also records the owning graph so that links
//! between two graphs can be refused. `cf_prev` is never written directly: it
//! is maintained by [`FlowGraph::link_cf`] as the inverse of `cf_next`.

mod dot;
mod xml;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use indexmap::IndexSet;
use thiserror::Error;

pub use dot::{graphs_to_dot, EdgeSet};
pub use xml::{graphs_from_xml, graphs_to_xml, XmlError};

static NEXT_GRAPH: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphId(u64);

impl GraphId {
    fn fresh() -> Self {
        GraphId(NEXT_GRAPH.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstrId {
    graph: GraphId,
    index: u32,
}

impl InstrId {
    /// Position in document order; also the serialized id.
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn graph(self) -> GraphId {
        self.graph
    }
}

impl fmt::Display for InstrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstrKind {
    Method,
    Exit,
    Simple,
    Expr,
    Return,
    Break,
    Continue,
    Label,
}

impl InstrKind {
    pub const ALL: [InstrKind; 8] = [
        InstrKind::Method,
        InstrKind::Exit,
        InstrKind::Simple,
        InstrKind::Expr,
        InstrKind::Return,
        InstrKind::Break,
        InstrKind::Continue,
        InstrKind::Label,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstrKind::Method => "method",
            InstrKind::Exit => "exit",
            InstrKind::Simple => "simple",
            InstrKind::Expr => "expr",
            InstrKind::Return => "return",
            InstrKind::Break => "break",
            InstrKind::Continue => "continue",
            InstrKind::Label => "label",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarOrigin {
    Param,
    Local,
}

impl VarOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            VarOrigin::Param => "param",
            VarOrigin::Local => "local",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDef {
    pub name: String,
    pub origin: VarOrigin,
}

#[derive(Debug, Clone)]
pub struct FlowInstr {
    id: InstrId,
    txt: String,
    kind: InstrKind,
    cf_next: IndexSet<InstrId>,
    cf_prev: IndexSet<InstrId>,
    df_next: IndexSet<InstrId>,
    defs: BTreeSet<VarId>,
    uses: BTreeSet<VarId>,
}

impl FlowInstr {
    pub fn id(&self) -> InstrId {
        self.id
    }

    pub fn txt(&self) -> &str {
        &self.txt
    }

    pub fn kind(&self) -> InstrKind {
        self.kind
    }

    /// Control-flow successors. For a condition, index 0 is the true branch.
    pub fn cf_next(&self) -> &IndexSet<InstrId> {
        &self.cf_next
    }

    pub fn cf_prev(&self) -> &IndexSet<InstrId> {
        &self.cf_prev
    }

    pub fn df_next(&self) -> &IndexSet<InstrId> {
        &self.df_next
    }

    pub fn defs(&self) -> &BTreeSet<VarId> {
        &self.defs
    }

    pub fn uses(&self) -> &BTreeSet<VarId> {
        &self.uses
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cannot link {from} to {to}: they belong to different graphs")]
    CrossGraphLink { from: InstrId, to: InstrId },
    #[error("instruction {0} does not exist in this graph")]
    UnknownInstr(InstrId),
    #[error("variable #{0} does not exist in this graph")]
    UnknownVar(usize),
    #[error("variable `{0}` is already defined in this graph")]
    DuplicateVar(String),
    #[error("the graph already has an exit node")]
    ExitExists,
}

#[derive(Debug, Clone)]
pub struct FlowGraph {
    id: GraphId,
    method_name: String,
    instrs: Vec<FlowInstr>,
    vars: Vec<VarDef>,
    exit: Option<InstrId>,
}

impl FlowGraph {
    /// Creates a graph holding only the method entry node, `<name>()`.
    pub fn new(method_name: impl Into<String>) -> Self {
        let method_name = method_name.into();
        let mut graph = FlowGraph {
            id: GraphId::fresh(),
            method_name: String::new(),
            instrs: Vec::new(),
            vars: Vec::new(),
            exit: None,
        };
        graph.push(InstrKind::Method, format!("{method_name}()"));
        graph.method_name = method_name;
        graph
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn method_name(&self) -> &str {
        &self.method_name
    }

    pub fn method(&self) -> InstrId {
        self.instrs[0].id
    }

    pub fn exit(&self) -> Option<InstrId> {
        self.exit
    }

    pub fn instrs(&self) -> &[FlowInstr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn vars(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &VarDef {
        &self.vars[id.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(|i| VarId(i as u32))
    }

    pub fn get(&self, id: InstrId) -> Option<&FlowInstr> {
        if id.graph != self.id {
            return None;
        }
        self.instrs.get(id.index())
    }

    /// Id of the instruction at a document-order position.
    pub fn id_at(&self, index: usize) -> Option<InstrId> {
        self.instrs.get(index).map(|i| i.id)
    }

    fn push(&mut self, kind: InstrKind, txt: String) -> InstrId {
        let id = InstrId {
            graph: self.id,
            index: u32::try_from(self.instrs.len()).expect("graph too large"),
        };
        self.instrs.push(FlowInstr {
            id,
            txt,
            kind,
            cf_next: IndexSet::new(),
            cf_prev: IndexSet::new(),
            df_next: IndexSet::new(),
            defs: BTreeSet::new(),
            uses: BTreeSet::new(),
        });
        id
    }

    /// Appends an instruction. Method and exit nodes have dedicated constructors.
    pub fn add_instr(&mut self, kind: InstrKind, txt: impl Into<String>) -> InstrId {
        assert!(
            !matches!(kind, InstrKind::Method | InstrKind::Exit),
            "method and exit nodes are created by the graph itself"
        );
        self.push(kind, txt.into())
    }

    /// Appends the exit node; it closes the document order.
    pub fn add_exit(&mut self) -> Result<InstrId, ModelError> {
        if self.exit.is_some() {
            return Err(ModelError::ExitExists);
        }
        let id = self.push(InstrKind::Exit, "Exit".to_string());
        self.exit = Some(id);
        Ok(id)
    }

    pub fn add_var(&mut self, name: impl Into<String>, origin: VarOrigin) -> Result<VarId, ModelError> {
        let name = name.into();
        if self.var_by_name(&name).is_some() {
            return Err(ModelError::DuplicateVar(name));
        }
        self.vars.push(VarDef { name, origin });
        Ok(VarId(self.vars.len() as u32 - 1))
    }

    fn check(&self, id: InstrId) -> Result<usize, ModelError> {
        if id.index() < self.instrs.len() && id.graph == self.id {
            Ok(id.index())
        } else {
            Err(ModelError::UnknownInstr(id))
        }
    }

    fn check_pair(&self, source: InstrId, target: InstrId) -> Result<(usize, usize), ModelError> {
        if source.graph != target.graph {
            return Err(ModelError::CrossGraphLink {
                from: source,
                to: target,
            });
        }
        Ok((self.check(source)?, self.check(target)?))
    }

    fn check_var(&self, var: VarId) -> Result<(), ModelError> {
        if var.index() < self.vars.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownVar(var.index()))
        }
    }

    pub fn add_def(&mut self, instr: InstrId, var: VarId) -> Result<(), ModelError> {
        let i = self.check(instr)?;
        self.check_var(var)?;
        self.instrs[i].defs.insert(var);
        Ok(())
    }

    pub fn add_use(&mut self, instr: InstrId, var: VarId) -> Result<(), ModelError> {
        let i = self.check(instr)?;
        self.check_var(var)?;
        self.instrs[i].uses.insert(var);
        Ok(())
    }

    /// Adds a control-flow edge; repeated calls are no-ops.
    pub fn link_cf(&mut self, source: InstrId, target: InstrId) -> Result<(), ModelError> {
        let (s, t) = self.check_pair(source, target)?;
        self.instrs[s].cf_next.insert(target);
        self.instrs[t].cf_prev.insert(source);
        Ok(())
    }

    /// Adds a data-flow edge from a definition to a use; repeated calls are no-ops.
    pub fn link_df(&mut self, source: InstrId, target: InstrId) -> Result<(), ModelError> {
        let (s, _) = self.check_pair(source, target)?;
        self.instrs[s].df_next.insert(target);
        Ok(())
    }

    pub fn clear_df(&mut self) {
        for instr in &mut self.instrs {
            instr.df_next.clear();
        }
    }

    /// Puts every `df_next` list in document order.
    pub fn sort_df(&mut self) {
        for instr in &mut self.instrs {
            instr.df_next.sort();
        }
    }

    pub fn cf_edge_count(&self) -> usize {
        self.instrs.iter().map(|i| i.cf_next.len()).sum()
    }

    pub fn df_edge_count(&self) -> usize {
        self.instrs.iter().map(|i| i.df_next.len()).sum()
    }

    /// All `(source, target)` control-flow edges in document order.
    pub fn cf_edges(&self) -> Vec<(InstrId, InstrId)> {
        self.instrs
            .iter()
            .flat_map(|i| i.cf_next.iter().map(move |&t| (i.id, t)))
            .collect()
    }

    pub fn df_edges(&self) -> Vec<(InstrId, InstrId)> {
        self.instrs
            .iter()
            .flat_map(|i| i.df_next.iter().map(move |&t| (i.id, t)))
            .collect()
    }

    /// Instructions whose txt equals `txt`.
    pub fn find_by_txt<'a>(&'a self, txt: &'a str) -> impl Iterator<Item = InstrId> + 'a {
        self.instrs.iter().filter(move |i| i.txt == txt).map(|i| i.id)
    }

    pub fn to_xml(&self) -> String {
        graphs_to_xml([self])
    }

    /// Loads a document that holds exactly one graph.
    pub fn from_xml(text: &str) -> Result<FlowGraph, XmlError> {
        let mut graphs = graphs_from_xml(text)?;
        if graphs.len() != 1 {
            return Err(XmlError {
                offset: 0,
                message: format!("expected one graph, found {}", graphs.len()),
            });
        }
        Ok(graphs.remove(0))
    }

    pub fn to_dot(&self, edges: EdgeSet) -> String {
        graphs_to_dot([self], edges)
    }

    /// Checks the structural invariants of the model.
    pub fn audit(&self) -> Result<(), AuditError> {
        let fail = |message: String| Err(AuditError { message });
        match self.instrs.first() {
            Some(i) if i.kind == InstrKind::Method => {}
            _ => return fail("first instruction is not the method node".into()),
        }
        let methods = self.instrs.iter().filter(|i| i.kind == InstrKind::Method).count();
        let exits = self.instrs.iter().filter(|i| i.kind == InstrKind::Exit).count();
        if methods != 1 || exits != 1 {
            return fail(format!(
                "expected one method and one exit node, found {methods} and {exits}"
            ));
        }
        for (index, instr) in self.instrs.iter().enumerate() {
            if instr.id.index() != index || instr.id.graph != self.id {
                return fail(format!("instruction at {index} carries foreign id {}", instr.id));
            }
            if instr.txt.is_empty() {
                return fail(format!("instruction {} has empty txt", instr.id));
            }
            for &next in &instr.cf_next {
                let Some(target) = self.get(next) else {
                    return fail(format!("{} has cfNext {next} outside the graph", instr.id));
                };
                if !target.cf_prev.contains(&instr.id) {
                    return fail(format!("{next} lacks cfPrev {}", instr.id));
                }
            }
            for &prev in &instr.cf_prev {
                let Some(source) = self.get(prev) else {
                    return fail(format!("{} has cfPrev {prev} outside the graph", instr.id));
                };
                if !source.cf_next.contains(&instr.id) {
                    return fail(format!("{prev} lacks cfNext {}", instr.id));
                }
            }
            if let Some(&t) = instr.df_next.iter().find(|&&t| self.get(t).is_none()) {
                return fail(format!("{} has dfNext {t} outside the graph", instr.id));
            }
            let max_out = match instr.kind {
                InstrKind::Exit => 0,
                InstrKind::Expr => 2,
                _ => 1,
            };
            if instr.cf_next.len() > max_out {
                return fail(format!(
                    "{} ({}) has {} control-flow successors",
                    instr.id,
                    instr.kind.as_str(),
                    instr.cf_next.len()
                ));
            }
            if instr.kind != InstrKind::Method && instr.defs.len() > 1 {
                return fail(format!("{} defines more than one variable", instr.id));
            }
            if instr
                .defs
                .iter()
                .chain(&instr.uses)
                .any(|v| v.index() >= self.vars.len())
            {
                return fail(format!("{} references an unknown variable", instr.id));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("flow graph invariant violated: {message}")]
pub struct AuditError {
    pub message: String,
}

#[cfg(test)]
mod tests;
