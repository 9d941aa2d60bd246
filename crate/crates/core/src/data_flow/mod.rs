//! Data-flow edges: from each definition, follow the control flow until the
//! variable is redefined, linking every instruction on the way that reads it.

use std::collections::{BTreeSet, VecDeque};

use crate::model::{FlowGraph, InstrId, VarId};

/// A def-use triple: `(definition, use, variable)`.
pub type DefUse = (InstrId, InstrId, VarId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFlowAlgorithm {
    /// A walk per definition, as the model prescribes.
    #[default]
    Traversal,
    /// Iterative reaching definitions.
    Fixpoint,
}

impl std::str::FromStr for DataFlowAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "traversal" => Ok(DataFlowAlgorithm::Traversal),
            "fixpoint" => Ok(DataFlowAlgorithm::Fixpoint),
            other => Err(format!(
                "unknown data-flow algorithm `{other}` (expected traversal or fixpoint)"
            )),
        }
    }
}

/// Replaces the data-flow edges of `graph` with the def-use chains found by
/// walking the control flow from every definition.
pub fn derive_data_flow(graph: &mut FlowGraph) {
    let triples = traversal_triples(graph);
    apply(graph, &triples);
}

/// Like [`derive_data_flow`], choosing the algorithm.
pub fn derive_data_flow_with(graph: &mut FlowGraph, algorithm: DataFlowAlgorithm) {
    let triples = match algorithm {
        DataFlowAlgorithm::Traversal => traversal_triples(graph),
        DataFlowAlgorithm::Fixpoint => oracle_reaching_defs(graph),
    };
    apply(graph, &triples);
}

fn apply(graph: &mut FlowGraph, triples: &BTreeSet<DefUse>) {
    graph.clear_df();
    for &(d, u, _) in triples {
        graph.link_df(d, u).expect("instructions come from the same graph");
    }
    graph.sort_df();
}

/// The def-use triples found by the per-definition walk, without touching
/// the graph.
pub fn traversal_triples(graph: &FlowGraph) -> BTreeSet<DefUse> {
    let instrs = graph.instrs();
    let mut out = BTreeSet::new();
    let mut stamp = vec![0u32; instrs.len()];
    let mut round = 0u32;
    let mut stack = Vec::new();
    for d in instrs {
        for &v in d.defs() {
            round += 1;
            stack.clear();
            stack.extend(d.cf_next().iter().rev().copied());
            while let Some(u) = stack.pop() {
                let i = u.index();
                if stamp[i] == round {
                    continue;
                }
                stamp[i] = round;
                let instr = &instrs[i];
                if instr.uses().contains(&v) {
                    out.insert((d.id(), u, v));
                }
                if instr.defs().contains(&v) {
                    continue;
                }
                stack.extend(instr.cf_next().iter().rev().copied());
            }
        }
    }
    out
}

/// Classic reaching definitions, iterated to a fixed point over `cf_prev`:
/// `OUT[n] = GEN[n] ∪ (IN[n] − KILL[n])`, `IN[n] = ∪ OUT[p]`.
pub fn oracle_reaching_defs(graph: &FlowGraph) -> BTreeSet<DefUse> {
    let instrs = graph.instrs();
    let n = instrs.len();
    let mut reach_in: Vec<BTreeSet<(VarId, usize)>> = vec![BTreeSet::new(); n];
    let mut reach_out: Vec<BTreeSet<(VarId, usize)>> = vec![BTreeSet::new(); n];
    let mut queued = vec![true; n];
    let mut work: VecDeque<usize> = (0..n).collect();
    while let Some(i) = work.pop_front() {
        queued[i] = false;
        let instr = &instrs[i];
        let mut incoming = BTreeSet::new();
        for p in instr.cf_prev() {
            incoming.extend(reach_out[p.index()].iter().copied());
        }
        let mut outgoing: BTreeSet<(VarId, usize)> = incoming
            .iter()
            .copied()
            .filter(|(v, _)| !instr.defs().contains(v))
            .collect();
        outgoing.extend(instr.defs().iter().map(|&v| (v, i)));
        reach_in[i] = incoming;
        if outgoing != reach_out[i] {
            reach_out[i] = outgoing;
            for s in instr.cf_next() {
                let s = s.index();
                if !queued[s] {
                    queued[s] = true;
                    work.push_back(s);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, instr) in instrs.iter().enumerate() {
        for &(v, d) in &reach_in[i] {
            if instr.uses().contains(&v) {
                out.insert((instrs[d].id(), instr.id(), v));
            }
        }
    }
    out
}

/// Drops the variable, leaving the instruction pairs that become edges.
pub fn edge_pairs(triples: &BTreeSet<DefUse>) -> BTreeSet<(InstrId, InstrId)> {
    triples.iter().map(|&(d, u, _)| (d, u)).collect()
}
