//! The phases end to end: structure, control flow, data flow.

use std::rc::Rc;
use std::time::{Duration, Instant};

use crate::control_flow::derive_control_flow;
use crate::data_flow::{derive_data_flow_with, DataFlowAlgorithm};
use crate::frontend::{CompilationUnit, MethodDecl};
use crate::model::FlowGraph;
use crate::structure::{build_structure_graph, new_context, TransformError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub control_flow: bool,
    /// `None` skips data flow.
    pub data_flow: Option<DataFlowAlgorithm>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            control_flow: true,
            data_flow: Some(DataFlowAlgorithm::Traversal),
        }
    }
}

/// Wall-clock time spent per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub read: Duration,
    pub transform: Duration,
    pub control_flow: Duration,
    pub data_flow: Duration,
    pub write: Duration,
}

impl PhaseTimes {
    pub const NAMES: [&'static str; 5] = ["read", "transform", "controlflow", "dataflow", "write"];

    pub fn as_array(&self) -> [Duration; 5] {
        [self.read, self.transform, self.control_flow, self.data_flow, self.write]
    }
}

/// A point in the pipeline after which the graph is complete for that phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Structure,
    ControlFlow,
    DataFlow,
}

/// Runs the enabled phases on one method, each in a fresh context.
pub fn transform_method(
    method: &MethodDecl,
    options: Options,
    times: &mut PhaseTimes,
) -> Result<FlowGraph, TransformError> {
    transform_method_observed(method, options, times, &mut |_, _| {})
}

/// Like [`transform_method`], handing the graph to `observe` after each
/// phase that ran.
pub fn transform_method_observed(
    method: &MethodDecl,
    options: Options,
    times: &mut PhaseTimes,
    observe: &mut dyn FnMut(Stage, &FlowGraph),
) -> Result<FlowGraph, TransformError> {
    assert!(
        options.control_flow || options.data_flow.is_none(),
        "data flow needs control flow"
    );
    let mut ctx = new_context();
    let start = Instant::now();
    let graph = build_structure_graph(method, &mut ctx)?;
    times.transform += start.elapsed();
    checked(Stage::Structure, &graph.borrow(), observe);
    if options.control_flow {
        let start = Instant::now();
        derive_control_flow(&graph, method, &mut ctx)?;
        times.control_flow += start.elapsed();
        checked(Stage::ControlFlow, &graph.borrow(), observe);
    }
    drop(ctx);
    let mut graph = Rc::try_unwrap(graph)
        .map(|cell| cell.into_inner())
        .unwrap_or_else(|shared| shared.borrow().clone());
    if let Some(algorithm) = options.data_flow {
        let start = Instant::now();
        derive_data_flow_with(&mut graph, algorithm);
        times.data_flow += start.elapsed();
        checked(Stage::DataFlow, &graph, observe);
    }
    Ok(graph)
}

fn checked(stage: Stage, graph: &FlowGraph, observe: &mut dyn FnMut(Stage, &FlowGraph)) {
    if cfg!(debug_assertions) {
        if let Err(e) = graph.audit() {
            panic!(
                "graph of `{}` fails the audit after {stage:?}: {e}",
                graph.method_name()
            );
        }
    }
    observe(stage, graph);
}

/// One graph per method, in declaration order.
pub fn transform_unit(
    unit: &CompilationUnit,
    options: Options,
    times: &mut PhaseTimes,
) -> Result<Vec<FlowGraph>, TransformError> {
    unit.methods().map(|m| transform_method(m, options, times)).collect()
}

/// Full pipeline with default options, discarding timings.
pub fn flow_graphs(unit: &CompilationUnit) -> Result<Vec<FlowGraph>, TransformError> {
    transform_unit(unit, Options::default(), &mut PhaseTimes::default())
}
