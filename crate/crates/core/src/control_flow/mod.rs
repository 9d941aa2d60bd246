//! Control-flow edges. Every statement is transformed into a
//! [`ControlFlowInfo`] that knows its first instruction and its lexical
//! successor; setting the edges is then a walk from the method's body.

use std::cell::RefCell;
use std::rc::{Rc, Weak};

use crate::engine::{EngineError, Requirements, Rule, RuleHandle, RuleSet, Shared};
use crate::frontend::{MethodDecl, Pos, StmtKind};
use crate::model::{FlowGraph, InstrId};
use crate::structure::{Elem, JavaContext, JavaKind, JavaModel, StatementInstr, StructureRules, TransformError};

type Ctx<'a> = JavaContext<'a>;
type Res<T> = Result<T, TransformError>;
type Info = Shared<ControlFlowInfo>;

/// Where control goes after a statement completes normally.
#[derive(Debug, Clone)]
pub enum Successor {
    /// The first instruction of the lexically following statement.
    Statement(Weak<RefCell<ControlFlowInfo>>),
    /// A fixed instruction: a loop test, a `for` update, or the exit node.
    Instr(InstrId),
    /// Whatever follows the enclosing statement.
    Inherit(Weak<RefCell<ControlFlowInfo>>),
}

#[derive(Debug)]
pub enum Shape {
    /// A statement with a single instruction that falls through.
    Simple(InstrId),
    Return(InstrId),
    Break {
        instr: InstrId,
        label: Option<String>,
    },
    Continue {
        instr: InstrId,
        label: Option<String>,
    },
    If {
        cond: InstrId,
        then: Option<Info>,
        otherwise: Option<Info>,
    },
    While {
        cond: InstrId,
        body: Option<Info>,
    },
    For {
        init: Option<Info>,
        cond: InstrId,
        update: Option<InstrId>,
        body: Option<Info>,
    },
    Block(Vec<Info>),
    Labeled {
        label: String,
        body: Option<Info>,
    },
    Empty,
}

#[derive(Debug)]
pub struct ControlFlowInfo {
    pub shape: Shape,
    pub successor: Option<Successor>,
    pub pos: Pos,
}

impl ControlFlowInfo {
    fn new(shape: Shape, pos: Pos) -> Self {
        ControlFlowInfo {
            shape,
            successor: None,
            pos,
        }
    }

    /// The first instruction executed on entering the statement.
    pub fn first(&self) -> Res<InstrId> {
        match &self.shape {
            Shape::Simple(i) | Shape::Return(i) => Ok(*i),
            Shape::Break { instr, .. } | Shape::Continue { instr, .. } => Ok(*instr),
            Shape::If { cond, .. } | Shape::While { cond, .. } => Ok(*cond),
            Shape::For { init: Some(init), .. } => init.borrow().first(),
            Shape::For { cond, .. } => Ok(*cond),
            Shape::Block(children) => match children.first() {
                Some(c) => c.borrow().first(),
                None => self.next(),
            },
            Shape::Labeled { body: Some(b), .. } => b.borrow().first(),
            Shape::Labeled { .. } | Shape::Empty => self.next(),
        }
    }

    /// The first instruction after the statement completes normally.
    pub fn next(&self) -> Res<InstrId> {
        match &self.successor {
            Some(Successor::Instr(i)) => Ok(*i),
            Some(Successor::Statement(s)) => upgrade(s, self.pos)?.borrow().first(),
            Some(Successor::Inherit(p)) => upgrade(p, self.pos)?.borrow().next(),
            None => Err(TransformError::MissingTrace {
                what: "successor of statement",
                pos: self.pos,
            }),
        }
    }
}

fn upgrade(w: &Weak<RefCell<ControlFlowInfo>>, pos: Pos) -> Res<Info> {
    w.upgrade().ok_or(TransformError::MissingTrace {
        what: "enclosing statement",
        pos,
    })
}

/// One enclosing loop while setting edges.
#[derive(Debug, Clone)]
pub struct LoopFrame {
    pub labels: Vec<String>,
    pub continue_target: InstrId,
    pub exit: InstrId,
}

/// Handles of the control-flow rules.
#[derive(Debug, Clone, Copy)]
pub struct ControlRules {
    pub statement: RuleHandle<ControlFlowInfo>,
    pub method: RuleHandle<Option<Info>>,
}

fn missing(what: &'static str, pos: Pos) -> TransformError {
    TransformError::MissingTrace { what, pos }
}

fn structure_instr<'a>(ctx: &Ctx<'a>, rule: RuleHandle<StatementInstr>, input: Elem<'a>) -> Res<InstrId> {
    ctx.trace_lookup(rule, &input)
        .and_then(|s| s.borrow().instr)
        .ok_or_else(|| missing("statement", input.pos()))
}

fn trace_instr<'a>(ctx: &Ctx<'a>, rule: RuleHandle<InstrId>, input: Elem<'a>) -> Res<InstrId> {
    ctx.trace_lookup(rule, &input)
        .map(|i| *i.borrow())
        .ok_or_else(|| missing("condition", input.pos()))
}

fn set_successor(child: &Info, successor: Successor) {
    child.borrow_mut().successor = Some(successor);
}

struct Statement2Cf;

impl<'a> Rule<JavaModel<'a>> for Statement2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "Statement2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Statement
    }

    fn create_output(&self, input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        Ok(ControlFlowInfo::new(Shape::Empty, input.pos()))
    }
}

/// Statements that own exactly one instruction.
struct Leaf2Cf {
    kind: JavaKind,
    structure: StructureRules,
}

impl<'a> Rule<JavaModel<'a>> for Leaf2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        match self.kind {
            JavaKind::LocalVar => "LocalVar2ControlFlow",
            JavaKind::ExprStmt => "ExpressionStatement2ControlFlow",
            JavaKind::Return => "Return2ControlFlow",
            JavaKind::Break => "Break2ControlFlow",
            _ => "Continue2ControlFlow",
        }
    }

    fn input_kind(&self) -> JavaKind {
        self.kind
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        let instr = structure_instr(ctx, self.structure.statement, input)?;
        let shape = match &input.stmt().kind {
            StmtKind::Return(_) => Shape::Return(instr),
            StmtKind::Break(label) => Shape::Break {
                instr,
                label: label.clone(),
            },
            StmtKind::Continue(label) => Shape::Continue {
                instr,
                label: label.clone(),
            },
            _ => Shape::Simple(instr),
        };
        Ok(ControlFlowInfo::new(shape, input.pos()))
    }
}

struct Block2Cf {
    hub: RuleHandle<ControlFlowInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Block2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "Block2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Block
    }

    fn create_output(&self, input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        Ok(ControlFlowInfo::new(Shape::Block(Vec::new()), input.pos()))
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ControlFlowInfo>) {
        req.require(
            self.hub,
            |e: Elem<'a>| e.stmt().children().into_iter().map(Elem::Stmt).collect(),
            |parent: &Info, child: &Info| {
                if let Shape::Block(children) = &mut parent.borrow_mut().shape {
                    children.push(Rc::clone(child));
                }
            },
        );
    }

    fn transform(&self, _input: Elem<'a>, output: &Info, _ctx: &mut Ctx<'a>) -> Res<()> {
        let info = output.borrow();
        if let Shape::Block(children) = &info.shape {
            for pair in children.windows(2) {
                set_successor(&pair[0], Successor::Statement(Rc::downgrade(&pair[1])));
            }
            if let Some(last) = children.last() {
                set_successor(last, Successor::Inherit(Rc::downgrade(output)));
            }
        }
        Ok(())
    }
}

struct If2Cf {
    hub: RuleHandle<ControlFlowInfo>,
    structure: StructureRules,
}

impl<'a> Rule<JavaModel<'a>> for If2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "If2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::If
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        let cond = structure_instr(ctx, self.structure.statement, input)?;
        let shape = Shape::If {
            cond,
            then: None,
            otherwise: None,
        };
        Ok(ControlFlowInfo::new(shape, input.pos()))
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ControlFlowInfo>) {
        req.require(
            self.hub,
            |e: Elem<'a>| match &e.stmt().kind {
                StmtKind::If { then, .. } => vec![Elem::Stmt(then)],
                _ => Vec::new(),
            },
            |parent: &Info, child: &Info| {
                if let Shape::If { then, .. } = &mut parent.borrow_mut().shape {
                    *then = Some(Rc::clone(child));
                }
                set_successor(child, Successor::Inherit(Rc::downgrade(parent)));
            },
        );
        req.require(
            self.hub,
            |e: Elem<'a>| match &e.stmt().kind {
                StmtKind::If { otherwise: Some(o), .. } => vec![Elem::Stmt(o)],
                _ => Vec::new(),
            },
            |parent: &Info, child: &Info| {
                if let Shape::If { otherwise, .. } = &mut parent.borrow_mut().shape {
                    *otherwise = Some(Rc::clone(child));
                }
                set_successor(child, Successor::Inherit(Rc::downgrade(parent)));
            },
        );
    }
}

struct While2Cf {
    hub: RuleHandle<ControlFlowInfo>,
    structure: StructureRules,
}

impl<'a> Rule<JavaModel<'a>> for While2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "While2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::While
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        let cond = structure_instr(ctx, self.structure.statement, input)?;
        Ok(ControlFlowInfo::new(Shape::While { cond, body: None }, input.pos()))
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ControlFlowInfo>) {
        req.require(
            self.hub,
            |e: Elem<'a>| e.stmt().children().into_iter().map(Elem::Stmt).collect(),
            |parent: &Info, child: &Info| {
                let mut p = parent.borrow_mut();
                if let Shape::While { cond, body } = &mut p.shape {
                    *body = Some(Rc::clone(child));
                    set_successor(child, Successor::Instr(*cond));
                }
            },
        );
    }
}

struct For2Cf {
    hub: RuleHandle<ControlFlowInfo>,
    structure: StructureRules,
}

impl<'a> Rule<JavaModel<'a>> for For2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "For2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::For
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        let cond = trace_instr(ctx, self.structure.for_condition, input)?;
        let update = match &input.stmt().kind {
            StmtKind::For { update: Some(_), .. } => Some(trace_instr(ctx, self.structure.for_update, input)?),
            _ => None,
        };
        let shape = Shape::For {
            init: None,
            cond,
            update,
            body: None,
        };
        Ok(ControlFlowInfo::new(shape, input.pos()))
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ControlFlowInfo>) {
        req.require(
            self.hub,
            |e: Elem<'a>| match &e.stmt().kind {
                StmtKind::For { init: Some(init), .. } => vec![Elem::Stmt(init)],
                _ => Vec::new(),
            },
            |parent: &Info, child: &Info| {
                let mut p = parent.borrow_mut();
                if let Shape::For { init, cond, .. } = &mut p.shape {
                    *init = Some(Rc::clone(child));
                    set_successor(child, Successor::Instr(*cond));
                }
            },
        );
        req.require(
            self.hub,
            |e: Elem<'a>| match &e.stmt().kind {
                StmtKind::For { body, .. } => vec![Elem::Stmt(body)],
                _ => Vec::new(),
            },
            |parent: &Info, child: &Info| {
                let mut p = parent.borrow_mut();
                if let Shape::For { cond, update, body, .. } = &mut p.shape {
                    *body = Some(Rc::clone(child));
                    set_successor(child, Successor::Instr(update.unwrap_or(*cond)));
                }
            },
        );
    }
}

struct Labeled2Cf {
    hub: RuleHandle<ControlFlowInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Labeled2Cf {
    type Output = ControlFlowInfo;

    fn name(&self) -> &str {
        "Labeled2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Labeled
    }

    fn create_output(&self, input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ControlFlowInfo> {
        let StmtKind::Labeled { label, .. } = &input.stmt().kind else {
            unreachable!()
        };
        let shape = Shape::Labeled {
            label: label.clone(),
            body: None,
        };
        Ok(ControlFlowInfo::new(shape, input.pos()))
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ControlFlowInfo>) {
        req.require(
            self.hub,
            |e: Elem<'a>| e.stmt().children().into_iter().map(Elem::Stmt).collect(),
            |parent: &Info, child: &Info| {
                if let Shape::Labeled { body, .. } = &mut parent.borrow_mut().shape {
                    *body = Some(Rc::clone(child));
                }
                set_successor(child, Successor::Inherit(Rc::downgrade(parent)));
            },
        );
    }
}

/// The method body's info, whose successor is the exit node.
struct Method2Cf {
    hub: RuleHandle<ControlFlowInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Method2Cf {
    type Output = Option<Info>;

    fn name(&self) -> &str {
        "Method2ControlFlow"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Method
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<Option<Info>> {
        Ok(None)
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, Option<Info>>) {
        req.require(
            self.hub,
            |e: Elem<'a>| vec![Elem::Stmt(&e.method().body)],
            |parent: &Shared<Option<Info>>, child: &Info| {
                *parent.borrow_mut() = Some(Rc::clone(child));
            },
        );
    }

    fn transform(&self, input: Elem<'a>, output: &Shared<Option<Info>>, ctx: &mut Ctx<'a>) -> Res<()> {
        let exit = ctx
            .env
            .graph()
            .borrow()
            .exit()
            .ok_or_else(|| missing("exit node", input.pos()))?;
        if let Some(body) = output.borrow().as_ref() {
            set_successor(body, Successor::Instr(exit));
        }
        Ok(())
    }
}

pub(crate) fn register<'a>(
    set: &mut RuleSet<JavaModel<'a>>,
    structure: StructureRules,
) -> Result<ControlRules, EngineError> {
    let hub = set.add(Statement2Cf);
    for kind in [
        JavaKind::LocalVar,
        JavaKind::ExprStmt,
        JavaKind::Return,
        JavaKind::Break,
        JavaKind::Continue,
    ] {
        set.add_instantiating(Leaf2Cf { kind, structure }, hub)?;
    }
    set.add_instantiating(Block2Cf { hub }, hub)?;
    set.add_instantiating(If2Cf { hub, structure }, hub)?;
    set.add_instantiating(While2Cf { hub, structure }, hub)?;
    set.add_instantiating(For2Cf { hub, structure }, hub)?;
    set.add_instantiating(Labeled2Cf { hub }, hub)?;
    let method = set.add(Method2Cf { hub });
    Ok(ControlRules { statement: hub, method })
}

/// Sets the control-flow edges of `graph`, which must have been built from
/// `method` in the same context.
pub fn derive_control_flow<'a>(graph: &Shared<FlowGraph>, method: &'a MethodDecl, ctx: &mut Ctx<'a>) -> Res<()> {
    ctx.env.set_graph(Rc::clone(graph));
    let rule = ctx.env.control.method;
    let body = ctx
        .call_rule(rule, Elem::Method(method))?
        .borrow()
        .clone()
        .ok_or_else(|| missing("method body", method.pos))?;
    let mut g = graph.borrow_mut();
    let entry = g.method();
    let first = body.borrow().first()?;
    g.link_cf(entry, first)?;
    let exit = g.exit().ok_or_else(|| missing("exit node", method.pos))?;
    let mut loops = Vec::new();
    set_control_flow(&body, &mut g, exit, &mut loops, &[])?;
    Ok(())
}

/// Links the instructions of one statement. `labels` are the labels directly
/// wrapping it.
pub fn set_control_flow(
    info: &Info,
    graph: &mut FlowGraph,
    exit: InstrId,
    loops: &mut Vec<LoopFrame>,
    labels: &[String],
) -> Res<()> {
    let info = info.borrow();
    match &info.shape {
        Shape::Simple(i) => graph.link_cf(*i, info.next()?)?,
        Shape::Return(i) => graph.link_cf(*i, exit)?,
        Shape::Break { instr, label } => {
            let frame = find_loop(loops, label.as_deref(), info.pos)?;
            graph.link_cf(*instr, frame.exit)?;
        }
        Shape::Continue { instr, label } => {
            let frame = find_loop(loops, label.as_deref(), info.pos)?;
            graph.link_cf(*instr, frame.continue_target)?;
        }
        Shape::If { cond, then, otherwise } => {
            let after = info.next()?;
            let then_first = match then {
                Some(t) => t.borrow().first()?,
                None => after,
            };
            let else_first = match otherwise {
                Some(o) => o.borrow().first()?,
                None => after,
            };
            graph.link_cf(*cond, then_first)?;
            graph.link_cf(*cond, else_first)?;
            for branch in then.iter().chain(otherwise) {
                set_control_flow(branch, graph, exit, loops, &[])?;
            }
        }
        Shape::While { cond, body } => {
            let after = info.next()?;
            let body_first = match body {
                Some(b) => b.borrow().first()?,
                None => *cond,
            };
            graph.link_cf(*cond, body_first)?;
            graph.link_cf(*cond, after)?;
            loops.push(LoopFrame {
                labels: labels.to_vec(),
                continue_target: *cond,
                exit: after,
            });
            if let Some(b) = body {
                set_control_flow(b, graph, exit, loops, &[])?;
            }
            loops.pop();
        }
        Shape::For {
            init,
            cond,
            update,
            body,
        } => {
            let after = info.next()?;
            if let Some(init) = init {
                set_control_flow(init, graph, exit, loops, &[])?;
            }
            let continue_target = update.unwrap_or(*cond);
            let body_first = match body {
                Some(b) => b.borrow().first()?,
                None => continue_target,
            };
            graph.link_cf(*cond, body_first)?;
            graph.link_cf(*cond, after)?;
            if let Some(u) = update {
                graph.link_cf(*u, *cond)?;
            }
            loops.push(LoopFrame {
                labels: labels.to_vec(),
                continue_target,
                exit: after,
            });
            if let Some(b) = body {
                set_control_flow(b, graph, exit, loops, &[])?;
            }
            loops.pop();
        }
        Shape::Block(children) => {
            for c in children {
                set_control_flow(c, graph, exit, loops, &[])?;
            }
        }
        Shape::Labeled { label, body } => {
            if let Some(b) = body {
                let mut inner = labels.to_vec();
                inner.push(label.clone());
                set_control_flow(b, graph, exit, loops, &inner)?;
            }
        }
        Shape::Empty => {}
    }
    Ok(())
}

fn find_loop<'l>(loops: &'l [LoopFrame], label: Option<&str>, pos: Pos) -> Res<&'l LoopFrame> {
    let found = match label {
        None => loops.last(),
        Some(l) => loops.iter().rev().find(|f| f.labels.iter().any(|x| x == l)),
    };
    found.ok_or_else(|| TransformError::UnresolvedLabel {
        label: label.unwrap_or("<loop>").to_string(),
        pos,
    })
}
