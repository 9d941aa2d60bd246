//! Rules mapping a method's AST to its structure graph: one instruction per
//! simple statement or condition, with rendered text and def/use sets.

mod rules;

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::control_flow::{self, ControlRules};
use crate::engine::{Context, EngineError, Model, RuleHandle, RuleSet, Shared};
use crate::frontend::{Expr, ExprKind, MethodDecl, Pos, Stmt, StmtKind};
use crate::model::{FlowGraph, InstrId, ModelError, VarId};

pub use rules::{ExpressionInfo, StatementInstr};

/// A node of the source model as seen by the engine.
#[derive(Debug, Clone, Copy)]
pub enum Elem<'a> {
    Method(&'a MethodDecl),
    Stmt(&'a Stmt),
    Expr(&'a Expr),
}

impl<'a> Elem<'a> {
    pub fn stmt(self) -> &'a Stmt {
        match self {
            Elem::Stmt(s) => s,
            other => panic!("expected a statement, got {other:?}"),
        }
    }

    pub fn expr(self) -> &'a Expr {
        match self {
            Elem::Expr(e) => e,
            other => panic!("expected an expression, got {other:?}"),
        }
    }

    pub fn method(self) -> &'a MethodDecl {
        match self {
            Elem::Method(m) => m,
            other => panic!("expected a method, got {other:?}"),
        }
    }

    pub fn pos(self) -> Pos {
        match self {
            Elem::Method(m) => m.pos,
            Elem::Stmt(s) => s.pos,
            Elem::Expr(e) => e.pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JavaKind {
    Method,
    Statement,
    Block,
    LocalVar,
    ExprStmt,
    If,
    While,
    For,
    Return,
    Break,
    Continue,
    Labeled,
    Empty,
    Expression,
    Assign,
    Binary,
    Unary,
    VarRef,
    IntLit,
    BoolLit,
    Call,
}

impl JavaKind {
    fn of_stmt(s: &Stmt) -> Self {
        match s.kind {
            StmtKind::Block(_) => JavaKind::Block,
            StmtKind::LocalVar { .. } => JavaKind::LocalVar,
            StmtKind::Expr(_) => JavaKind::ExprStmt,
            StmtKind::If { .. } => JavaKind::If,
            StmtKind::While { .. } => JavaKind::While,
            StmtKind::For { .. } => JavaKind::For,
            StmtKind::Return(_) => JavaKind::Return,
            StmtKind::Break(_) => JavaKind::Break,
            StmtKind::Continue(_) => JavaKind::Continue,
            StmtKind::Labeled { .. } => JavaKind::Labeled,
            StmtKind::Empty => JavaKind::Empty,
        }
    }

    fn of_expr(e: &Expr) -> Self {
        match e.kind {
            ExprKind::Assign { .. } => JavaKind::Assign,
            ExprKind::Binary { .. } => JavaKind::Binary,
            ExprKind::Unary { .. } => JavaKind::Unary,
            ExprKind::VarRef(_) => JavaKind::VarRef,
            ExprKind::IntLit(_) => JavaKind::IntLit,
            ExprKind::BoolLit(_) => JavaKind::BoolLit,
            ExprKind::Call { .. } => JavaKind::Call,
        }
    }

    fn is_statement(self) -> bool {
        use JavaKind::*;
        matches!(
            self,
            Statement | Block | LocalVar | ExprStmt | If | While | For | Return | Break | Continue | Labeled | Empty
        )
    }

    fn is_expression(self) -> bool {
        use JavaKind::*;
        matches!(
            self,
            Expression | Assign | Binary | Unary | VarRef | IntLit | BoolLit | Call
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{pos}: variable `{name}` is not declared")]
    UnboundVariable { name: String, pos: Pos },
    #[error("{pos}: variable `{name}` is already declared in this method")]
    DuplicateDeclaration { name: String, pos: Pos },
    #[error("{pos}: no enclosing loop labelled `{label}`")]
    UnresolvedLabel { label: String, pos: Pos },
    #[error("{pos}: {what} has not been transformed in this context")]
    MissingTrace { what: &'static str, pos: Pos },
}

/// The source model: method declarations of the Java subset.
pub struct JavaModel<'a>(std::marker::PhantomData<&'a ()>);

impl<'a> Model for JavaModel<'a> {
    type Element = Elem<'a>;
    type Kind = JavaKind;
    type Env = Env;
    type Error = TransformError;

    fn kind_of(element: &Elem<'a>) -> JavaKind {
        match element {
            Elem::Method(_) => JavaKind::Method,
            Elem::Stmt(s) => JavaKind::of_stmt(s),
            Elem::Expr(e) => JavaKind::of_expr(e),
        }
    }

    fn identity(element: &Elem<'a>) -> usize {
        let (address, tag) = match element {
            Elem::Method(m) => (*m as *const MethodDecl as usize, 0),
            Elem::Stmt(s) => (*s as *const Stmt as usize, 1),
            Elem::Expr(e) => (*e as *const Expr as usize, 2),
        };
        address << 2 | tag
    }

    fn is_a(kind: JavaKind, ancestor: JavaKind) -> bool {
        kind == ancestor
            || (ancestor == JavaKind::Statement && kind.is_statement())
            || (ancestor == JavaKind::Expression && kind.is_expression())
    }
}

/// Handles of the structure rules, used by later phases for trace lookups.
#[derive(Debug, Clone, Copy)]
pub struct StructureRules {
    pub method: RuleHandle<Shared<FlowGraph>>,
    pub statement: RuleHandle<StatementInstr>,
    pub expression: RuleHandle<ExpressionInfo>,
    pub condition: RuleHandle<InstrId>,
    pub for_condition: RuleHandle<InstrId>,
    pub for_update: RuleHandle<InstrId>,
}

/// Per-pass state shared by the rules.
pub struct Env {
    pub structure: StructureRules,
    pub control: ControlRules,
    graph: Option<Shared<FlowGraph>>,
    scopes: Vec<HashMap<String, VarId>>,
}

impl Env {
    pub fn graph(&self) -> &Shared<FlowGraph> {
        self.graph.as_ref().expect("no method is being transformed")
    }

    pub fn set_graph(&mut self, graph: Shared<FlowGraph>) {
        self.graph = Some(graph);
    }

    fn lookup(&self, name: &str) -> Option<VarId> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn push_scope(&mut self) {
        self.scopes.push(HashMap::new());
    }

    fn pop_scope(&mut self) {
        self.scopes.pop();
    }

    fn declare(&mut self, name: &str, var: VarId) {
        self.scopes
            .last_mut()
            .expect("declaration outside any scope")
            .insert(name.to_string(), var);
    }
}

pub type JavaContext<'a> = Context<JavaModel<'a>>;

/// A transformation context with the structure and control-flow rules registered.
pub fn new_context<'a>() -> JavaContext<'a> {
    let mut set = RuleSet::new();
    let structure = rules::register(&mut set).expect("structure rules are consistent");
    let control = control_flow::register(&mut set, structure).expect("control-flow rules are consistent");
    Context::new(
        Rc::new(set),
        Env {
            structure,
            control,
            graph: None,
            scopes: Vec::new(),
        },
    )
}

/// Transforms `method` into its structure graph: instructions, text and
/// def/use sets, but no edges. Calling it again in the same context returns
/// the same graph.
pub fn build_structure_graph<'a>(
    method: &'a MethodDecl,
    ctx: &mut JavaContext<'a>,
) -> Result<Shared<FlowGraph>, TransformError> {
    let rule = ctx.env.structure.method;
    let out = ctx.call_rule(rule, Elem::Method(method))?;
    let graph = Rc::clone(&out.borrow());
    Ok(graph)
}

/// Renders `expr` with identifiers resolved through `scope`.
pub fn render_expression(expr: &Expr, scope: &HashMap<String, VarId>) -> Result<ExpressionInfo, TransformError> {
    let mut ctx = new_context();
    ctx.env.scopes.push(scope.clone());
    let rule = ctx.env.structure.expression;
    let info = ctx.call_rule(rule, Elem::Expr(expr))?;
    let info = info.borrow().clone();
    Ok(info)
}
