use std::cell::RefCell;
use std::collections::BTreeSet;
use std::rc::Rc;

use super::{Elem, JavaKind, JavaModel, StructureRules, TransformError};
use crate::engine::{Context, EngineError, Requirements, Rule, RuleHandle, RuleSet, Shared};
use crate::frontend::{Expr, ExprKind, StmtKind};
use crate::model::{FlowGraph, InstrId, InstrKind, VarId, VarOrigin};

type Ctx<'a> = Context<JavaModel<'a>>;
type Res<T> = Result<T, TransformError>;

/// What an expression contributes to its instruction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpressionInfo {
    pub text: String,
    /// Set for assignments and increments/decrements.
    pub defined: Option<VarId>,
    pub used: BTreeSet<VarId>,
}

/// The instruction a statement contributes: its own, or its condition for
/// `if`, `while` and `for`. Blocks, labels and empty statements have none.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatementInstr {
    pub instr: Option<InstrId>,
}

fn merge_used(parent: &Shared<ExpressionInfo>, child: &Shared<ExpressionInfo>) {
    let used = child.borrow().used.clone();
    parent.borrow_mut().used.extend(used);
}

fn persist_instr(parent: &Shared<StatementInstr>, child: &Shared<InstrId>) {
    parent.borrow_mut().instr = Some(*child.borrow());
}

fn add_instr(ctx: &Ctx<'_>, kind: InstrKind, txt: String, info: Option<&ExpressionInfo>) -> Res<InstrId> {
    let mut graph = ctx.env.graph().borrow_mut();
    let id = graph.add_instr(kind, txt);
    if let Some(info) = info {
        if let Some(v) = info.defined {
            graph.add_def(id, v)?;
        }
        for &v in &info.used {
            graph.add_use(id, v)?;
        }
    }
    Ok(id)
}

fn resolve(ctx: &Ctx<'_>, name: &str, elem: Elem<'_>) -> Res<VarId> {
    ctx.env.lookup(name).ok_or_else(|| TransformError::UnboundVariable {
        name: name.to_string(),
        pos: elem.pos(),
    })
}

fn info_of<'a>(ctx: &Ctx<'a>, hub: RuleHandle<ExpressionInfo>, e: &'a Expr) -> Res<ExpressionInfo> {
    ctx.trace_lookup(hub, &Elem::Expr(e))
        .map(|i| i.borrow().clone())
        .ok_or(TransformError::MissingTrace {
            what: "sub-expression",
            pos: e.pos,
        })
}

fn render<'a>(ctx: &mut Ctx<'a>, hub: RuleHandle<ExpressionInfo>, e: &'a Expr) -> Res<ExpressionInfo> {
    let info = ctx.call_rule(hub, Elem::Expr(e))?;
    let info = info.borrow().clone();
    Ok(info)
}

/// Child text, parenthesized when it binds weaker than `min`, or equally
/// weak when `strict`.
fn operand<'a>(ctx: &Ctx<'a>, hub: RuleHandle<ExpressionInfo>, child: &'a Expr, min: u8, strict: bool) -> Res<String> {
    let text = info_of(ctx, hub, child)?.text;
    let prec = child.kind.precedence();
    if prec < min || (strict && prec == min) {
        Ok(format!("({text})"))
    } else {
        Ok(text)
    }
}

fn expr_children(e: Elem<'_>) -> Vec<Elem<'_>> {
    e.expr().children().into_iter().map(Elem::Expr).collect()
}

struct Expression2Info;

impl<'a> Rule<JavaModel<'a>> for Expression2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        "Expression2Info"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Expression
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        Ok(ExpressionInfo::default())
    }
}

struct Atom2Info(JavaKind);

impl<'a> Rule<JavaModel<'a>> for Atom2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        match self.0 {
            JavaKind::VarRef => "VarRef2Info",
            JavaKind::IntLit => "IntLiteral2Info",
            _ => "BoolLiteral2Info",
        }
    }

    fn input_kind(&self) -> JavaKind {
        self.0
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        let mut info = ExpressionInfo::default();
        match &input.expr().kind {
            ExprKind::VarRef(name) => {
                info.used.insert(resolve(ctx, name, input)?);
                info.text = name.clone();
            }
            ExprKind::IntLit(v) => info.text = v.to_string(),
            ExprKind::BoolLit(b) => info.text = b.to_string(),
            other => unreachable!("{other:?} is not an atom"),
        }
        Ok(info)
    }
}

struct Binary2Info {
    hub: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Binary2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        "Binary2Info"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Binary
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        Ok(ExpressionInfo::default())
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ExpressionInfo>) {
        req.require(self.hub, expr_children, merge_used);
    }

    fn transform(&self, input: Elem<'a>, output: &Shared<ExpressionInfo>, ctx: &mut Ctx<'a>) -> Res<()> {
        let ExprKind::Binary { left, op, right } = &input.expr().kind else {
            unreachable!()
        };
        let p = op.precedence();
        let text = format!(
            "{} {} {}",
            operand(ctx, self.hub, left, p, false)?,
            op.symbol(),
            operand(ctx, self.hub, right, p, true)?
        );
        output.borrow_mut().text = text;
        Ok(())
    }
}

struct Unary2Info {
    hub: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Unary2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        "Unary2Info"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Unary
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        let ExprKind::Unary { op, operand } = &input.expr().kind else {
            unreachable!()
        };
        let mut info = ExpressionInfo::default();
        if op.is_step() {
            if let ExprKind::VarRef(name) = &operand.kind {
                info.defined = Some(resolve(ctx, name, input)?);
            }
        }
        Ok(info)
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ExpressionInfo>) {
        req.require(self.hub, expr_children, merge_used);
    }

    fn transform(&self, input: Elem<'a>, output: &Shared<ExpressionInfo>, ctx: &mut Ctx<'a>) -> Res<()> {
        let ExprKind::Unary { op, operand: inner } = &input.expr().kind else {
            unreachable!()
        };
        let this = input.expr().kind.precedence();
        let text = if op.is_postfix() {
            format!("{}{}", operand(ctx, self.hub, inner, this, false)?, op.symbol())
        } else {
            let mut body = operand(ctx, self.hub, inner, this, false)?;
            // `-(-a)` must not collapse into `--a`
            let sign = op.symbol().chars().next();
            if !body.starts_with('(') && body.chars().next() == sign && matches!(sign, Some('-' | '+')) {
                body = format!("({body})");
            }
            format!("{}{body}", op.symbol())
        };
        output.borrow_mut().text = text;
        Ok(())
    }
}

struct Assign2Info {
    hub: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Assign2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        "Assignment2Info"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Assign
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        let ExprKind::Assign { target, op, .. } = &input.expr().kind else {
            unreachable!()
        };
        let var = resolve(ctx, target, input)?;
        let mut info = ExpressionInfo {
            defined: Some(var),
            ..ExpressionInfo::default()
        };
        if op.reads_target() {
            info.used.insert(var);
        }
        Ok(info)
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ExpressionInfo>) {
        req.require(self.hub, expr_children, merge_used);
    }

    fn transform(&self, input: Elem<'a>, output: &Shared<ExpressionInfo>, ctx: &mut Ctx<'a>) -> Res<()> {
        let ExprKind::Assign { target, op, value } = &input.expr().kind else {
            unreachable!()
        };
        let value = operand(ctx, self.hub, value, 0, false)?;
        output.borrow_mut().text = format!("{target} {} {value}", op.symbol());
        Ok(())
    }
}

struct Call2Info {
    hub: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Call2Info {
    type Output = ExpressionInfo;

    fn name(&self) -> &str {
        "Call2Info"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Call
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<ExpressionInfo> {
        Ok(ExpressionInfo::default())
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, ExpressionInfo>) {
        req.require(self.hub, expr_children, merge_used);
    }

    fn transform(&self, input: Elem<'a>, output: &Shared<ExpressionInfo>, ctx: &mut Ctx<'a>) -> Res<()> {
        let ExprKind::Call { name, args } = &input.expr().kind else {
            unreachable!()
        };
        let args = args
            .iter()
            .map(|a| operand(ctx, self.hub, a, 1, false))
            .collect::<Res<Vec<_>>>()?;
        output.borrow_mut().text = format!("{name}({})", args.join(", "));
        Ok(())
    }
}

/// Creates the `expr`-kind instruction of an `if` or `while` condition.
struct Condition2Instr {
    expr: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Condition2Instr {
    type Output = InstrId;

    fn name(&self) -> &str {
        "Condition2Instr"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Expression
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<InstrId> {
        let info = render(ctx, self.expr, input.expr())?;
        add_instr(ctx, InstrKind::Expr, info.text.clone(), Some(&info))
    }
}

/// The condition instruction of a `for`; a missing condition reads `true`.
struct ForCondition2Instr {
    expr: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for ForCondition2Instr {
    type Output = InstrId;

    fn name(&self) -> &str {
        "ForCondition2Instr"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::For
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<InstrId> {
        let StmtKind::For { cond, .. } = &input.stmt().kind else {
            unreachable!()
        };
        match cond {
            Some(cond) => {
                let info = render(ctx, self.expr, cond)?;
                add_instr(ctx, InstrKind::Expr, info.text.clone(), Some(&info))
            }
            None => add_instr(ctx, InstrKind::Expr, "true".to_string(), None),
        }
    }
}

struct ForUpdate2Instr {
    expr: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for ForUpdate2Instr {
    type Output = InstrId;

    fn name(&self) -> &str {
        "ForUpdate2Instr"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::For
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<InstrId> {
        let StmtKind::For {
            update: Some(update), ..
        } = &input.stmt().kind
        else {
            unreachable!("update rule called on a for without update")
        };
        let info = render(ctx, self.expr, update)?;
        add_instr(ctx, InstrKind::Simple, info.text.clone(), Some(&info))
    }
}

struct Statement2Instr;

impl<'a> Rule<JavaModel<'a>> for Statement2Instr {
    type Output = StatementInstr;

    fn name(&self) -> &str {
        "Statement2Instr"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Statement
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<StatementInstr> {
        Ok(StatementInstr::default())
    }
}

/// Local declarations, expression statements, returns and jumps: one
/// instruction each.
struct Simple2Instr {
    kind: JavaKind,
    expr: RuleHandle<ExpressionInfo>,
}

impl<'a> Rule<JavaModel<'a>> for Simple2Instr {
    type Output = StatementInstr;

    fn name(&self) -> &str {
        match self.kind {
            JavaKind::LocalVar => "LocalVar2Instr",
            JavaKind::ExprStmt => "ExpressionStatement2Instr",
            JavaKind::Return => "Return2Instr",
            JavaKind::Break => "Break2Instr",
            _ => "Continue2Instr",
        }
    }

    fn input_kind(&self) -> JavaKind {
        self.kind
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<StatementInstr> {
        let stmt = input.stmt();
        let instr = match &stmt.kind {
            StmtKind::LocalVar { ty, name, init } => {
                let info = init.as_ref().map(|e| render(ctx, self.expr, e)).transpose()?;
                if ctx.env.graph().borrow().var_by_name(name).is_some() {
                    return Err(TransformError::DuplicateDeclaration {
                        name: name.clone(),
                        pos: stmt.pos,
                    });
                }
                let var = ctx.env.graph().borrow_mut().add_var(name.as_str(), VarOrigin::Local)?;
                ctx.env.declare(name, var);
                match info {
                    Some(mut info) => {
                        let txt = format!("{ty} {name} = {}", info.text);
                        info.defined = Some(var);
                        add_instr(ctx, InstrKind::Simple, txt, Some(&info))?
                    }
                    None => add_instr(ctx, InstrKind::Simple, format!("{ty} {name}"), None)?,
                }
            }
            StmtKind::Expr(e) => {
                let info = render(ctx, self.expr, e)?;
                add_instr(ctx, InstrKind::Simple, info.text.clone(), Some(&info))?
            }
            StmtKind::Return(value) => match value {
                Some(e) => {
                    let info = render(ctx, self.expr, e)?;
                    add_instr(ctx, InstrKind::Return, format!("return {}", info.text), Some(&info))?
                }
                None => add_instr(ctx, InstrKind::Return, "return".to_string(), None)?,
            },
            StmtKind::Break(label) => add_instr(ctx, InstrKind::Break, jump_text("break", label), None)?,
            StmtKind::Continue(label) => add_instr(ctx, InstrKind::Continue, jump_text("continue", label), None)?,
            other => unreachable!("{other:?} is not a simple statement"),
        };
        Ok(StatementInstr { instr: Some(instr) })
    }
}

fn jump_text(keyword: &str, label: &Option<String>) -> String {
    match label {
        Some(l) => format!("{keyword} {l}"),
        None => keyword.to_string(),
    }
}

/// Blocks, labels, and empty statements: no instruction, only children.
struct Transparent2Instr {
    kind: JavaKind,
    hub: RuleHandle<StatementInstr>,
}

impl<'a> Rule<JavaModel<'a>> for Transparent2Instr {
    type Output = StatementInstr;

    fn name(&self) -> &str {
        match self.kind {
            JavaKind::Block => "Block2Instr",
            JavaKind::Labeled => "Labeled2Instr",
            _ => "Empty2Instr",
        }
    }

    fn input_kind(&self) -> JavaKind {
        self.kind
    }

    fn create_output(&self, _input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<StatementInstr> {
        if self.kind == JavaKind::Block {
            ctx.env.push_scope();
        }
        Ok(StatementInstr::default())
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, StatementInstr>) {
        req.require_each(self.hub, |e: Elem<'a>| {
            e.stmt().children().into_iter().map(Elem::Stmt).collect()
        });
    }

    fn transform(&self, _input: Elem<'a>, _output: &Shared<StatementInstr>, ctx: &mut Ctx<'a>) -> Res<()> {
        if self.kind == JavaKind::Block {
            ctx.env.pop_scope();
        }
        Ok(())
    }
}

/// `if` and `while`: the condition instruction, then the nested statements.
struct Branching2Instr {
    kind: JavaKind,
    hub: RuleHandle<StatementInstr>,
    condition: RuleHandle<InstrId>,
}

impl<'a> Rule<JavaModel<'a>> for Branching2Instr {
    type Output = StatementInstr;

    fn name(&self) -> &str {
        if self.kind == JavaKind::If {
            "If2Instr"
        } else {
            "While2Instr"
        }
    }

    fn input_kind(&self) -> JavaKind {
        self.kind
    }

    fn create_output(&self, _input: Elem<'a>, _ctx: &mut Ctx<'a>) -> Res<StatementInstr> {
        Ok(StatementInstr::default())
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, StatementInstr>) {
        req.require(
            self.condition,
            |e: Elem<'a>| match &e.stmt().kind {
                StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => vec![Elem::Expr(cond)],
                _ => Vec::new(),
            },
            persist_instr,
        );
        req.require_each(self.hub, |e: Elem<'a>| {
            e.stmt().children().into_iter().map(Elem::Stmt).collect()
        });
    }
}

/// `for`: init, condition, update and body, in source order, inside a scope
/// of their own.
struct For2Instr {
    hub: RuleHandle<StatementInstr>,
    condition: RuleHandle<InstrId>,
    update: RuleHandle<InstrId>,
}

impl<'a> Rule<JavaModel<'a>> for For2Instr {
    type Output = StatementInstr;

    fn name(&self) -> &str {
        "For2Instr"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::For
    }

    fn create_output(&self, _input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<StatementInstr> {
        ctx.env.push_scope();
        Ok(StatementInstr::default())
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, StatementInstr>) {
        req.require_each(self.hub, |e: Elem<'a>| match &e.stmt().kind {
            StmtKind::For { init: Some(init), .. } => vec![Elem::Stmt(init)],
            _ => Vec::new(),
        });
        req.require(self.condition, |e: Elem<'a>| vec![e], persist_instr);
        req.require_each(self.update, |e: Elem<'a>| match &e.stmt().kind {
            StmtKind::For { update: Some(_), .. } => vec![e],
            _ => Vec::new(),
        });
        req.require_each(self.hub, |e: Elem<'a>| match &e.stmt().kind {
            StmtKind::For { body, .. } => vec![Elem::Stmt(body)],
            _ => Vec::new(),
        });
    }

    fn transform(&self, _input: Elem<'a>, _output: &Shared<StatementInstr>, ctx: &mut Ctx<'a>) -> Res<()> {
        ctx.env.pop_scope();
        Ok(())
    }
}

/// Creates the graph with its method node and parameters; the exit node is
/// added last, after the body.
struct Method2Graph {
    statement: RuleHandle<StatementInstr>,
}

impl<'a> Rule<JavaModel<'a>> for Method2Graph {
    type Output = Shared<FlowGraph>;

    fn name(&self) -> &str {
        "Method2Graph"
    }

    fn input_kind(&self) -> JavaKind {
        JavaKind::Method
    }

    fn create_output(&self, input: Elem<'a>, ctx: &mut Ctx<'a>) -> Res<Shared<FlowGraph>> {
        let method = input.method();
        let mut graph = FlowGraph::new(method.name.as_str());
        ctx.env.push_scope();
        for p in &method.params {
            if graph.var_by_name(&p.name).is_some() {
                return Err(TransformError::DuplicateDeclaration {
                    name: p.name.clone(),
                    pos: p.pos,
                });
            }
            let v = graph.add_var(p.name.as_str(), VarOrigin::Param)?;
            let m = graph.method();
            graph.add_def(m, v)?;
            ctx.env.declare(&p.name, v);
        }
        let graph = Rc::new(RefCell::new(graph));
        ctx.env.set_graph(Rc::clone(&graph));
        Ok(graph)
    }

    fn register_requirements(&self, req: &mut Requirements<JavaModel<'a>, Shared<FlowGraph>>) {
        req.require_each(self.statement, |e: Elem<'a>| vec![Elem::Stmt(&e.method().body)]);
    }

    fn transform(&self, _input: Elem<'a>, output: &Shared<Shared<FlowGraph>>, ctx: &mut Ctx<'a>) -> Res<()> {
        ctx.env.pop_scope();
        output.borrow().borrow_mut().add_exit()?;
        Ok(())
    }
}

pub(super) fn register<'a>(set: &mut RuleSet<JavaModel<'a>>) -> Result<StructureRules, EngineError> {
    let expression = set.add(Expression2Info);
    for kind in [JavaKind::VarRef, JavaKind::IntLit, JavaKind::BoolLit] {
        set.add_instantiating(Atom2Info(kind), expression)?;
    }
    set.add_instantiating(Binary2Info { hub: expression }, expression)?;
    set.add_instantiating(Unary2Info { hub: expression }, expression)?;
    set.add_instantiating(Assign2Info { hub: expression }, expression)?;
    set.add_instantiating(Call2Info { hub: expression }, expression)?;

    let condition = set.add(Condition2Instr { expr: expression });
    let for_condition = set.add(ForCondition2Instr { expr: expression });
    let for_update = set.add(ForUpdate2Instr { expr: expression });

    let statement = set.add(Statement2Instr);
    for kind in [
        JavaKind::LocalVar,
        JavaKind::ExprStmt,
        JavaKind::Return,
        JavaKind::Break,
        JavaKind::Continue,
    ] {
        set.add_instantiating(Simple2Instr { kind, expr: expression }, statement)?;
    }
    for kind in [JavaKind::Block, JavaKind::Labeled, JavaKind::Empty] {
        set.add_instantiating(Transparent2Instr { kind, hub: statement }, statement)?;
    }
    for kind in [JavaKind::If, JavaKind::While] {
        set.add_instantiating(
            Branching2Instr {
                kind,
                hub: statement,
                condition,
            },
            statement,
        )?;
    }
    set.add_instantiating(
        For2Instr {
            hub: statement,
            condition: for_condition,
            update: for_update,
        },
        statement,
    )?;
    let method = set.add(Method2Graph { statement });
    Ok(StructureRules {
        method,
        statement,
        expression,
        condition,
        for_condition,
        for_update,
    })
}
