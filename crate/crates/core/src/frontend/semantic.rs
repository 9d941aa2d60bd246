//! Checks that the parser's grammar alone cannot express.

use std::collections::HashSet;

use super::ast::*;
use super::{SemanticError, SemanticErrorKind};

pub fn check_unit(unit: &CompilationUnit) -> Result<(), SemanticError> {
    let mut classes = HashSet::new();
    for class in &unit.classes {
        if !classes.insert(class.name.as_str()) {
            return Err(SemanticError::new(
                class.pos,
                SemanticErrorKind::DuplicateClass(class.name.clone()),
            ));
        }
        let mut methods = HashSet::new();
        for method in &class.methods {
            if !methods.insert(method.name.as_str()) {
                return Err(SemanticError::new(
                    method.pos,
                    SemanticErrorKind::DuplicateMethod(method.name.clone()),
                ));
            }
            check_method(method)?;
        }
    }
    Ok(())
}

/// Validates parameters, jump targets and the placement of side-effecting expressions.
pub fn check_method(method: &MethodDecl) -> Result<(), SemanticError> {
    let mut params = HashSet::new();
    for p in &method.params {
        if !params.insert(p.name.as_str()) {
            return Err(SemanticError::new(
                p.pos,
                SemanticErrorKind::DuplicateParameter(p.name.clone()),
            ));
        }
    }
    if !matches!(method.body.kind, StmtKind::Block(_)) {
        return Err(SemanticError::new(method.body.pos, SemanticErrorKind::BodyNotBlock));
    }
    let mut checker = Checker { labels: Vec::new() };
    checker.stmt(&method.body)
}

struct Checker<'a> {
    /// Enclosing labels; the flag tells whether the label decorates a loop.
    labels: Vec<(&'a str, bool)>,
}

#[derive(Clone, Copy)]
struct Loops(usize);

impl<'a> Checker<'a> {
    fn stmt(&mut self, s: &'a Stmt) -> Result<(), SemanticError> {
        self.stmt_in(s, Loops(0))
    }

    fn stmt_in(&mut self, s: &'a Stmt, loops: Loops) -> Result<(), SemanticError> {
        match &s.kind {
            StmtKind::Block(stmts) => {
                for child in stmts {
                    self.stmt_in(child, loops)?;
                }
            }
            StmtKind::LocalVar { init, .. } => {
                if let Some(e) = init {
                    pure_expr(e)?;
                }
            }
            StmtKind::Expr(e) => statement_expr(e)?,
            StmtKind::If { cond, then, otherwise } => {
                pure_expr(cond)?;
                self.nested(then, loops)?;
                if let Some(o) = otherwise {
                    self.nested(o, loops)?;
                }
            }
            StmtKind::While { cond, body } => {
                pure_expr(cond)?;
                self.nested(body, Loops(loops.0 + 1))?;
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                if let Some(init) = init {
                    match &init.kind {
                        StmtKind::LocalVar { .. } | StmtKind::Expr(_) => self.stmt_in(init, loops)?,
                        _ => return Err(SemanticError::new(init.pos, SemanticErrorKind::InvalidForInit)),
                    }
                }
                if let Some(c) = cond {
                    pure_expr(c)?;
                }
                if let Some(u) = update {
                    statement_expr(u)?;
                }
                self.nested(body, Loops(loops.0 + 1))?;
            }
            StmtKind::Return(value) => {
                if let Some(e) = value {
                    pure_expr(e)?;
                }
            }
            StmtKind::Break(label) | StmtKind::Continue(label) => {
                let is_break = matches!(s.kind, StmtKind::Break(_));
                match label {
                    None if loops.0 == 0 => {
                        return Err(SemanticError::new(
                            s.pos,
                            SemanticErrorKind::JumpOutsideLoop(if is_break { "break" } else { "continue" }.to_string()),
                        ))
                    }
                    None => {}
                    Some(name) => match self.labels.iter().rev().find(|(l, _)| l == name) {
                        Some((_, true)) => {}
                        Some((_, false)) => {
                            return Err(SemanticError::new(s.pos, SemanticErrorKind::LabelNotLoop(name.clone())))
                        }
                        None => {
                            return Err(SemanticError::new(
                                s.pos,
                                SemanticErrorKind::UndefinedLabel(name.clone()),
                            ))
                        }
                    },
                }
            }
            StmtKind::Labeled { label, body } => {
                if self.labels.iter().any(|(l, _)| l == label) {
                    return Err(SemanticError::new(
                        s.pos,
                        SemanticErrorKind::DuplicateLabel(label.clone()),
                    ));
                }
                self.labels.push((label, body.kind.is_loop()));
                let result = self.nested(body, loops);
                self.labels.pop();
                result?;
            }
            StmtKind::Empty => {}
        }
        Ok(())
    }

    fn nested(&mut self, s: &'a Stmt, loops: Loops) -> Result<(), SemanticError> {
        if matches!(s.kind, StmtKind::LocalVar { .. }) {
            return Err(SemanticError::new(s.pos, SemanticErrorKind::DeclarationNotAllowed));
        }
        self.stmt_in(s, loops)
    }
}

/// The top of a statement expression may write one variable; nothing below it may.
fn statement_expr(e: &Expr) -> Result<(), SemanticError> {
    e.children().into_iter().try_for_each(pure_expr)?;
    if let ExprKind::Unary { op, operand } = &e.kind {
        if op.is_step() && !matches!(operand.kind, ExprKind::VarRef(_)) {
            return Err(SemanticError::new(
                operand.pos,
                SemanticErrorKind::StepOperandNotVariable,
            ));
        }
    }
    Ok(())
}

fn pure_expr(e: &Expr) -> Result<(), SemanticError> {
    if e.kind.has_side_effect() {
        return Err(SemanticError::new(e.pos, SemanticErrorKind::NestedSideEffect));
    }
    e.children().into_iter().try_for_each(pure_expr)
}
