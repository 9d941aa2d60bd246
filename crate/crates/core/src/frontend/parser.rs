//! Recursive-descent parser for the Java subset.

use super::ast::*;
use super::lexer::{tokenize, Keyword, Tok, Token};
use super::SyntaxError;

pub fn parse_unit(source: &str) -> Result<CompilationUnit, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, at: 0 };
    let mut classes = Vec::new();
    while !parser.at_eof() {
        classes.push(parser.class_decl()?);
    }
    Ok(CompilationUnit { classes })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.at + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        tok
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(SyntaxError::unexpected(
            self.pos(),
            self.peek().to_string(),
            expected.iter().map(|s| s.to_string()).collect(),
        ))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_keyword(&self, k: Keyword) -> bool {
        matches!(self.peek(), Tok::Keyword(q) if *q == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<Pos> {
        if self.is_punct(p) {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&[&format!("`{p}`")])
        }
    }

    fn expect_keyword(&mut self, k: Keyword) -> PResult<Pos> {
        if self.is_keyword(k) {
            Ok(self.advance().pos)
        } else {
            self.unexpected(&[&format!("`{}`", k.as_str())])
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.advance().pos;
                Ok((name, pos))
            }
            _ => self.unexpected(&["identifier"]),
        }
    }

    fn starts_type(&self) -> bool {
        match self.peek() {
            Tok::Keyword(k) => k.is_primitive_type(),
            Tok::Ident(_) => true,
            _ => false,
        }
    }

    fn type_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Keyword(k) if k.is_primitive_type() => {
                self.advance();
                Ok(k.as_str().to_string())
            }
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => self.unexpected(&["type"]),
        }
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let pos = self.expect_keyword(Keyword::Class)?;
        let (name, _) = self.ident()?;
        self.expect_punct("{")?;
        let mut methods = Vec::new();
        while !self.is_punct("}") {
            if self.at_eof() {
                return self.unexpected(&["`}`", "method declaration"]);
            }
            methods.push(self.method_decl()?);
        }
        self.expect_punct("}")?;
        Ok(ClassDecl { name, methods, pos })
    }

    fn method_decl(&mut self) -> PResult<MethodDecl> {
        let pos = self.pos();
        // The return type is not modelled.
        if !self.is_keyword(Keyword::Void) && !self.starts_type() {
            return self.unexpected(&["`}`", "method declaration"]);
        }
        self.advance();
        let (name, _) = self.ident()?;
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.is_punct(")") {
            loop {
                let pos = self.pos();
                let ty = self.type_name()?;
                let (pname, _) = self.ident()?;
                params.push(Param { name: pname, ty, pos });
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        if !self.is_punct("{") {
            return self.unexpected(&["`{`"]);
        }
        let body = self.block()?;
        Ok(MethodDecl {
            name,
            params,
            body,
            pos,
        })
    }

    fn block(&mut self) -> PResult<Stmt> {
        let pos = self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.is_punct("}") {
            if self.at_eof() {
                return self.unexpected(&["`}`", "statement"]);
            }
            stmts.push(self.statement()?);
        }
        self.advance();
        Ok(Stmt {
            kind: StmtKind::Block(stmts),
            pos,
        })
    }

    /// A statement in a position where Java forbids bare declarations.
    fn sub_statement(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let stmt = self.statement()?;
        if matches!(stmt.kind, StmtKind::LocalVar { .. }) {
            return Err(SyntaxError::new(pos, "variable declaration is not allowed here"));
        }
        Ok(stmt)
    }

    fn is_local_var_start(&self) -> bool {
        match self.peek() {
            Tok::Keyword(k) => k.is_primitive_type(),
            Tok::Ident(_) => matches!(self.peek_at(1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Punct("{") => return self.block(),
            Tok::Punct(";") => {
                self.advance();
                StmtKind::Empty
            }
            Tok::Keyword(Keyword::If) => {
                self.advance();
                self.expect_punct("(")?;
                let cond = self.expression()?;
                self.expect_punct(")")?;
                let then = Box::new(self.sub_statement()?);
                let otherwise = if self.is_keyword(Keyword::Else) {
                    self.advance();
                    Some(Box::new(self.sub_statement()?))
                } else {
                    None
                };
                StmtKind::If { cond, then, otherwise }
            }
            Tok::Keyword(Keyword::While) => {
                self.advance();
                self.expect_punct("(")?;
                let cond = self.expression()?;
                self.expect_punct(")")?;
                let body = Box::new(self.sub_statement()?);
                StmtKind::While { cond, body }
            }
            Tok::Keyword(Keyword::For) => {
                self.advance();
                self.for_rest()?
            }
            Tok::Keyword(Keyword::Return) => {
                self.advance();
                let value = if self.is_punct(";") {
                    None
                } else {
                    Some(self.expression()?)
                };
                self.expect_punct(";")?;
                StmtKind::Return(value)
            }
            Tok::Keyword(k @ (Keyword::Break | Keyword::Continue)) => {
                self.advance();
                let label = match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.advance();
                        Some(name)
                    }
                    _ => None,
                };
                self.expect_punct(";")?;
                if k == Keyword::Break {
                    StmtKind::Break(label)
                } else {
                    StmtKind::Continue(label)
                }
            }
            Tok::Ident(label) if matches!(self.peek_at(1), Tok::Punct(":")) => {
                self.advance();
                self.advance();
                let body = Box::new(self.sub_statement()?);
                StmtKind::Labeled { label, body }
            }
            _ if self.is_local_var_start() => {
                let kind = self.local_var()?;
                self.expect_punct(";")?;
                kind
            }
            Tok::Punct(p) if !matches!(p, "(" | "-" | "!" | "++" | "--") => {
                return self.unexpected(&["statement"]);
            }
            Tok::Ident(_) | Tok::Int(_) | Tok::Punct(_) | Tok::Keyword(Keyword::True | Keyword::False) => {
                let e = self.expression()?;
                self.expect_punct(";")?;
                StmtKind::Expr(e)
            }
            _ => return self.unexpected(&["statement"]),
        };
        Ok(Stmt { kind, pos })
    }

    fn local_var(&mut self) -> PResult<StmtKind> {
        let ty = self.type_name()?;
        let (name, _) = self.ident()?;
        let init = if self.eat_punct("=") {
            Some(self.expression()?)
        } else {
            None
        };
        Ok(StmtKind::LocalVar { ty, name, init })
    }

    fn for_rest(&mut self) -> PResult<StmtKind> {
        self.expect_punct("(")?;
        let init = if self.is_punct(";") {
            None
        } else {
            let pos = self.pos();
            let kind = if self.is_local_var_start() {
                self.local_var()?
            } else {
                StmtKind::Expr(self.expression()?)
            };
            Some(Box::new(Stmt { kind, pos }))
        };
        self.expect_punct(";")?;
        let cond = if self.is_punct(";") {
            None
        } else {
            Some(self.expression()?)
        };
        self.expect_punct(";")?;
        let update = if self.is_punct(")") {
            None
        } else {
            Some(self.expression()?)
        };
        self.expect_punct(")")?;
        let body = Box::new(self.sub_statement()?);
        Ok(StmtKind::For {
            init,
            cond,
            update,
            body,
        })
    }

    pub fn expression(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let left = self.binary(1)?;
        let op = match self.peek() {
            Tok::Punct(p) => AssignOp::from_symbol(p),
            _ => None,
        };
        let Some(op) = op else { return Ok(left) };
        let ExprKind::VarRef(target) = left.kind else {
            return Err(SyntaxError::new(pos, "assignment target must be a plain variable"));
        };
        self.advance();
        let value = Box::new(self.expression()?);
        Ok(Expr {
            kind: ExprKind::Assign { target, op, value },
            pos,
        })
    }

    /// Precedence climbing over the left-associative binary operators.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Punct(p) => BinaryOp::from_symbol(p),
                _ => None,
            };
            let Some(op) = op.filter(|op| op.precedence() >= min_prec) else {
                return Ok(left);
            };
            self.advance();
            let right = self.binary(op.precedence() + 1)?;
            let pos = left.pos;
            left = Expr {
                kind: ExprKind::Binary {
                    left: Box::new(left),
                    op,
                    right: Box::new(right),
                },
                pos,
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let op = match self.peek() {
            Tok::Punct("-") => UnaryOp::Neg,
            Tok::Punct("!") => UnaryOp::Not,
            Tok::Punct("++") => UnaryOp::PreInc,
            Tok::Punct("--") => UnaryOp::PreDec,
            _ => return self.postfix(),
        };
        self.advance();
        let operand = self.unary()?;
        if op.is_step() && !matches!(operand.kind, ExprKind::VarRef(_)) {
            return Err(SyntaxError::new(
                operand.pos,
                format!("operand of `{}` must be a plain variable", op.symbol()),
            ));
        }
        Ok(Expr {
            kind: ExprKind::Unary {
                op,
                operand: Box::new(operand),
            },
            pos,
        })
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Punct("++") => UnaryOp::PostInc,
                Tok::Punct("--") => UnaryOp::PostDec,
                _ => return Ok(e),
            };
            if !matches!(e.kind, ExprKind::VarRef(_)) {
                return Err(SyntaxError::new(
                    self.pos(),
                    format!("operand of `{}` must be a plain variable", op.symbol()),
                ));
            }
            self.advance();
            let pos = e.pos;
            e = Expr {
                kind: ExprKind::Unary {
                    op,
                    operand: Box::new(e),
                },
                pos,
            };
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                ExprKind::IntLit(v)
            }
            Tok::Keyword(Keyword::True) => {
                self.advance();
                ExprKind::BoolLit(true)
            }
            Tok::Keyword(Keyword::False) => {
                self.advance();
                ExprKind::BoolLit(false)
            }
            Tok::Ident(name) => {
                self.advance();
                if self.eat_punct("(") {
                    let mut args = Vec::new();
                    if !self.is_punct(")") {
                        loop {
                            args.push(self.expression()?);
                            if !self.eat_punct(",") {
                                break;
                            }
                        }
                    }
                    self.expect_punct(")")?;
                    ExprKind::Call { name, args }
                } else {
                    ExprKind::VarRef(name)
                }
            }
            Tok::Punct("(") => {
                self.advance();
                let inner = self.expression()?;
                self.expect_punct(")")?;
                return Ok(Expr { kind: inner.kind, pos });
            }
            _ => return self.unexpected(&["expression"]),
        };
        Ok(Expr { kind, pos })
    }
}
