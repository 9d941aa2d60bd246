//! Java-subset frontend: source parser, JSON AST loader and semantic checks.

pub mod ast;
mod json;
mod lexer;
mod parser;
mod print;
mod semantic;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use json::dump_ast_json;
pub use print::{print_expr, print_method, print_unit};
pub use semantic::check_method;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}{}", ExpectedList(.expected))]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted at `pos`, when known.
    pub expected: Vec<String>,
}

struct ExpectedList<'a>(&'a [String]);

impl fmt::Display for ExpectedList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.0.is_empty() {
            write!(f, " (expected {})", self.0.join(" or "))?;
        }
        Ok(())
    }
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn unexpected(pos: Pos, found: String, expected: Vec<String>) -> Self {
        SyntaxError {
            pos,
            message: format!("unexpected {found}"),
            expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema error at `{path}`: {message}")]
pub struct SchemaError {
    /// Location inside the document, e.g. `classes[0].methods[0].name`.
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: &str, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("semantic error at {pos}: {kind}")]
pub struct SemanticError {
    pub pos: Pos,
    pub kind: SemanticErrorKind,
}

impl SemanticError {
    pub fn new(pos: Pos, kind: SemanticErrorKind) -> Self {
        SemanticError { pos, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticErrorKind {
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate method `{0}`")]
    DuplicateMethod(String),
    #[error("duplicate parameter `{0}`")]
    DuplicateParameter(String),
    #[error("method body must be a block")]
    BodyNotBlock,
    #[error("`{0}` outside of a loop")]
    JumpOutsideLoop(String),
    #[error("undefined label `{0}`")]
    UndefinedLabel(String),
    #[error("label `{0}` does not decorate a loop")]
    LabelNotLoop(String),
    #[error("label `{0}` is already in use")]
    DuplicateLabel(String),
    #[error("variable declaration is not allowed here")]
    DeclarationNotAllowed,
    #[error("for-loop initializer must be a declaration or an expression")]
    InvalidForInit,
    #[error("assignments and increments are only allowed as whole statements")]
    NestedSideEffect,
    #[error("operand of an increment or decrement must be a plain variable")]
    StepOperandNotVariable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

/// Parses Java-subset source text and runs the semantic checks.
pub fn parse_java(source: &str) -> Result<CompilationUnit, FrontendError> {
    let unit = parser::parse_unit(source)?;
    semantic::check_unit(&unit)?;
    Ok(unit)
}

/// Loads a JSON-encoded syntax tree and runs the semantic checks.
pub fn load_ast_json(document: &str) -> Result<CompilationUnit, FrontendError> {
    let unit = json::load_ast_json(document)?;
    semantic::check_unit(&unit)?;
    Ok(unit)
}
