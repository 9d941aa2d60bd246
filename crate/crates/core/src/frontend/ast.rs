//! Syntax tree for the supported Java subset.

use std::fmt;

/// A 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompilationUnit {
    pub classes: Vec<ClassDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub methods: Vec<MethodDecl>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    /// Always a [`StmtKind::Block`].
    pub body: Stmt,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Block(Vec<Stmt>),
    LocalVar {
        ty: String,
        name: String,
        init: Option<Expr>,
    },
    Expr(Expr),
    If {
        cond: Expr,
        then: Box<Stmt>,
        otherwise: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        update: Option<Expr>,
        body: Box<Stmt>,
    },
    Return(Option<Expr>),
    Break(Option<String>),
    Continue(Option<String>),
    Labeled {
        label: String,
        body: Box<Stmt>,
    },
    Empty,
}

impl StmtKind {
    pub fn is_loop(&self) -> bool {
        matches!(self, StmtKind::While { .. } | StmtKind::For { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Assign {
        target: String,
        op: AssignOp,
        value: Box<Expr>,
    },
    Binary {
        left: Box<Expr>,
        op: BinaryOp,
        right: Box<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    VarRef(String),
    IntLit(i64),
    BoolLit(bool),
    Call {
        name: String,
        args: Vec<Expr>,
    },
}

impl ExprKind {
    /// Binding strength used for rendering; higher binds tighter.
    pub fn precedence(&self) -> u8 {
        match self {
            ExprKind::Assign { .. } => 0,
            ExprKind::Binary { op, .. } => op.precedence(),
            ExprKind::Unary { op, .. } if op.is_postfix() => 9,
            ExprKind::Unary { .. } => 8,
            _ => 10,
        }
    }

    /// True for assignments and increment/decrement, the only expressions that write a variable.
    pub fn has_side_effect(&self) -> bool {
        match self {
            ExprKind::Assign { .. } => true,
            ExprKind::Unary { op, .. } => op.is_step(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignOp {
    Assign,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl AssignOp {
    pub const ALL: [AssignOp; 6] = [
        AssignOp::Assign,
        AssignOp::Add,
        AssignOp::Sub,
        AssignOp::Mul,
        AssignOp::Div,
        AssignOp::Rem,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Assign => "=",
            AssignOp::Add => "+=",
            AssignOp::Sub => "-=",
            AssignOp::Mul => "*=",
            AssignOp::Div => "/=",
            AssignOp::Rem => "%=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == s)
    }

    /// Compound operators read their target before writing it.
    pub fn reads_target(self) -> bool {
        self != AssignOp::Assign
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 13] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Rem,
        BinaryOp::Lt,
        BinaryOp::Gt,
        BinaryOp::Le,
        BinaryOp::Ge,
        BinaryOp::Eq,
        BinaryOp::Ne,
        BinaryOp::And,
        BinaryOp::Or,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Gt | BinaryOp::Le | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Not,
    PreInc,
    PreDec,
    PostInc,
    PostDec,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 6] = [
        UnaryOp::Neg,
        UnaryOp::Not,
        UnaryOp::PreInc,
        UnaryOp::PreDec,
        UnaryOp::PostInc,
        UnaryOp::PostDec,
    ];

    /// Name used by the JSON AST format.
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Not => "!",
            UnaryOp::PreInc => "++pre",
            UnaryOp::PreDec => "--pre",
            UnaryOp::PostInc => "++post",
            UnaryOp::PostDec => "--post",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == s)
    }

    /// Source token.
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Not => "!",
            UnaryOp::PreInc | UnaryOp::PostInc => "++",
            UnaryOp::PreDec | UnaryOp::PostDec => "--",
        }
    }

    pub fn is_postfix(self) -> bool {
        matches!(self, UnaryOp::PostInc | UnaryOp::PostDec)
    }

    /// Increment or decrement.
    pub fn is_step(self) -> bool {
        !matches!(self, UnaryOp::Neg | UnaryOp::Not)
    }
}

impl CompilationUnit {
    pub fn methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.classes.iter().flat_map(|c| c.methods.iter())
    }

    /// Copy of the tree with every position reset to `0:0`.
    pub fn without_positions(&self) -> CompilationUnit {
        let mut unit = self.clone();
        for class in &mut unit.classes {
            class.pos = Pos::default();
            for method in &mut class.methods {
                method.clear_positions();
            }
        }
        unit
    }
}

impl MethodDecl {
    pub fn clear_positions(&mut self) {
        self.pos = Pos::default();
        for p in &mut self.params {
            p.pos = Pos::default();
        }
        self.body.clear_positions();
    }

    pub fn body_statements(&self) -> &[Stmt] {
        match &self.body.kind {
            StmtKind::Block(stmts) => stmts,
            _ => std::slice::from_ref(&self.body),
        }
    }
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Self {
        Stmt {
            kind,
            pos: Pos::default(),
        }
    }

    pub fn clear_positions(&mut self) {
        self.pos = Pos::default();
        match &mut self.kind {
            StmtKind::Block(stmts) => stmts.iter_mut().for_each(Stmt::clear_positions),
            StmtKind::LocalVar { init, .. } => {
                if let Some(e) = init {
                    e.clear_positions();
                }
            }
            StmtKind::Expr(e) => e.clear_positions(),
            StmtKind::If { cond, then, otherwise } => {
                cond.clear_positions();
                then.clear_positions();
                if let Some(s) = otherwise {
                    s.clear_positions();
                }
            }
            StmtKind::While { cond, body } => {
                cond.clear_positions();
                body.clear_positions();
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                if let Some(s) = init {
                    s.clear_positions();
                }
                if let Some(e) = cond {
                    e.clear_positions();
                }
                if let Some(e) = update {
                    e.clear_positions();
                }
                body.clear_positions();
            }
            StmtKind::Return(Some(e)) => e.clear_positions(),
            StmtKind::Labeled { body, .. } => body.clear_positions(),
            StmtKind::Return(None) | StmtKind::Break(_) | StmtKind::Continue(_) | StmtKind::Empty => {}
        }
    }

    /// Direct child statements in source order.
    pub fn children(&self) -> Vec<&Stmt> {
        match &self.kind {
            StmtKind::Block(stmts) => stmts.iter().collect(),
            StmtKind::If { then, otherwise, .. } => {
                std::iter::once(then.as_ref()).chain(otherwise.as_deref()).collect()
            }
            StmtKind::While { body, .. } | StmtKind::Labeled { body, .. } => vec![body.as_ref()],
            StmtKind::For { init, body, .. } => init
                .as_deref()
                .into_iter()
                .chain(std::iter::once(body.as_ref()))
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            pos: Pos::default(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::new(ExprKind::VarRef(name.into()))
    }

    pub fn int(value: i64) -> Self {
        Expr::new(ExprKind::IntLit(value))
    }

    pub fn clear_positions(&mut self) {
        self.pos = Pos::default();
        match &mut self.kind {
            ExprKind::Assign { value, .. } => value.clear_positions(),
            ExprKind::Binary { left, right, .. } => {
                left.clear_positions();
                right.clear_positions();
            }
            ExprKind::Unary { operand, .. } => operand.clear_positions(),
            ExprKind::Call { args, .. } => args.iter_mut().for_each(Expr::clear_positions),
            ExprKind::VarRef(_) | ExprKind::IntLit(_) | ExprKind::BoolLit(_) => {}
        }
    }

    /// Direct sub-expressions in source order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Assign { value, .. } => vec![value.as_ref()],
            ExprKind::Binary { left, right, .. } => vec![left.as_ref(), right.as_ref()],
            ExprKind::Unary { operand, .. } => vec![operand.as_ref()],
            ExprKind::Call { args, .. } => args.iter().collect(),
            _ => Vec::new(),
        }
    }
}
