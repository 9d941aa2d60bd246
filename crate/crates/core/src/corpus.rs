//! Program generators: seeded random methods for property tests, and
//! synthetic methods of a given size for benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frontend::{
    AssignOp, BinaryOp, ClassDecl, CompilationUnit, Expr, ExprKind, MethodDecl, Param, Pos, Stmt, StmtKind, UnaryOp,
};

struct Generator {
    rng: ChaCha8Rng,
    budget: usize,
    max_vars: usize,
    vars: Vec<String>,
    /// Labels of the enclosing loops, innermost last; `None` for unlabelled ones.
    loops: Vec<Option<String>>,
    next_label: usize,
}

/// A random method, deterministic in `seed`. It declares every variable at
/// the top level before use, gives each loop a body, and only jumps from
/// inside loops. At most `max_statements` statements and `max_vars`
/// variables (parameters included) are generated.
pub fn generate_random_method(seed: u64, max_statements: usize, max_vars: usize) -> MethodDecl {
    assert!(max_statements >= 1 && max_vars >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = rng.random_range(1..=max_statements);
    let mut g = Generator {
        rng,
        budget,
        max_vars,
        vars: Vec::new(),
        loops: Vec::new(),
        next_label: 0,
    };
    let params = g.rng.random_range(0..=max_vars.min(2));
    let params: Vec<Param> = (0..params)
        .map(|_| {
            let name = g.fresh_var();
            Param {
                name,
                ty: "int".into(),
                pos: Pos::default(),
            }
        })
        .collect();
    let mut body = Vec::new();
    while g.budget > 0 {
        let s = if g.vars.len() < g.max_vars && g.rng.random_bool(0.35) {
            g.budget -= 1;
            g.declaration()
        } else {
            g.statement(0)
        };
        body.push(s);
    }
    MethodDecl {
        name: format!("m{seed}"),
        params,
        body: Stmt::new(StmtKind::Block(body)),
        pos: Pos::default(),
    }
}

impl Generator {
    fn fresh_var(&mut self) -> String {
        let name = format!("v{}", self.vars.len());
        self.vars.push(name.clone());
        name
    }

    fn declaration(&mut self) -> Stmt {
        let init = if self.rng.random_bool(0.8) {
            Some(self.value(1))
        } else {
            None
        };
        let name = self.fresh_var();
        Stmt::new(StmtKind::LocalVar {
            ty: "int".into(),
            name,
            init,
        })
    }

    fn var(&mut self) -> Option<String> {
        if self.vars.is_empty() {
            None
        } else {
            let i = self.rng.random_range(0..self.vars.len());
            Some(self.vars[i].clone())
        }
    }

    fn atom(&mut self) -> Expr {
        match self.var() {
            Some(v) if self.rng.random_bool(0.7) => Expr::var(v),
            _ => Expr::int(self.rng.random_range(0..10)),
        }
    }

    /// An int-valued expression without side effects.
    fn value(&mut self, depth: usize) -> Expr {
        if depth >= 3 || self.rng.random_bool(0.45) {
            return self.atom();
        }
        match self.rng.random_range(0..8) {
            0 => Expr::new(ExprKind::Unary {
                op: UnaryOp::Neg,
                operand: Box::new(self.value(depth + 1)),
            }),
            1 => {
                let n = self.rng.random_range(0..3);
                Expr::new(ExprKind::Call {
                    name: "g".into(),
                    args: (0..n).map(|_| self.value(depth + 1)).collect(),
                })
            }
            _ => {
                const OPS: [BinaryOp; 5] = [
                    BinaryOp::Add,
                    BinaryOp::Sub,
                    BinaryOp::Mul,
                    BinaryOp::Div,
                    BinaryOp::Rem,
                ];
                let op = OPS[self.rng.random_range(0..OPS.len())];
                binary(self.value(depth + 1), op, self.value(depth + 1))
            }
        }
    }

    fn condition(&mut self, depth: usize) -> Expr {
        match self.rng.random_range(0..10) {
            0 if depth < 2 => {
                let op = if self.rng.random_bool(0.5) {
                    BinaryOp::And
                } else {
                    BinaryOp::Or
                };
                binary(self.condition(depth + 1), op, self.condition(depth + 1))
            }
            1 if depth < 2 => Expr::new(ExprKind::Unary {
                op: UnaryOp::Not,
                operand: Box::new(self.condition(depth + 1)),
            }),
            2 => Expr::new(ExprKind::BoolLit(self.rng.random_bool(0.5))),
            _ => {
                const OPS: [BinaryOp; 6] = [
                    BinaryOp::Lt,
                    BinaryOp::Gt,
                    BinaryOp::Le,
                    BinaryOp::Ge,
                    BinaryOp::Eq,
                    BinaryOp::Ne,
                ];
                let op = OPS[self.rng.random_range(0..OPS.len())];
                binary(self.value(2), op, self.value(2))
            }
        }
    }

    /// An assignment, increment or call, valid as a statement on its own.
    fn effect(&mut self) -> Expr {
        let Some(v) = self.var() else {
            return Expr::new(ExprKind::Call {
                name: "f".into(),
                args: Vec::new(),
            });
        };
        match self.rng.random_range(0..10) {
            0..=4 => Expr::new(ExprKind::Assign {
                target: v,
                op: AssignOp::Assign,
                value: Box::new(self.value(1)),
            }),
            5 | 6 => Expr::new(ExprKind::Assign {
                target: v,
                op: AssignOp::ALL[self.rng.random_range(1..AssignOp::ALL.len())],
                value: Box::new(self.value(1)),
            }),
            7 | 8 => {
                const STEPS: [UnaryOp; 4] = [UnaryOp::PreInc, UnaryOp::PreDec, UnaryOp::PostInc, UnaryOp::PostDec];
                Expr::new(ExprKind::Unary {
                    op: STEPS[self.rng.random_range(0..STEPS.len())],
                    operand: Box::new(Expr::var(v)),
                })
            }
            _ => {
                let arg = self.value(1);
                Expr::new(ExprKind::Call {
                    name: "f".into(),
                    args: vec![arg],
                })
            }
        }
    }

    /// A block of `1..=budget` statements.
    fn block(&mut self, depth: usize) -> Stmt {
        let mut stmts = vec![self.statement(depth)];
        while self.budget > 0 && self.rng.random_bool(0.5) {
            stmts.push(self.statement(depth));
        }
        Stmt::new(StmtKind::Block(stmts))
    }

    fn statement(&mut self, depth: usize) -> Stmt {
        self.budget = self.budget.saturating_sub(1);
        let nested = self.budget > 0 && depth < 4;
        let in_loop = !self.loops.is_empty();
        match self.rng.random_range(0..20) {
            0..=2 if nested => {
                let cond = self.condition(0);
                let then = Box::new(self.block(depth + 1));
                let otherwise = if self.budget > 0 && self.rng.random_bool(0.5) {
                    Some(Box::new(self.block(depth + 1)))
                } else {
                    None
                };
                Stmt::new(StmtKind::If { cond, then, otherwise })
            }
            3 | 4 if nested => self.maybe_labeled(depth, false),
            5 if nested => self.maybe_labeled(depth, true),
            6 | 7 if in_loop => self.jump(true),
            8 if in_loop => self.jump(false),
            9 => Stmt::new(StmtKind::Return(if self.rng.random_bool(0.5) {
                Some(self.value(1))
            } else {
                None
            })),
            10 if self.rng.random_bool(0.3) => Stmt::new(if self.rng.random_bool(0.5) {
                StmtKind::Empty
            } else {
                StmtKind::Block(Vec::new())
            }),
            _ => Stmt::new(StmtKind::Expr(self.effect())),
        }
    }

    fn maybe_labeled(&mut self, depth: usize, is_for: bool) -> Stmt {
        let label = if self.rng.random_bool(0.3) {
            self.next_label += 1;
            Some(format!("l{}", self.next_label))
        } else {
            None
        };
        self.loops.push(label.clone());
        let stmt = if is_for {
            self.for_loop(depth)
        } else {
            self.while_loop(depth)
        };
        self.loops.pop();
        match label {
            Some(label) => Stmt::new(StmtKind::Labeled {
                label,
                body: Box::new(stmt),
            }),
            None => stmt,
        }
    }

    fn while_loop(&mut self, depth: usize) -> Stmt {
        let cond = self.condition(0);
        let body = Box::new(self.block(depth + 1));
        Stmt::new(StmtKind::While { cond, body })
    }

    fn for_loop(&mut self, depth: usize) -> Stmt {
        let init = match self.var() {
            Some(v) if self.budget > 1 && self.rng.random_bool(0.7) => {
                self.budget -= 1;
                Some(Box::new(Stmt::new(StmtKind::Expr(Expr::new(ExprKind::Assign {
                    target: v,
                    op: AssignOp::Assign,
                    value: Box::new(self.atom()),
                })))))
            }
            _ => None,
        };
        let cond = if self.rng.random_bool(0.8) {
            Some(self.condition(0))
        } else {
            None
        };
        let update = match self.var() {
            Some(v) if self.rng.random_bool(0.7) => Some(Expr::new(ExprKind::Unary {
                op: UnaryOp::PostInc,
                operand: Box::new(Expr::var(v)),
            })),
            _ => None,
        };
        let body = Box::new(self.block(depth + 1));
        Stmt::new(StmtKind::For {
            init,
            cond,
            update,
            body,
        })
    }

    fn jump(&mut self, is_break: bool) -> Stmt {
        let labels: Vec<String> = self.loops.iter().flatten().cloned().collect();
        let label = if !labels.is_empty() && self.rng.random_bool(0.4) {
            Some(labels[self.rng.random_range(0..labels.len())].clone())
        } else {
            None
        };
        Stmt::new(if is_break {
            StmtKind::Break(label)
        } else {
            StmtKind::Continue(label)
        })
    }
}

fn binary(left: Expr, op: BinaryOp, right: Expr) -> Expr {
    Expr::new(ExprKind::Binary {
        left: Box::new(left),
        op,
        right: Box::new(right),
    })
}

/// Shapes of synthetic benchmark methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Assignments only, cycling over eight variables.
    Straight,
    /// Repeated `while` loops containing a `for` loop.
    Nested,
    /// Repeated `if`/`else` chains.
    Branchy,
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "straight" => Ok(Profile::Straight),
            "nested" => Ok(Profile::Nested),
            "branchy" => Ok(Profile::Branchy),
            other => Err(format!(
                "unknown profile `{other}` (expected straight, nested or branchy)"
            )),
        }
    }
}

const SYNTHETIC_VARS: usize = 8;

fn parse_stmt(src: &str) -> Stmt {
    let unit = crate::frontend::parse_java(&format!(
        "class S {{ void s(int v0, int v1, int v2, int v3, int v4, int v5, int v6, int v7) {{ {src} }} }}"
    ))
    .expect("synthetic statement parses");
    let mut m = unit.classes.into_iter().next().unwrap().methods.remove(0);
    let StmtKind::Block(mut stmts) = std::mem::replace(&mut m.body.kind, StmtKind::Empty) else {
        unreachable!()
    };
    stmts.remove(0)
}

/// A method with `size` statements (counting nested ones) of the given shape.
pub fn synthetic_method(profile: Profile, size: usize) -> MethodDecl {
    let mut body = Vec::new();
    let mut count = 0;
    let mut i = 0usize;
    while count < size {
        let (a, b, c) = (i % SYNTHETIC_VARS, (i + 3) % SYNTHETIC_VARS, (i + 5) % SYNTHETIC_VARS);
        let (src, n) = match profile {
            Profile::Straight => (format!("v{a} = v{b} + {i};"), 1),
            Profile::Nested => (
                format!("while (v{a} < {i}) {{ v{b} = v{a} + 1; for (v{c} = 0; v{c} < v{b}; v{c}++) {{ if (v{c} == 7) break; v{a} += v{c}; }} v{a}++; }}"),
                8,
            ),
            Profile::Branchy => (
                format!("if (v{a} < v{b}) {{ v{c} = v{a}; }} else if (v{a} == {i}) {{ v{c} = v{b}; }} else {{ v{b} = v{c} - 1; }}"),
                5,
            ),
        };
        body.push(parse_stmt(&src));
        count += n;
        i += 1;
    }
    MethodDecl {
        name: "bench".into(),
        params: (0..SYNTHETIC_VARS)
            .map(|k| Param {
                name: format!("v{k}"),
                ty: "int".into(),
                pos: Pos::default(),
            })
            .collect(),
        body: Stmt::new(StmtKind::Block(body)),
        pos: Pos::default(),
    }
}

/// Wraps methods into a single class.
pub fn unit_of(methods: Vec<MethodDecl>) -> CompilationUnit {
    CompilationUnit {
        classes: vec![ClassDecl {
            name: "Generated".into(),
            methods,
            pos: Pos::default(),
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{check_method, parse_java, print_unit};

    fn count(s: &Stmt) -> usize {
        let own = usize::from(!matches!(s.kind, StmtKind::Block(_) | StmtKind::Labeled { .. }));
        own + s.children().into_iter().map(count).sum::<usize>()
    }

    #[test]
    fn same_seed_same_method() {
        for seed in 0..20 {
            assert_eq!(generate_random_method(seed, 12, 4), generate_random_method(seed, 12, 4));
        }
        assert_ne!(generate_random_method(1, 12, 4), generate_random_method(2, 12, 4));
    }

    #[test]
    fn single_statement_single_var() {
        for seed in 0..50 {
            let m = generate_random_method(seed, 1, 1);
            let stmts = m.body_statements();
            assert_eq!(stmts.len(), 1);
            assert!(m.params.len() <= 1);
            check_method(&m).unwrap();
        }
        let m = generate_random_method(0, 1, 1);
        assert!(matches!(
            m.body_statements()[0].kind,
            StmtKind::LocalVar { .. } | StmtKind::Return(_) | StmtKind::Expr(_) | StmtKind::Empty | StmtKind::Block(_)
        ));
    }

    #[test]
    fn generated_methods_are_valid_and_bounded() {
        for seed in 0..300 {
            let m = generate_random_method(seed, 12, 4);
            check_method(&m).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            let statements: usize = m.body_statements().iter().map(count).sum();
            assert!(statements <= 12, "seed {seed}: {statements}");
            let locals = m
                .body_statements()
                .iter()
                .filter(|s| matches!(s.kind, StmtKind::LocalVar { .. }))
                .count();
            assert!(m.params.len() + locals <= 4);
            // printing and re-parsing gives the same tree
            let unit = unit_of(vec![m]);
            let back = parse_java(&print_unit(&unit)).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(back.without_positions(), unit);
        }
    }

    #[test]
    fn synthetic_sizes() {
        for profile in [Profile::Straight, Profile::Nested, Profile::Branchy] {
            assert!(synthetic_method(profile, 0).body_statements().is_empty());
            let m = synthetic_method(profile, 100);
            let n: usize = m.body_statements().iter().map(count).sum();
            assert!((100..107).contains(&n), "{profile:?}: {n}");
            check_method(&m).unwrap();
        }
    }
}
