//! Pretty-printing of syntax trees back to source text.

use std::fmt::Write as _;

use super::ast::*;

pub fn print_unit(unit: &CompilationUnit) -> String {
    let mut out = String::new();
    for class in &unit.classes {
        let _ = writeln!(out, "class {} {{", class.name);
        for (i, m) in class.methods.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            print_method_into(&mut out, m, 1);
        }
        out.push_str("}\n");
    }
    out
}

pub fn print_method(method: &MethodDecl) -> String {
    let mut out = String::new();
    print_method_into(&mut out, method, 0);
    out
}

fn print_method_into(out: &mut String, m: &MethodDecl, depth: usize) {
    let returns_value = returns_value(&m.body);
    let params: Vec<String> = m.params.iter().map(|p| format!("{} {}", p.ty, p.name)).collect();
    indent(out, depth);
    let _ = write!(
        out,
        "{} {}({}) ",
        if returns_value { "int" } else { "void" },
        m.name,
        params.join(", ")
    );
    stmt(out, &m.body, depth);
    out.push('\n');
}

fn returns_value(s: &Stmt) -> bool {
    matches!(s.kind, StmtKind::Return(Some(_))) || s.children().into_iter().any(returns_value)
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

/// Writes `s` assuming the cursor is already indented.
fn stmt(out: &mut String, s: &Stmt, depth: usize) {
    match &s.kind {
        StmtKind::Block(stmts) => {
            out.push_str("{\n");
            for c in stmts {
                indent(out, depth + 1);
                stmt(out, c, depth + 1);
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
        StmtKind::LocalVar { .. } | StmtKind::Expr(_) => {
            out.push_str(&header_stmt(s));
            out.push(';');
        }
        StmtKind::If { cond, then, otherwise } => {
            let _ = write!(out, "if ({}) ", print_expr(cond));
            stmt(out, then, depth);
            if let Some(o) = otherwise {
                out.push_str(" else ");
                stmt(out, o, depth);
            }
        }
        StmtKind::While { cond, body } => {
            let _ = write!(out, "while ({}) ", print_expr(cond));
            stmt(out, body, depth);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            let _ = write!(
                out,
                "for ({}; {}; {}) ",
                init.as_deref().map(header_stmt).unwrap_or_default(),
                cond.as_ref().map(print_expr).unwrap_or_default(),
                update.as_ref().map(print_expr).unwrap_or_default()
            );
            stmt(out, body, depth);
        }
        StmtKind::Return(value) => match value {
            Some(e) => {
                let _ = write!(out, "return {};", print_expr(e));
            }
            None => out.push_str("return;"),
        },
        StmtKind::Break(label) => jump(out, "break", label),
        StmtKind::Continue(label) => jump(out, "continue", label),
        StmtKind::Labeled { label, body } => {
            let _ = write!(out, "{label}: ");
            stmt(out, body, depth);
        }
        StmtKind::Empty => out.push(';'),
    }
}

fn jump(out: &mut String, keyword: &str, label: &Option<String>) {
    match label {
        Some(l) => {
            let _ = write!(out, "{keyword} {l};");
        }
        None => {
            let _ = write!(out, "{keyword};");
        }
    }
}

/// A declaration or expression statement without its semicolon.
fn header_stmt(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::LocalVar {
            ty,
            name,
            init: Some(e),
        } => format!("{ty} {name} = {}", print_expr(e)),
        StmtKind::LocalVar { ty, name, init: None } => format!("{ty} {name}"),
        StmtKind::Expr(e) => print_expr(e),
        _ => String::new(),
    }
}

/// Source text of an expression with only the parentheses precedence needs.
pub fn print_expr(e: &Expr) -> String {
    let child = |c: &Expr, min: u8, strict: bool| {
        let text = print_expr(c);
        let p = c.kind.precedence();
        if p < min || (strict && p == min) {
            format!("({text})")
        } else {
            text
        }
    };
    match &e.kind {
        ExprKind::Assign { target, op, value } => format!("{target} {} {}", op.symbol(), child(value, 0, false)),
        ExprKind::Binary { left, op, right } => {
            let p = op.precedence();
            format!("{} {} {}", child(left, p, false), op.symbol(), child(right, p, true))
        }
        ExprKind::Unary { op, operand } => {
            let p = e.kind.precedence();
            let mut body = child(operand, p, false);
            if op.is_postfix() {
                return format!("{body}{}", op.symbol());
            }
            let sign = op.symbol().chars().next();
            if !body.starts_with('(') && body.chars().next() == sign && matches!(sign, Some('-' | '+')) {
                body = format!("({body})");
            }
            format!("{}{body}", op.symbol())
        }
        ExprKind::VarRef(name) => name.clone(),
        ExprKind::IntLit(v) => v.to_string(),
        ExprKind::BoolLit(b) => b.to_string(),
        ExprKind::Call { name, args } => {
            let args: Vec<String> = args.iter().map(|a| child(a, 1, false)).collect();
            format!("{name}({})", args.join(", "))
        }
    }
}
