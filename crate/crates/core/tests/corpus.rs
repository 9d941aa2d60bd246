mod common;

use std::collections::BTreeSet;

use common::{audited, corpus, listed_edges, txt_edges, txt_unique};
use flowgraphs::frontend::{AssignOp, BinaryOp, Expr, ExprKind, Stmt, StmtKind, UnaryOp};
use flowgraphs::model::{graphs_from_xml, graphs_to_dot, graphs_to_xml, EdgeSet};
use flowgraphs::validator::{check, parse_assertions, Command};

#[test]
fn corpus_is_large_enough() {
    let names: BTreeSet<String> = corpus().into_iter().map(|p| p.name).collect();
    assert!(names.len() >= 15, "{names:?}");
    for required in [
        "if_else",
        "if_no_else",
        "while_continue",
        "while_break",
        "for_full",
        "for_partial",
        "for_bare",
        "labeled_break",
        "labeled_continue",
        "empty_blocks",
        "dead_code",
        "nested_deep",
        "wide",
        "label_heavy",
    ] {
        assert!(names.contains(required), "missing {required}");
    }
}

#[test]
fn outputs_match_golden_files() {
    for p in corpus() {
        let graphs = audited(&p.unit());
        assert_eq!(graphs_to_xml(&graphs), p.read("expected.xml"), "{}", p.name);
        assert_eq!(
            graphs_to_dot(&graphs, EdgeSet::Both),
            p.read("expected.dot"),
            "{}",
            p.name
        );
    }
}

fn compare(command: Command, file: &str) {
    for p in corpus() {
        let graph = audited(&p.unit()).remove(0);
        let listed = listed_edges(&p.read(file), command);
        let listed_set: BTreeSet<_> = listed.iter().cloned().collect();
        assert_eq!(listed.len(), listed_set.len(), "{}: duplicate lines in {file}", p.name);
        let actual = match command {
            Command::DfNext => txt_edges(&graph, graph.df_edges()),
            _ => txt_edges(&graph, graph.cf_edges()),
        };
        if txt_unique(&graph) {
            let missing: Vec<_> = listed_set.difference(&actual).collect();
            let extra: Vec<_> = actual.difference(&listed_set).collect();
            assert!(
                missing.is_empty() && extra.is_empty(),
                "{}: missing {missing:?}, unexpected {extra:?}",
                p.name
            );
        } else {
            assert!(listed_set.is_subset(&actual), "{}", p.name);
        }
    }
}

#[test]
fn control_flow_matches_hand_traced_edges() {
    compare(Command::CfNext, "assertions.cf");
}

#[test]
fn data_flow_matches_hand_traced_edges() {
    compare(Command::DfNext, "assertions.df");
}

#[test]
fn assertion_files_hold() {
    for p in corpus() {
        let graph = audited(&p.unit()).remove(0);
        for file in ["assertions.cf", "assertions.df"] {
            let report = check(&graph, &parse_assertions(&p.read(file)).unwrap());
            assert!(report.all_hold(), "{}/{file}\n{}", p.name, report.render());
        }
    }
}

#[test]
fn golden_xml_reloads_to_the_same_graph() {
    for p in corpus() {
        let text = p.read("expected.xml");
        let graphs = graphs_from_xml(&text).unwrap();
        for g in &graphs {
            g.audit().unwrap();
        }
        assert_eq!(graphs_to_xml(&graphs), text, "{}", p.name);
    }
}

#[test]
fn verdict_fixture_yields_every_verdict() {
    let p = corpus().into_iter().find(|p| p.name == "duplicates").unwrap();
    let graph = graphs_from_xml(&p.read("expected.xml")).unwrap().remove(0);
    let report = check(&graph, &parse_assertions(&p.read("verdicts.assertions")).unwrap());
    let got: Vec<&str> = report.verdicts().map(|v| v.as_str()).collect();
    let expected = p.read("verdicts.expected");
    assert_eq!(got, expected.lines().collect::<Vec<_>>());
    let s = report.summary();
    assert!(s.holds > 0 && s.violated > 0 && s.unknown_source > 0 && s.unknown_target > 0 && s.ambiguous > 0);
}

fn stmt_name(s: &StmtKind) -> &'static str {
    match s {
        StmtKind::Block(_) => "Block",
        StmtKind::LocalVar { init: Some(_), .. } => "LocalVar",
        StmtKind::LocalVar { init: None, .. } => "LocalVar without initializer",
        StmtKind::Expr(_) => "Expr",
        StmtKind::If { otherwise: Some(_), .. } => "If with else",
        StmtKind::If { otherwise: None, .. } => "If",
        StmtKind::While { .. } => "While",
        StmtKind::For { .. } => "For",
        StmtKind::Return(Some(_)) => "Return value",
        StmtKind::Return(None) => "Return",
        StmtKind::Break(Some(_)) => "Break label",
        StmtKind::Break(None) => "Break",
        StmtKind::Continue(Some(_)) => "Continue label",
        StmtKind::Continue(None) => "Continue",
        StmtKind::Labeled { .. } => "Labeled",
        StmtKind::Empty => "Empty",
    }
}

fn walk_expr(e: &Expr, seen: &mut BTreeSet<String>) {
    match &e.kind {
        ExprKind::Assign { op, value, .. } => {
            seen.insert(format!("assign {}", op.symbol()));
            walk_expr(value, seen);
        }
        ExprKind::Binary { left, op, right } => {
            seen.insert(format!("binary {}", op.symbol()));
            walk_expr(left, seen);
            walk_expr(right, seen);
        }
        ExprKind::Unary { op, operand } => {
            seen.insert(format!("unary {op:?}"));
            walk_expr(operand, seen);
        }
        ExprKind::VarRef(_) => {
            seen.insert("VarRef".into());
        }
        ExprKind::IntLit(_) => {
            seen.insert("IntLit".into());
        }
        ExprKind::BoolLit(b) => {
            seen.insert(format!("BoolLit {b}"));
        }
        ExprKind::Call { args, .. } => {
            seen.insert("Call".into());
            for a in args {
                walk_expr(a, seen);
            }
        }
    }
}

fn walk_stmt(s: &Stmt, seen: &mut BTreeSet<String>) {
    seen.insert(stmt_name(&s.kind).into());
    match &s.kind {
        StmtKind::LocalVar { init: Some(e), .. } | StmtKind::Expr(e) | StmtKind::Return(Some(e)) => walk_expr(e, seen),
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => walk_expr(cond, seen),
        StmtKind::For { init, cond, update, .. } => {
            seen.insert(format!(
                "For{}{}{}",
                if init.is_some() { " init" } else { "" },
                if cond.is_some() { " cond" } else { "" },
                if update.is_some() { " update" } else { "" }
            ));
            if let Some(init) = init {
                if matches!(init.kind, StmtKind::Expr(_)) {
                    seen.insert("For expression init".into());
                }
            }
            for e in cond.iter().chain(update) {
                walk_expr(e, seen);
            }
        }
        _ => {}
    }
    for c in s.children() {
        walk_stmt(c, seen);
    }
}

#[test]
fn every_syntax_kind_appears_in_the_corpus() {
    let mut seen = BTreeSet::new();
    for p in corpus() {
        for m in p.unit().methods() {
            walk_stmt(&m.body, &mut seen);
        }
    }
    let mut wanted: Vec<String> = [
        "Block",
        "LocalVar",
        "LocalVar without initializer",
        "Expr",
        "If with else",
        "If",
        "While",
        "For",
        "Return value",
        "Return",
        "Break label",
        "Break",
        "Continue label",
        "Continue",
        "Labeled",
        "Empty",
        "For init cond update",
        "For cond update",
        "For init update",
        "For init cond",
        "For",
        "For expression init",
        "VarRef",
        "IntLit",
        "BoolLit true",
        "BoolLit false",
        "Call",
    ]
    .map(String::from)
    .to_vec();
    wanted.extend(
        [
            AssignOp::Assign,
            AssignOp::Add,
            AssignOp::Sub,
            AssignOp::Mul,
            AssignOp::Div,
            AssignOp::Rem,
        ]
        .map(|op| format!("assign {}", op.symbol())),
    );
    wanted.extend(
        [
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
        ]
        .map(|op| format!("binary {}", op.symbol())),
    );
    wanted.extend(
        [
            UnaryOp::Neg,
            UnaryOp::Not,
            UnaryOp::PreInc,
            UnaryOp::PreDec,
            UnaryOp::PostInc,
            UnaryOp::PostDec,
        ]
        .map(|op| format!("unary {op:?}")),
    );
    let missing: Vec<_> = wanted.iter().filter(|w| !seen.contains(*w)).collect();
    assert!(missing.is_empty(), "not covered: {missing:?}");
}
