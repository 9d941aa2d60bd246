mod common;

use std::process::{Command, Output};

use common::corpus_dir;
use flowgraphs::frontend::{dump_ast_json, parse_java};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowgraphs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn input(name: &str) -> String {
    corpus_dir()
        .join(name)
        .join("input.java")
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str, file: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name).join(file)).unwrap()
}

fn path(dir: &TempDir, file: &str) -> String {
    dir.path().join(file).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, file: &str, text: &str) -> String {
    let p = path(dir, file);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn transform_writes_xml() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "out.xml");
    let o = run(&["transform", &input("while_continue"), "-o", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        golden("while_continue", "expected.xml")
    );
}

#[test]
fn transform_defaults_to_standard_output() {
    let o = run(&["transform", &input("wide")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("wide", "expected.xml"));
}

#[test]
fn no_dataflow_leaves_control_flow_only() {
    let o = run(&["transform", &input("for_full"), "--no-dataflow"]);
    assert_eq!(o.status.code(), Some(0));
    let xml = stdout(&o);
    assert!(xml.contains("<cfNext"));
    assert_eq!(xml.matches("<dfNext").count(), 0);
}

#[test]
fn no_controlflow_requires_no_dataflow() {
    let o = run(&["transform", &input("for_full"), "--no-controlflow"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--no-controlflow requires --no-dataflow"));

    let o = run(&["transform", &input("for_full"), "--no-controlflow", "--no-dataflow"]);
    assert_eq!(o.status.code(), Some(0));
    let xml = stdout(&o);
    assert_eq!(xml.matches("<cfNext").count() + xml.matches("<dfNext").count(), 0);
    assert!(xml.contains("txt=\"s = s + i\""));
}

#[test]
fn dot_output_draws_both_edge_kinds() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "out.dot");
    let o = run(&[
        "transform",
        &input("if_else"),
        "--format",
        "dot",
        "--edges",
        "both",
        "-o",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert_eq!(dot, golden("if_else", "expected.dot"));
    assert_eq!(dot.matches("[style=dashed]").count(), 5);
    let solid = dot
        .lines()
        .filter(|l| l.contains("->") && !l.contains("dashed"))
        .count();
    assert_eq!(solid, 7);

    let o = run(&["transform", &input("if_else"), "--format", "dot", "--edges", "cf"]);
    assert!(!stdout(&o).contains("dashed"));
    let o = run(&["transform", &input("if_else"), "--format", "dot", "--edges", "df"]);
    let df_only = stdout(&o);
    assert!(df_only
        .lines()
        .filter(|l| l.contains("->"))
        .all(|l| l.contains("dashed")));
}

#[test]
fn fixpoint_flag_gives_identical_output() {
    for name in ["nested_deep", "label_heavy", "labeled_continue"] {
        let a = run(&["transform", &input(name)]);
        let b = run(&["transform", &input(name), "--dataflow", "fixpoint"]);
        assert_eq!(stdout(&a), stdout(&b), "{name}");
    }
}

#[test]
fn stats_go_to_standard_error_as_csv() {
    let o = run(&["transform", &input("straight"), "--stats"]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines[0], "phase,micros");
    let phases: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(phases, ["read", "transform", "controlflow", "dataflow", "write"]);
    for l in &lines[1..] {
        l.split(',').nth(1).unwrap().parse::<u64>().unwrap();
    }
    assert_eq!(stdout(&o), golden("straight", "expected.xml"));
}

#[test]
fn ast_json_input_gives_the_same_graph() {
    let dir = TempDir::new().unwrap();
    let unit = parse_java(&std::fs::read_to_string(input("labeled_break")).unwrap()).unwrap();
    let json = write(&dir, "ast.json", &dump_ast_json(&unit));
    let o = run(&["transform", &json, "--ast-json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("labeled_break", "expected.xml"));
}

#[test]
fn source_errors_exit_one_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "syntax.java", "class C { void m() { int x = ; } }");
    let o = run(&["transform", &syntax]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("syntax.java"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let unbound = write(&dir, "unbound.java", "class C { void m() { x = 1; } }");
    let o = run(&["transform", &unbound]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains('x'));
}

#[test]
fn missing_input_exits_two() {
    let o = run(&["transform", "/nonexistent/input.java"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["validate", "/nonexistent/model.xml", "/nonexistent/a.cf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let model = corpus_dir().join("while_continue").join("expected.xml");
    let model = model.to_str().unwrap();
    let cf = corpus_dir().join("while_continue").join("assertions.cf");
    let o = run(&["validate", model, cf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().contains("\"violated\":0"));

    let violated = write(
        &dir,
        "v.cf",
        "cfNext: \"i++\" --> \"i < n\"\n\ncfNext: \"continue\" --> \"s += i\"\n",
    );
    let o = run(&["validate", model, &violated]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("violated\t3\tcfNext: \"continue\" --> \"s += i\""),
        "{}",
        stdout(&o)
    );

    let malformed = write(&dir, "m.cf", "cfNext: \"i++\" --> \"i < n\"\ncfNext \"a\" --> \"b\"\n");
    let o = run(&["validate", model, &malformed]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn validate_selects_a_method() {
    let dir = TempDir::new().unwrap();
    let src = write(
        &dir,
        "two.java",
        "class T { void a(int x) { x = 1; } int b(int y) { return y; } }",
    );
    let model = path(&dir, "two.xml");
    assert_eq!(run(&["transform", &src, "-o", &model]).status.code(), Some(0));
    let asserts = write(&dir, "b.cf", "cfNext: \"b()\" --> \"return y\"\n");
    let o = run(&["validate", &model, &asserts]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--method"));
    assert_eq!(
        run(&["validate", &model, &asserts, "--method", "b"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["validate", &model, &asserts, "--method", "a"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["validate", &model, &asserts, "--method", "zz"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_prints_a_table() {
    let o = run(&["bench", "--sizes", "0,5", "--repeats", "1", "--profile", "branchy"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0].split('\t').count(), 7);
    assert!(lines[1].starts_with("0\t2\t"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(
        run(&["transform", &input("empty"), "--format", "svg"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
