use super::*;
use crate::frontend::parse_java;
use crate::pipeline::flow_graphs;

fn sample() -> FlowGraph {
    let unit = parse_java("class C { int f(int a) { int b = a + 1; return b; } }").unwrap();
    flow_graphs(&unit).unwrap().remove(0)
}

#[test]
fn parses_whitespace_and_semicolon_variants() {
    let a = parse_assertions("cfNext: \"a = 1\" --> \"return a\";").unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].command, Command::CfNext);
    assert_eq!((a[0].source.as_str(), a[0].target.as_str()), ("a = 1", "return a"));

    let a = parse_assertions("dfNext:\"x = 0\"-->\"x < 3\"").unwrap();
    assert_eq!(a[0].command, Command::DfNext);
    assert_eq!((a[0].source.as_str(), a[0].target.as_str()), ("x = 0", "x < 3"));

    let a = parse_assertions("cfPrev:\t\"\"  -->  \"\"").unwrap();
    assert_eq!((a[0].source.as_str(), a[0].target.as_str()), ("", ""));
}

#[test]
fn command_is_case_sensitive() {
    assert_eq!(
        parse_assertions("cfnext: \"a\" --> \"b\""),
        Err(ValidationError::MalformedAssertion {
            line: 1,
            content: "cfnext: \"a\" --> \"b\"".into()
        })
    );
}

#[test]
fn comments_blank_lines_and_line_numbers() {
    let text = "# header\n\ncfNext: \"a\" --> \"b\"\r\n   \n  # indented comment\ndfNext: \"c\" --> \"d\";\n";
    let a = parse_assertions(text).unwrap();
    assert_eq!(a.iter().map(|x| x.line).collect::<Vec<_>>(), [3, 6]);
    assert_eq!(a[0].target, "b");

    let err = parse_assertions("cfNext: \"a\" --> \"b\"\ncfNext: \"a\" -> \"b\"\n").unwrap_err();
    assert!(matches!(err, ValidationError::MalformedAssertion { line: 2, .. }));
}

#[test]
fn rejects_what_the_pattern_rejects() {
    for line in [
        " cfNext: \"a\" --> \"b\"",
        "cfNext: \"a\" --> \"b\" ",
        "cfNext : \"a\" --> \"b\"",
        "cfNext: \"a\" --> \"b\";;",
        "cfNext: \"a\"b\" --> \"c\"",
        "cfNext: a --> \"b\"",
        "cfNext: \"a\" --> \"b\" cfNext: \"c\" --> \"d\"",
    ] {
        assert!(parse_line(line).is_none(), "{line}");
    }
}

#[test]
fn verdicts_on_straight_line_graph() {
    let g = sample();
    let text = "cfNext: \"int b = a + 1\" --> \"return b\"\n\
                dfNext: \"f()\" --> \"return b\"\n\
                cfNext: \"nope\" --> \"Exit\"\n\
                cfNext: \"f()\" --> \"nope\"\n\
                cfPrev: \"Exit\" --> \"return b\"\n\
                dfNext: \"f()\" --> \"int b = a + 1\"\n";
    let report = check(&g, &parse_assertions(text).unwrap());
    assert_eq!(
        report.verdicts().collect::<Vec<_>>(),
        [
            Verdict::Holds,
            Verdict::Violated,
            Verdict::UnknownSource,
            Verdict::UnknownTarget,
            Verdict::Holds,
            Verdict::Holds
        ]
    );
    assert!(!report.all_hold());
    let rendered = report.render();
    assert!(rendered.starts_with("holds\t1\tcfNext: \"int b = a + 1\" --> \"return b\"\nviolated\t2\t"));
    assert!(rendered.ends_with(
        "{\"total\":6,\"holds\":3,\"violated\":1,\"unknownSource\":1,\"unknownTarget\":1,\"ambiguous\":0}\n"
    ));
}

#[test]
fn duplicate_text_is_ambiguous() {
    let unit = parse_java("class C { void m(int a) { a = 1; a = 1; return; } }").unwrap();
    let g = flow_graphs(&unit).unwrap().remove(0);
    let a = parse_assertions(
        "cfNext: \"a = 1\" --> \"return\"\ncfNext: \"m()\" --> \"a = 1\"\ncfNext: \"nope\" --> \"a = 1\"",
    )
    .unwrap();
    let v: Vec<_> = check(&g, &a).verdicts().collect();
    assert_eq!(v, [Verdict::Ambiguous, Verdict::Ambiguous, Verdict::UnknownSource]);
}

#[test]
fn holds_only_for_existing_edges_in_any_order() {
    let g = sample();
    let mut lines = Vec::new();
    for s in g.instrs() {
        for t in g.instrs() {
            for c in ["cfNext", "cfPrev", "dfNext"] {
                lines.push(format!("{c}: \"{}\" --> \"{}\"", s.txt(), t.txt()));
            }
        }
    }
    let forward = check(&g, &parse_assertions(&lines.join("\n")).unwrap());
    for (a, v) in &forward.entries {
        let s = g.get(g.find_by_txt(&a.source).next().unwrap()).unwrap();
        let t = g.find_by_txt(&a.target).next().unwrap();
        let set = match a.command {
            Command::CfNext => s.cf_next(),
            Command::CfPrev => s.cf_prev(),
            Command::DfNext => s.df_next(),
        };
        assert_eq!(*v == Verdict::Holds, set.contains(&t), "{}", a.text);
    }
    lines.reverse();
    let backward = check(&g, &parse_assertions(&lines.join("\n")).unwrap());
    let mut f: Vec<_> = forward.entries.iter().map(|(a, v)| (a.text.clone(), *v)).collect();
    let mut b: Vec<_> = backward.entries.iter().map(|(a, v)| (a.text.clone(), *v)).collect();
    f.sort();
    b.sort();
    assert_eq!(f, b);
    assert_eq!(forward.summary().holds, g.cf_edge_count() * 2 + g.df_edge_count());
}
