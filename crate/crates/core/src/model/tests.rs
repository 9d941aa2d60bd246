use super::*;

fn sample() -> FlowGraph {
    let mut g = FlowGraph::new("f");
    let a = g.add_var("a", VarOrigin::Param).unwrap();
    let b = g.add_var("b", VarOrigin::Local).unwrap();
    let decl = g.add_instr(InstrKind::Simple, "int b = a + 1");
    let ret = g.add_instr(InstrKind::Return, "return b");
    let exit = g.add_exit().unwrap();
    let m = g.method();
    g.add_def(m, a).unwrap();
    g.add_def(decl, b).unwrap();
    g.add_use(decl, a).unwrap();
    g.add_use(ret, b).unwrap();
    g.link_cf(m, decl).unwrap();
    g.link_cf(decl, ret).unwrap();
    g.link_cf(ret, exit).unwrap();
    g.link_df(m, decl).unwrap();
    g.link_df(decl, ret).unwrap();
    g
}

#[test]
fn link_cf_is_idempotent() {
    let mut g = FlowGraph::new("m");
    let a = g.add_instr(InstrKind::Simple, "a");
    let b = g.add_instr(InstrKind::Simple, "b");
    g.link_cf(a, b).unwrap();
    g.link_cf(a, b).unwrap();
    assert_eq!(g.get(a).unwrap().cf_next().iter().copied().collect::<Vec<_>>(), vec![b]);
    assert_eq!(g.get(b).unwrap().cf_prev().iter().copied().collect::<Vec<_>>(), vec![a]);
}

#[test]
fn link_cf_cycle_keeps_inverse() {
    let mut g = FlowGraph::new("m");
    let a = g.add_instr(InstrKind::Simple, "a");
    let b = g.add_instr(InstrKind::Simple, "b");
    g.link_cf(a, b).unwrap();
    g.link_cf(b, a).unwrap();
    g.add_exit().unwrap();
    let ia = g.get(a).unwrap();
    let ib = g.get(b).unwrap();
    assert!(ia.cf_next().contains(&b) && ia.cf_prev().contains(&b));
    assert!(ib.cf_next().contains(&a) && ib.cf_prev().contains(&a));
    g.audit().unwrap();
}

#[test]
fn link_across_graphs_fails() {
    let mut g = FlowGraph::new("m");
    let mut h = FlowGraph::new("n");
    let a = g.add_instr(InstrKind::Simple, "a");
    let b = h.add_instr(InstrKind::Simple, "b");
    assert_eq!(g.link_cf(a, b), Err(ModelError::CrossGraphLink { from: a, to: b }));
    assert!(matches!(g.link_df(a, b), Err(ModelError::CrossGraphLink { .. })));
    assert!(g.get(a).unwrap().cf_next().is_empty());
}

#[test]
fn labels_of_method_and_exit() {
    let mut g = FlowGraph::new("compute");
    g.add_exit().unwrap();
    assert_eq!(g.get(g.method()).unwrap().txt(), "compute()");
    assert_eq!(g.get(g.exit().unwrap()).unwrap().txt(), "Exit");
    assert_eq!(g.add_exit(), Err(ModelError::ExitExists));
}

#[test]
fn xml_round_trip_preserves_identity() {
    let g = sample();
    let text = g.to_xml();
    let h = FlowGraph::from_xml(&text).unwrap();
    assert_eq!(h.len(), g.len());
    assert_eq!(h.vars(), g.vars());
    for (x, y) in g.instrs().iter().zip(h.instrs()) {
        assert_eq!(x.id().index(), y.id().index());
        assert_eq!(x.txt(), y.txt());
        assert_eq!(x.kind(), y.kind());
        let idx = |s: &IndexSet<InstrId>| s.iter().map(|i| i.index()).collect::<Vec<_>>();
        assert_eq!(idx(x.cf_next()), idx(y.cf_next()));
        assert_eq!(idx(x.cf_prev()), idx(y.cf_prev()));
        assert_eq!(idx(x.df_next()), idx(y.df_next()));
        assert_eq!(x.defs(), y.defs());
        assert_eq!(x.uses(), y.uses());
    }
    assert_eq!(h.to_xml(), text);
}

#[test]
fn xml_is_deterministic_and_escaped() {
    let mut g = FlowGraph::new("m");
    g.add_instr(InstrKind::Expr, "a < b && c > \"d\"");
    g.add_exit().unwrap();
    let text = g.to_xml();
    assert_eq!(text, g.to_xml());
    assert!(text.contains("txt=\"a &lt; b &amp;&amp; c &gt; &quot;d&quot;\""));
    let h = FlowGraph::from_xml(&text).unwrap();
    assert_eq!(h.instrs()[1].txt(), "a < b && c > \"d\"");
}

#[test]
fn empty_method_xml() {
    let mut g = FlowGraph::new("m");
    g.add_exit().unwrap();
    let before = g.to_xml();
    assert!(!before.contains("cfNext"));
    g.link_cf(g.method(), g.exit().unwrap()).unwrap();
    let after = g.to_xml();
    assert_eq!(after.matches("<cfNext").count(), 1);
    assert_eq!(
        after,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<flowgraphs>\n  <graph method=\"m\">\n    <instr id=\"0\" kind=\"method\" txt=\"m()\">\n      <cfNext ref=\"1\"/>\n    </instr>\n    <instr id=\"1\" kind=\"exit\" txt=\"Exit\"/>\n  </graph>\n</flowgraphs>\n"
    );
}

#[test]
fn xml_rejects_broken_documents() {
    let ok = sample().to_xml();
    let cases = [
        ok.replace("ref=\"2\"", "ref=\"9\""),
        ok.replace("kind=\"return\"", "kind=\"jump\""),
        ok.replace("<def var=\"b\"/>", "<def var=\"zz\"/>"),
        ok.replace("id=\"1\"", "id=\"5\""),
        ok.replace("</flowgraphs>", ""),
        ok.replace("<graph", "<grab"),
    ];
    for doc in cases {
        assert!(graphs_from_xml(&doc).is_err(), "{doc}");
    }
}

#[test]
fn multiple_graphs_share_one_root() {
    let g = sample();
    let mut h = FlowGraph::new("g");
    h.add_exit().unwrap();
    let text = graphs_to_xml([&g, &h]);
    assert_eq!(text.matches("<flowgraphs>").count(), 1);
    let back = graphs_from_xml(&text).unwrap();
    assert_eq!(back.len(), 2);
    assert_eq!(back[1].method_name(), "g");
    assert!(FlowGraph::from_xml(&text).is_err());
}

#[test]
fn dot_chain_for_single_return() {
    let mut g = FlowGraph::new("m");
    let r = g.add_instr(InstrKind::Return, "return");
    let exit = g.add_exit().unwrap();
    g.link_cf(g.method(), r).unwrap();
    g.link_cf(r, exit).unwrap();
    let dot = g.to_dot(EdgeSet::Cf);
    assert_eq!(
        dot,
        "digraph \"m\" {\n  node [shape=box];\n  n0 [label=\"m()\", shape=ellipse];\n  n1 [label=\"return\"];\n  n2 [label=\"Exit\", shape=ellipse];\n  n0 -> n1;\n  n1 -> n2;\n}\n"
    );
}

#[test]
fn dot_edge_selection_and_escaping() {
    let g = sample();
    let df_only = g.to_dot(EdgeSet::Df);
    assert_eq!(df_only.matches("style=dashed").count(), 2);
    assert_eq!(df_only.matches("->").count(), 2);
    let both = g.to_dot(EdgeSet::Both);
    assert_eq!(both.matches("->").count(), 5);

    let mut plain = FlowGraph::new("m");
    plain.add_instr(InstrKind::Simple, "say(\"hi\")");
    plain.add_exit().unwrap();
    let dot = plain.to_dot(EdgeSet::Df);
    assert!(!dot.contains("->"));
    assert!(dot.contains(r#"label="say(\"hi\")""#));
}

#[test]
fn audit_flags_violations() {
    let mut g = sample();
    g.audit().unwrap();
    // a second successor on a simple instruction
    let decl = g.id_at(1).unwrap();
    g.link_cf(decl, decl).unwrap();
    assert!(g.audit().is_err());

    let mut g = sample();
    let exit = g.exit().unwrap();
    let m = g.method();
    g.link_cf(exit, m).unwrap();
    assert!(g.audit().is_err());

    let mut g = sample();
    g.instrs[1].cf_prev.clear();
    assert!(g.audit().is_err());
}

#[test]
fn df_helpers() {
    let mut g = sample();
    assert_eq!(g.df_edge_count(), 2);
    let ret = g.id_at(2).unwrap();
    let m = g.method();
    g.link_df(m, ret).unwrap();
    g.link_df(m, g.id_at(1).unwrap()).unwrap();
    g.sort_df();
    let order: Vec<usize> = g.instrs()[0].df_next().iter().map(|i| i.index()).collect();
    assert_eq!(order, vec![1, 2]);
    g.clear_df();
    assert_eq!(g.df_edge_count(), 0);
}
