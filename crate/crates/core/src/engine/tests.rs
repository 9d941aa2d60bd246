use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum K {
    Expr,
    Assign,
    Literal,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    id: usize,
    kind: K,
    ring: usize,
}

#[derive(Default)]
struct Log {
    created: Vec<String>,
    transformed: Vec<String>,
}

#[derive(Debug, PartialEq, Eq)]
enum TestError {
    Engine(EngineError),
}

impl From<EngineError> for TestError {
    fn from(e: EngineError) -> Self {
        TestError::Engine(e)
    }
}

struct Toy;

impl Model for Toy {
    type Element = Node;
    type Kind = K;
    type Env = Log;
    type Error = TestError;

    fn kind_of(e: &Node) -> K {
        e.kind
    }

    fn identity(e: &Node) -> usize {
        e.id
    }

    fn is_a(kind: K, ancestor: K) -> bool {
        kind == ancestor || ancestor == K::Expr
    }
}

#[derive(Debug, Default)]
struct Out {
    made_by: String,
    neighbours: Vec<usize>,
}

struct Simple {
    name: &'static str,
    kind: K,
}

impl Rule<Toy> for Simple {
    type Output = Out;

    fn name(&self) -> &str {
        self.name
    }

    fn input_kind(&self) -> K {
        self.kind
    }

    fn create_output(&self, input: Node, ctx: &mut Context<Toy>) -> Result<Out, TestError> {
        ctx.env.created.push(format!("{}:{}", self.name, input.id));
        Ok(Out {
            made_by: self.name.to_string(),
            neighbours: Vec::new(),
        })
    }

    fn transform(&self, input: Node, _output: &Shared<Out>, ctx: &mut Context<Toy>) -> Result<(), TestError> {
        ctx.env.transformed.push(format!("{}:{}", self.name, input.id));
        Ok(())
    }
}

/// Requires itself on the next node of a ring of three.
struct Ring {
    me: std::cell::Cell<Option<RuleHandle<Out>>>,
}

impl Rule<Toy> for Ring {
    type Output = Out;

    fn name(&self) -> &str {
        "Ring"
    }

    fn input_kind(&self) -> K {
        K::Expr
    }

    fn create_output(&self, input: Node, ctx: &mut Context<Toy>) -> Result<Out, TestError> {
        ctx.env.created.push(format!("Ring:{}", input.id));
        Ok(Out::default())
    }

    fn register_requirements(&self, req: &mut Requirements<Toy, Out>) {
        // The handle of a rule is the index it will receive.
        let me = self.me.get().expect("handle preset");
        req.require(
            me,
            |n: Node| {
                vec![Node {
                    id: (n.id + 1) % n.ring,
                    kind: K::Expr,
                    ring: n.ring,
                }]
            },
            |parent: &Shared<Out>, child: &Shared<Out>| {
                let len = child.borrow().neighbours.len();
                parent.borrow_mut().neighbours.push(len);
            },
        );
    }
}

fn node(id: usize, kind: K) -> Node {
    Node { id, kind, ring: 3 }
}

fn simple(name: &'static str, kind: K) -> Simple {
    Simple { name, kind }
}

#[test]
fn create_output_runs_once_per_input() {
    let mut rules = RuleSet::<Toy>::new();
    let r = rules.add(simple("Lit", K::Literal));
    let mut ctx = Context::new(Rc::new(rules), Log::default());
    let first = ctx.call_rule(r, node(7, K::Literal)).unwrap();
    for _ in 0..1000 {
        let again = ctx.call_rule(r, node(7, K::Literal)).unwrap();
        assert!(Rc::ptr_eq(&first, &again));
    }
    assert_eq!(ctx.env.created, vec!["Lit:7"]);
    assert_eq!(ctx.env.transformed, vec!["Lit:7"]);
    ctx.call_rule(r, node(8, K::Literal)).unwrap();
    assert_eq!(ctx.env.created.len(), 2);
}

#[test]
fn hub_dispatches_to_most_specific_rule() {
    let mut rules = RuleSet::<Toy>::new();
    let hub = rules.add(simple("Expression", K::Expr));
    let assign = rules.add_instantiating(simple("Assignment", K::Assign), hub).unwrap();
    let rules = Rc::new(rules);
    let mut ctx = Context::new(Rc::clone(&rules), Log::default());
    let a = node(1, K::Assign);

    assert!(ctx.trace_lookup(hub, &a).is_none());
    assert_eq!(ctx.resolve_instantiation(hub, &a).unwrap(), assign);
    let out = ctx.call_rule(hub, a).unwrap();
    assert_eq!(out.borrow().made_by, "Assignment");
    assert_eq!(ctx.env.created, vec!["Assignment:1"]);
    assert_eq!(ctx.env.transformed, vec!["Expression:1", "Assignment:1"]);

    let via_hub = ctx.trace_lookup(hub, &a).unwrap();
    let via_rule = ctx.trace_lookup(assign, &a).unwrap();
    assert!(Rc::ptr_eq(&via_hub, &via_rule) && Rc::ptr_eq(&out, &via_rule));

    // calling the concrete rule afterwards is a trace hit
    ctx.call_rule(assign, a).unwrap();
    assert_eq!(ctx.env.created.len(), 1);

    // inputs that match nothing more specific fall back to the hub
    let lit = ctx.call_rule(hub, node(2, K::Literal)).unwrap();
    assert_eq!(lit.borrow().made_by, "Expression");
}

#[test]
fn concrete_call_first_is_shared_with_hub() {
    let mut rules = RuleSet::<Toy>::new();
    let hub = rules.add(simple("Expression", K::Expr));
    let assign = rules.add_instantiating(simple("Assignment", K::Assign), hub).unwrap();
    let mut ctx = Context::new(Rc::new(rules), Log::default());
    let a = node(4, K::Assign);
    let direct = ctx.call_rule(assign, a).unwrap();
    let through = ctx.call_rule(hub, a).unwrap();
    assert!(Rc::ptr_eq(&direct, &through));
    assert_eq!(ctx.env.created, vec!["Assignment:4"]);
    assert_eq!(ctx.env.transformed, vec!["Assignment:4", "Expression:4"]);
}

#[test]
fn sibling_rules_conflict() {
    let mut rules = RuleSet::<Toy>::new();
    let hub = rules.add(simple("Expression", K::Expr));
    rules.add_instantiating(simple("A1", K::Assign), hub).unwrap();
    rules.add_instantiating(simple("A2", K::Assign), hub).unwrap();
    let mut ctx = Context::new(Rc::new(rules), Log::default());
    let err = ctx.call_rule(hub, node(1, K::Assign)).unwrap_err();
    match err {
        TestError::Engine(EngineError::InstantiationConflict { hub, candidates, .. }) => {
            assert_eq!(hub, "Expression");
            assert_eq!(candidates, vec!["A1", "A2"]);
        }
        other => panic!("{other:?}"),
    }
    assert!(ctx.env.created.is_empty());
    // a literal is unaffected
    assert!(ctx.call_rule(hub, node(2, K::Literal)).is_ok());
}

#[test]
fn registration_and_call_errors() {
    let mut rules = RuleSet::<Toy>::new();
    let lit = rules.add(simple("Lit", K::Literal));
    let err = rules
        .add_instantiating(simple("Assignment", K::Assign), lit)
        .unwrap_err();
    assert!(matches!(err, EngineError::KindMismatch { .. }));

    let mut other = RuleSet::<Toy>::new();
    let foreign = other.add(simple("Foreign", K::Expr));

    let mut ctx = Context::new(Rc::new(rules), Log::default());
    assert_eq!(
        ctx.call_rule(lit, node(1, K::Assign)).unwrap_err(),
        TestError::Engine(EngineError::InputKindMismatch {
            rule: "Lit".into(),
            expected: "Literal".into(),
            found: "Assign".into(),
        })
    );
    assert!(matches!(
        ctx.call_rule(foreign, node(1, K::Expr)),
        Err(TestError::Engine(EngineError::RuleNotRegistered(_)))
    ));
    assert!(ctx.trace_lookup(foreign, &node(1, K::Expr)).is_none());
}

#[test]
fn cyclic_requirements_terminate() {
    let mut rules = RuleSet::<Toy>::new();
    let ring = Ring {
        me: std::cell::Cell::new(Some(RuleHandle {
            set: rules.id,
            index: 0,
            _output: PhantomData,
        })),
    };
    let handle = rules.add(ring);
    assert_eq!(handle.index(), 0);
    let mut ctx = Context::new(Rc::new(rules), Log::default());
    ctx.call_rule(handle, node(0, K::Expr)).unwrap();
    assert_eq!(ctx.env.created, vec!["Ring:0", "Ring:1", "Ring:2"]);
    // node 2 saw node 0 before its persistor had run, nodes 1 and 0 saw completed children
    let n = |i| {
        ctx.trace_lookup(handle, &node(i, K::Expr))
            .unwrap()
            .borrow()
            .neighbours
            .clone()
    };
    assert_eq!(n(2), vec![0]);
    assert_eq!(n(1), vec![1]);
    assert_eq!(n(0), vec![1]);
    assert_eq!(ctx.trace_len(), 3);
    let order: Vec<usize> = ctx.trace_entries().map(|(_, id)| id).collect();
    assert_eq!(order, vec![0, 1, 2]);
}
