//! A small rule-based model-to-model transformation engine.
//!
//! Rules are types implementing [`Rule`]. A [`Context`] represents one
//! transformation pass: every (rule, input) pair is transformed at most once,
//! and the correspondence can be queried afterwards through
//! [`Context::trace_lookup`].
//!
//! Calling a rule proceeds output-first, wire-later:
//!
//! 1. the most specific instantiating rule for the input is selected;
//! 2. its `create_output` runs and the output is recorded in the trace;
//! 3. the declared dependencies of every rule on the instantiation chain are
//!    evaluated, hub first, applying their persistors;
//! 4. the `transform` bodies run, again hub first.
//!
//! Because the trace entry exists before step 3, dependencies that cycle back
//! to an element under transformation terminate.

use std::any::Any;
use std::cell::RefCell;
use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use indexmap::IndexMap;
use thiserror::Error;

pub type Shared<T> = Rc<RefCell<T>>;

/// Describes the source model a rule set operates on.
pub trait Model {
    /// A cheap handle to a source model element.
    type Element: Copy;
    type Kind: Copy + Eq + Debug;
    /// Mutable state shared by all rules of one pass.
    type Env;
    type Error: From<EngineError>;

    fn kind_of(element: &Self::Element) -> Self::Kind;

    /// Identity of the element within the model, used as the trace key.
    fn identity(element: &Self::Element) -> usize;

    /// Whether `kind` is `ancestor` or one of its subkinds.
    fn is_a(kind: Self::Kind, ancestor: Self::Kind) -> bool;
}

pub trait Rule<M: Model>: 'static {
    type Output: 'static;

    fn name(&self) -> &str;

    fn input_kind(&self) -> M::Kind;

    fn create_output(&self, input: M::Element, ctx: &mut Context<M>) -> Result<Self::Output, M::Error>;

    /// Declares the rule's dependencies. Called once, at registration.
    fn register_requirements(&self, _requirements: &mut Requirements<M, Self::Output>) {}

    fn transform(
        &self,
        _input: M::Element,
        _output: &Shared<Self::Output>,
        _ctx: &mut Context<M>,
    ) -> Result<(), M::Error> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule `{0}` is not registered in this rule set")]
    RuleNotRegistered(String),
    #[error("rules {candidates:?} all instantiate `{hub}` for an input of kind {kind}")]
    InstantiationConflict {
        hub: String,
        kind: String,
        candidates: Vec<String>,
    },
    #[error("rule `{rule}` cannot instantiate `{hub}`: input kind {kind} is not a subkind of {hub_kind}")]
    KindMismatch {
        rule: String,
        kind: String,
        hub: String,
        hub_kind: String,
    },
    #[error("rule `{rule}` expects {expected} but was called on {found}")]
    InputKindMismatch {
        rule: String,
        expected: String,
        found: String,
    },
}

static NEXT_RULE_SET: AtomicU64 = AtomicU64::new(1);

/// Typed reference to a registered rule whose output is `O`.
pub struct RuleHandle<O> {
    set: u64,
    index: usize,
    _output: PhantomData<fn() -> O>,
}

impl<O> Clone for RuleHandle<O> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<O> Copy for RuleHandle<O> {}

impl<O> Debug for RuleHandle<O> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RuleHandle({}:{})", self.set, self.index)
    }
}

impl<O> PartialEq for RuleHandle<O> {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set && self.index == other.index
    }
}

impl<O> Eq for RuleHandle<O> {}

impl<O> Hash for RuleHandle<O> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.set.hash(state);
        self.index.hash(state);
    }
}

impl<O> RuleHandle<O> {
    pub fn index(&self) -> usize {
        self.index
    }
}

type ErasedOutput = Rc<dyn Any>;
type CreateFn<M> = Box<dyn Fn(<M as Model>::Element, &mut Context<M>) -> Result<ErasedOutput, <M as Model>::Error>>;
type ApplyFn<M> = Box<dyn Fn(<M as Model>::Element, &ErasedOutput, &mut Context<M>) -> Result<(), <M as Model>::Error>>;

struct RuleEntry<M: Model> {
    name: String,
    input_kind: M::Kind,
    instantiates: Option<usize>,
    depth: usize,
    create: CreateFn<M>,
    requirements: Vec<ApplyFn<M>>,
    transform: ApplyFn<M>,
}

/// The registered rules of a transformation.
pub struct RuleSet<M: Model> {
    id: u64,
    rules: Vec<RuleEntry<M>>,
}

impl<M: Model> Default for RuleSet<M> {
    fn default() -> Self {
        Self::new()
    }
}

impl<M: Model> RuleSet<M> {
    pub fn new() -> Self {
        RuleSet {
            id: NEXT_RULE_SET.fetch_add(1, Ordering::Relaxed),
            rules: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn add<R: Rule<M>>(&mut self, rule: R) -> RuleHandle<R::Output> {
        self.push(rule, None, 0)
    }

    /// Registers `rule` as instantiating for `hub`: when the hub is called on
    /// an input matching the rule's kind, this rule creates the output.
    pub fn add_instantiating<R: Rule<M>>(
        &mut self,
        rule: R,
        hub: RuleHandle<R::Output>,
    ) -> Result<RuleHandle<R::Output>, EngineError> {
        let parent = self.entry(hub.set, hub.index)?;
        if !M::is_a(rule.input_kind(), parent.input_kind) {
            return Err(EngineError::KindMismatch {
                rule: rule.name().to_string(),
                kind: format!("{:?}", rule.input_kind()),
                hub: parent.name.clone(),
                hub_kind: format!("{:?}", parent.input_kind),
            });
        }
        let depth = parent.depth + 1;
        Ok(self.push(rule, Some(hub.index), depth))
    }

    fn entry(&self, set: u64, index: usize) -> Result<&RuleEntry<M>, EngineError> {
        if set != self.id {
            return Err(EngineError::RuleNotRegistered(format!("#{index} of rule set {set}")));
        }
        self.rules
            .get(index)
            .ok_or_else(|| EngineError::RuleNotRegistered(format!("#{index}")))
    }

    fn push<R: Rule<M>>(&mut self, rule: R, instantiates: Option<usize>, depth: usize) -> RuleHandle<R::Output> {
        let mut requirements = Requirements {
            deps: Vec::new(),
            _parent: PhantomData,
        };
        rule.register_requirements(&mut requirements);
        let name = rule.name().to_string();
        let input_kind = rule.input_kind();
        let rule = Rc::new(rule);
        let creator = Rc::clone(&rule);
        let create: CreateFn<M> = Box::new(move |input, ctx| {
            let output = creator.create_output(input, ctx)?;
            Ok(Rc::new(RefCell::new(output)) as ErasedOutput)
        });
        let transform: ApplyFn<M> = Box::new(move |input, output, ctx| {
            let output = downcast::<R::Output>(output);
            rule.transform(input, &output, ctx)
        });
        self.rules.push(RuleEntry {
            name,
            input_kind,
            instantiates,
            depth,
            create,
            requirements: requirements.deps,
            transform,
        });
        RuleHandle {
            set: self.id,
            index: self.rules.len() - 1,
            _output: PhantomData,
        }
    }

    pub fn name_of<O>(&self, rule: RuleHandle<O>) -> Result<&str, EngineError> {
        Ok(&self.entry(rule.set, rule.index)?.name)
    }

    /// Selects the rule that creates the output when `hub` is called on `input`:
    /// the matching rule with the longest instantiation chain below `hub`, or
    /// `hub` itself when nothing more specific matches.
    pub fn resolve_instantiation<O>(
        &self,
        hub: RuleHandle<O>,
        input: &M::Element,
    ) -> Result<RuleHandle<O>, EngineError> {
        let chain = self.resolve_chain(hub.set, hub.index, M::kind_of(input))?;
        Ok(RuleHandle {
            set: self.id,
            index: *chain.last().expect("chain contains the hub"),
            _output: PhantomData,
        })
    }

    /// Rules from `hub` down to the selected instantiating rule.
    fn resolve_chain(&self, set: u64, hub: usize, kind: M::Kind) -> Result<Vec<usize>, EngineError> {
        let hub_entry = self.entry(set, hub)?;
        let mut best: Vec<usize> = Vec::new();
        let mut best_depth = hub_entry.depth;
        for (index, entry) in self.rules.iter().enumerate() {
            if index == hub || !M::is_a(kind, entry.input_kind) || !self.descends_from(index, hub) {
                continue;
            }
            if entry.depth > best_depth {
                best_depth = entry.depth;
                best.clear();
                best.push(index);
            } else if entry.depth == best_depth && !best.is_empty() {
                best.push(index);
            }
        }
        match best.as_slice() {
            [] => Ok(vec![hub]),
            [single] => {
                let mut chain = vec![*single];
                let mut at = *single;
                while let Some(parent) = self.rules[at].instantiates {
                    chain.push(parent);
                    if parent == hub {
                        break;
                    }
                    at = parent;
                }
                chain.reverse();
                Ok(chain)
            }
            several => Err(EngineError::InstantiationConflict {
                hub: hub_entry.name.clone(),
                kind: format!("{kind:?}"),
                candidates: several.iter().map(|&i| self.rules[i].name.clone()).collect(),
            }),
        }
    }

    fn descends_from(&self, mut index: usize, ancestor: usize) -> bool {
        while let Some(parent) = self.rules[index].instantiates {
            if parent == ancestor {
                return true;
            }
            index = parent;
        }
        false
    }
}

fn downcast<O: 'static>(output: &ErasedOutput) -> Shared<O> {
    Rc::clone(output)
        .downcast::<RefCell<O>>()
        .unwrap_or_else(|_| panic!("trace entry does not hold a {}", std::any::type_name::<O>()))
}

/// Dependencies declared by a rule whose output is `P`.
pub struct Requirements<M: Model, P> {
    deps: Vec<ApplyFn<M>>,
    _parent: PhantomData<fn() -> P>,
}

impl<M: Model, P: 'static> Requirements<M, P> {
    /// Calls `target` on every element chosen by `selector`, in order, and
    /// hands each child output to `persistor` together with the parent output.
    pub fn require<C: 'static>(
        &mut self,
        target: RuleHandle<C>,
        selector: impl Fn(M::Element) -> Vec<M::Element> + 'static,
        persistor: impl Fn(&Shared<P>, &Shared<C>) + 'static,
    ) {
        self.deps.push(Box::new(move |input, parent, ctx| {
            let parent = downcast::<P>(parent);
            for child in selector(input) {
                let out = ctx.call_rule(target, child)?;
                persistor(&parent, &out);
            }
            Ok(())
        }));
    }

    /// Like [`Requirements::require`] without a persistor.
    pub fn require_each<C: 'static>(
        &mut self,
        target: RuleHandle<C>,
        selector: impl Fn(M::Element) -> Vec<M::Element> + 'static,
    ) {
        self.require(target, selector, |_, _| {});
    }
}

/// One transformation pass: the rule set, the trace, and the pass's environment.
pub struct Context<M: Model> {
    rules: Rc<RuleSet<M>>,
    trace: IndexMap<(usize, usize), ErasedOutput>,
    pub env: M::Env,
}

impl<M: Model> Context<M> {
    pub fn new(rules: Rc<RuleSet<M>>, env: M::Env) -> Self {
        Context {
            rules,
            trace: IndexMap::new(),
            env,
        }
    }

    pub fn rules(&self) -> &Rc<RuleSet<M>> {
        &self.rules
    }

    /// Transforms `input` with `rule`, or returns the output of an earlier call.
    pub fn call_rule<O: 'static>(&mut self, rule: RuleHandle<O>, input: M::Element) -> Result<Shared<O>, M::Error> {
        let id = M::identity(&input);
        if let Some(out) = self.trace.get(&(rule.index, id)) {
            if rule.set == self.rules.id {
                return Ok(downcast(out));
            }
        }
        let rules = Rc::clone(&self.rules);
        let entry = rules.entry(rule.set, rule.index)?;
        let kind = M::kind_of(&input);
        if !M::is_a(kind, entry.input_kind) {
            return Err(EngineError::InputKindMismatch {
                rule: entry.name.clone(),
                expected: format!("{:?}", entry.input_kind),
                found: format!("{kind:?}"),
            }
            .into());
        }
        let chain = rules.resolve_chain(rule.set, rule.index, kind)?;
        let concrete = *chain.last().expect("chain contains the hub");
        let output = match self.trace.get(&(concrete, id)) {
            Some(existing) => Rc::clone(existing),
            None => (rules.rules[concrete].create)(input, self)?,
        };
        let fresh: Vec<usize> = chain
            .iter()
            .copied()
            .filter(|&r| !self.trace.contains_key(&(r, id)))
            .collect();
        for &r in &fresh {
            self.trace.insert((r, id), Rc::clone(&output));
        }
        for &r in &fresh {
            for dep in &rules.rules[r].requirements {
                dep(input, &output, self)?;
            }
        }
        for &r in &fresh {
            (rules.rules[r].transform)(input, &output, self)?;
        }
        Ok(downcast(&output))
    }

    /// The output recorded for `(rule, input)`, without transforming anything.
    pub fn trace_lookup<O: 'static>(&self, rule: RuleHandle<O>, input: &M::Element) -> Option<Shared<O>> {
        if rule.set != self.rules.id {
            return None;
        }
        self.trace.get(&(rule.index, M::identity(input))).map(downcast)
    }

    pub fn resolve_instantiation<O>(
        &self,
        hub: RuleHandle<O>,
        input: &M::Element,
    ) -> Result<RuleHandle<O>, EngineError> {
        self.rules.resolve_instantiation(hub, input)
    }

    pub fn trace_len(&self) -> usize {
        self.trace.len()
    }

    /// Trace entries in the order they were recorded, as (rule name, element identity).
    pub fn trace_entries(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.trace
            .keys()
            .map(|&(rule, id)| (self.rules.rules[rule].name.as_str(), id))
    }
}

#[cfg(test)]
mod tests;
