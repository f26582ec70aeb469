//! Operational semantics: small steps, big steps and runs over states.
//!
//! An [`Engine`] evaluates strategies against a [`RuleBook`] under a shared
//! transition budget. Every produced transition, whether a minor rule, a
//! major rule or a successful applicability check, costs one unit; nested
//! runs spawned by checks draw from the same budget.

mod split;

pub use split::split;

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::error::Error;
use crate::nav::{Term, Zipper};
use crate::rule::{Environment, RuleBook};
use crate::strategy::language::nullable;
use crate::strategy::{succeed, Atom, RuleId, Strategy};

pub const DEFAULT_STEP_BUDGET: usize = 10_000;

/// Deepest remaining strategy the engine will produce. Recursion through a
/// label or a sequence can grow the remaining strategy on every unrolling;
/// this stops it long before evaluation would exhaust the stack.
pub const MAX_STRATEGY_DEPTH: usize = 256;

type Transitions<T> = Rc<Vec<Transition<T>>>;

/// Resource limits for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of transitions.
    pub budget: usize,
    pub max_len: usize,
    pub max_unroll: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget: DEFAULT_STEP_BUDGET,
            max_len: crate::strategy::language::DEFAULT_MAX_LEN,
            max_unroll: crate::strategy::language::DEFAULT_MAX_UNROLL,
        }
    }
}

impl Limits {
    pub fn with_budget(budget: usize) -> Result<Self, Error> {
        if budget == 0 {
            return Err(Error::ZeroBudget);
        }
        Ok(Limits {
            budget,
            ..Limits::default()
        })
    }
}

/// Environment, focused term and the strategy still to be followed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State<T: Term> {
    pub env: Environment,
    pub zipper: Zipper<T>,
    pub remaining: Strategy,
}

impl<T: Term> State<T> {
    pub fn new(env: Environment, zipper: Zipper<T>, remaining: Strategy) -> Self {
        State {
            env,
            zipper,
            remaining,
        }
    }

    /// Empty environment, focus on the root.
    pub fn start(term: T, strategy: Strategy) -> Self {
        State::new(Environment::new(), Zipper::new(term), strategy)
    }

    pub fn term(&self) -> &T {
        self.zipper.unfocus()
    }

    pub fn is_final(&self) -> bool {
        nullable(&self.remaining)
    }

    fn finished(&self) -> Self {
        State::new(self.env.clone(), self.zipper.clone(), succeed())
    }
}

/// A single rule application or successful check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<T: Term> {
    pub rule: RuleId,
    pub minor: bool,
    pub state: State<T>,
}

/// One major rule application with the minor steps around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigStep<T: Term> {
    pub rule: RuleId,
    /// Focus path at which the major rule was applied.
    pub location: Vec<usize>,
    /// Minor rules applied before the major one.
    pub prefix: Vec<RuleId>,
    /// Trailing minor rules that complete the strategy, if they were applied.
    pub suffix: Vec<RuleId>,
    pub state: State<T>,
}

impl<T: Term> BigStep<T> {
    /// Full rule trace of the big step.
    pub fn trace(&self) -> Vec<RuleId> {
        let mut t = self.prefix.clone();
        t.push(self.rule.clone());
        t.extend(self.suffix.iter().cloned());
        t
    }
}

/// A state reachable through minor steps only.
#[derive(Clone, Debug)]
pub struct MinorPath<T: Term> {
    pub trace: Vec<RuleId>,
    pub state: State<T>,
}

struct ClosureNode<T: Term> {
    trace: Vec<RuleId>,
    state: State<T>,
    majors: Vec<Transition<T>>,
}

type Closure<T> = Rc<Vec<ClosureNode<T>>>;

enum CheckStatus {
    Running,
    Done(bool),
}

type CheckKey<T> = (Environment, Zipper<T>, Strategy);

pub struct Engine<'a, T: Term> {
    rules: &'a RuleBook<T>,
    limits: Limits,
    spent: Cell<usize>,
    checks: RefCell<HashMap<CheckKey<T>, CheckStatus>>,
    closures: RefCell<HashMap<State<T>, Closure<T>>>,
    steps: RefCell<HashMap<State<T>, Transitions<T>>>,
}

impl<'a, T: Term> Engine<'a, T> {
    pub fn new(rules: &'a RuleBook<T>, limits: Limits) -> Result<Self, Error> {
        if limits.budget == 0 {
            return Err(Error::ZeroBudget);
        }
        Ok(Engine {
            rules,
            limits,
            spent: Cell::new(0),
            checks: RefCell::new(HashMap::new()),
            closures: RefCell::new(HashMap::new()),
            steps: RefCell::new(HashMap::new()),
        })
    }

    pub fn rules(&self) -> &RuleBook<T> {
        self.rules
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Transitions consumed so far.
    pub fn spent(&self) -> usize {
        self.spent.get()
    }

    fn charge(&self) -> Result<(), Error> {
        let spent = self.spent.get() + 1;
        self.spent.set(spent);
        if spent > self.limits.budget {
            Err(Error::BudgetExceeded {
                budget: self.limits.budget,
                trace: Vec::new(),
            })
        } else {
            Ok(())
        }
    }

    /// All single transitions from `state`.
    pub fn step(&self, state: &State<T>) -> Result<Vec<Transition<T>>, Error> {
        Ok(self.step_shared(state)?.as_ref().clone())
    }

    /// Transitions are computed, and charged for, once per state.
    fn step_shared(&self, state: &State<T>) -> Result<Transitions<T>, Error> {
        if let Some(t) = self.steps.borrow().get(state) {
            return Ok(t.clone());
        }
        let out = Rc::new(self.compute_step(state)?);
        self.steps.borrow_mut().insert(state.clone(), out.clone());
        Ok(out)
    }

    fn compute_step(&self, state: &State<T>) -> Result<Vec<Transition<T>>, Error> {
        let mut out = Vec::new();
        for (atom, rest) in split(&state.remaining)? {
            if rest.depth() > MAX_STRATEGY_DEPTH {
                return Err(Error::TooDeep {
                    depth: rest.depth(),
                    limit: MAX_STRATEGY_DEPTH,
                });
            }
            match atom {
                Atom::Rule(id) => {
                    let rule = self
                        .rules
                        .resolve(&id)
                        .ok_or_else(|| Error::UnknownRule(id.clone()))?;
                    for (env, zipper) in rule.apply(&state.env, &state.zipper) {
                        self.charge()?;
                        out.push(Transition {
                            rule: rule.shown_id(),
                            minor: rule.is_minor(),
                            state: State::new(env, zipper, rest.clone()),
                        });
                    }
                }
                Atom::Check(c) => {
                    if !self.has_run(&state.env, &state.zipper, &c)? {
                        self.charge()?;
                        out.push(Transition {
                            rule: RuleId::app_check(),
                            minor: true,
                            state: State::new(state.env.clone(), state.zipper.clone(), rest),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether running `s` from (`env`, `zipper`) reaches any end state.
    fn has_run(&self, env: &Environment, zipper: &Zipper<T>, s: &Strategy) -> Result<bool, Error> {
        let key = (env.clone(), zipper.clone(), s.clone());
        match self.checks.borrow().get(&key) {
            Some(CheckStatus::Done(b)) => return Ok(*b),
            Some(CheckStatus::Running) => return Err(Error::CyclicCheck(s.to_string())),
            None => {}
        }
        self.checks.borrow_mut().insert(key.clone(), CheckStatus::Running);
        let found = self.search_end(State::new(env.clone(), zipper.clone(), s.clone()));
        match found {
            Ok(b) => {
                self.checks.borrow_mut().insert(key, CheckStatus::Done(b));
                Ok(b)
            }
            Err(e) => {
                self.checks.borrow_mut().remove(&key);
                Err(e)
            }
        }
    }

    /// Depth-first search for a reachable state whose strategy accepts ε.
    fn search_end(&self, start: State<T>) -> Result<bool, Error> {
        let mut seen = HashSet::new();
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            if s.is_final() {
                return Ok(true);
            }
            if !seen.insert(s.clone()) {
                continue;
            }
            let next = self.step_shared(&s)?;
            stack.extend(next.iter().rev().map(|t| t.state.clone()));
        }
        Ok(false)
    }

    /// States reachable from `start` through minor steps, breadth first, each
    /// with its shortest trace and the major transitions leaving it.
    fn closure(&self, start: &State<T>) -> Result<Closure<T>, Error> {
        if let Some(c) = self.closures.borrow().get(start) {
            return Ok(c.clone());
        }
        let mut nodes = Vec::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back((Vec::new(), start.clone()));
        while let Some((trace, state)) = queue.pop_front() {
            let mut majors = Vec::new();
            for t in self.step_shared(&state)?.iter() {
                if !t.minor {
                    majors.push(t.clone());
                } else if seen.insert(t.state.clone()) {
                    let mut tr: Vec<RuleId> = trace.clone();
                    tr.push(t.rule.clone());
                    queue.push_back((tr, t.state.clone()));
                }
            }
            nodes.push(ClosureNode {
                trace,
                state,
                majors,
            });
        }
        let nodes = Rc::new(nodes);
        self.closures
            .borrow_mut()
            .insert(start.clone(), nodes.clone());
        Ok(nodes)
    }

    /// Minor-only paths from `state` to a state whose strategy accepts ε,
    /// one per reachable end state (with a shortest trace).
    pub fn minor_sentences(&self, state: &State<T>) -> Result<Vec<MinorPath<T>>, Error> {
        Ok(self
            .closure(state)?
            .iter()
            .filter(|n| n.state.is_final())
            .map(|n| MinorPath {
                trace: n.trace.clone(),
                state: n.state.clone(),
            })
            .collect())
    }

    /// Big steps from `state`: minor steps, one major rule, and trailing
    /// minor steps when they complete the strategy.
    ///
    /// The state right after the major rule is produced when no minor-only
    /// completion exists, and also when it can still continue with another
    /// major rule, so that big-step closure reaches exactly the end states
    /// small-step closure does.
    pub fn big_step(&self, state: &State<T>) -> Result<Vec<BigStep<T>>, Error> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let before = self.closure(state)?;
        for node in before.iter() {
            for major in &node.majors {
                let after = self.closure(&major.state)?;
                let continues = after.iter().any(|n| !n.majors.is_empty());
                let completions: Vec<_> = after.iter().filter(|n| n.state.is_final()).collect();
                let mut emit = |suffix: Vec<RuleId>, s: &State<T>| {
                    if seen.insert((major.rule.clone(), s.clone())) {
                        out.push(BigStep {
                            rule: major.rule.clone(),
                            location: major.state.zipper.path(),
                            prefix: node.trace.clone(),
                            suffix,
                            state: s.clone(),
                        });
                    }
                };
                if completions.is_empty() || continues || major.state.is_final() {
                    emit(Vec::new(), &major.state);
                }
                for c in completions.iter().filter(|c| !c.trace.is_empty()) {
                    emit(c.trace.clone(), &c.state);
                }
            }
        }
        Ok(out)
    }

    /// End states of the strategy, with the remaining strategy set to
    /// `succeed`, in canonical order.
    pub fn run(&self, start: &State<T>) -> Result<Vec<State<T>>, Error> {
        let mut ends = BTreeSet::new();
        for p in self.minor_sentences(start)? {
            ends.insert(p.state.finished());
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(s) = queue.pop_front() {
            for b in self.big_step(&s)? {
                if b.state.is_final() {
                    ends.insert(b.state.finished());
                }
                if seen.insert(b.state.clone()) {
                    queue.push_back(b.state);
                }
            }
        }
        Ok(ends.into_iter().collect())
    }

    /// End states reached by exhaustive small steps, in canonical order.
    pub fn small_step_run(&self, start: &State<T>) -> Result<Vec<State<T>>, Error> {
        let mut ends = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![start.clone()];
        while let Some(s) = stack.pop() {
            if !seen.insert(s.clone()) {
                continue;
            }
            if s.is_final() {
                ends.insert(s.finished());
            }
            stack.extend(self.step_shared(&s)?.iter().map(|t| t.state.clone()));
        }
        Ok(ends.into_iter().collect())
    }

    /// Whether some sequence of big steps from `start` applies exactly the
    /// major rules `majors` and ends where the strategy may stop.
    pub fn recognize(&self, start: &State<T>, majors: &[RuleId]) -> Result<bool, Error> {
        let mut frontier = BTreeSet::from([start.clone()]);
        for r in majors {
            let mut next = BTreeSet::new();
            for s in &frontier {
                for b in self.big_step(s)? {
                    if &b.rule == r {
                        next.insert(b.state);
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            frontier = next;
        }
        for s in &frontier {
            if !self.minor_sentences(s)?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
