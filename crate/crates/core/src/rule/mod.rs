//! Rewrite rules, the environment they act on, and rule lookup.

pub mod builtin;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::nav::{Term, Zipper};
use crate::strategy::{LabelId, RuleId};

use builtin::Builtin;

/// Key/value store threaded through a derivation, plus the stack of labels
/// entered so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Environment {
    bindings: BTreeMap<String, String>,
    labels: Vec<LabelId>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_parts(bindings: BTreeMap<String, String>, labels: Vec<LabelId>) -> Self {
        Environment { bindings, labels }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.bindings.get(key).map(String::as_str)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) -> Option<String> {
        self.bindings.insert(key.into(), value.into())
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.bindings.remove(key)
    }

    pub fn bindings(&self) -> &BTreeMap<String, String> {
        &self.bindings
    }

    /// Labels entered and not yet left, outermost first.
    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn push_label(&mut self, label: LabelId) {
        self.labels.push(label);
    }

    /// Pops `label` if it is the innermost open label.
    pub fn pop_label(&mut self, label: &LabelId) -> bool {
        if self.labels.last() == Some(label) {
            self.labels.pop();
            true
        } else {
            false
        }
    }
}

type Transform<T> = dyn Fn(&Environment, &Zipper<T>) -> Vec<(Environment, Zipper<T>)> + Send + Sync;

#[derive(Clone)]
enum Action<T> {
    Custom(Arc<Transform<T>>),
    Builtin(Builtin),
}

/// A named partial transformation of (environment, zipper) pairs. An empty
/// result means the rule does not apply.
#[derive(Clone)]
pub struct RewriteRule<T> {
    id: RuleId,
    minor: bool,
    action: Action<T>,
}

impl<T: Term> RewriteRule<T> {
    pub fn new(
        id: RuleId,
        minor: bool,
        transform: impl Fn(&Environment, &Zipper<T>) -> Vec<(Environment, Zipper<T>)>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        RewriteRule {
            id,
            minor,
            action: Action::Custom(Arc::new(transform)),
        }
    }

    /// A major rule rewriting the focused subterm; the context and the
    /// environment are left untouched.
    pub fn lift(id: RuleId, f: impl Fn(&T) -> Option<T> + Send + Sync + 'static) -> Self {
        Self::new(id, false, move |env, z| {
            f(z.focus())
                .map(|t| (env.clone(), z.replace(t)))
                .into_iter()
                .collect()
        })
    }

    pub fn minor(mut self) -> Self {
        self.minor = true;
        self
    }

    /// The navigation or bookkeeping rule named `id`, if it is one.
    pub fn builtin(id: &RuleId) -> Option<Self> {
        Builtin::parse(id).map(|b| RewriteRule {
            id: id.clone(),
            minor: true,
            action: Action::Builtin(b),
        })
    }

    pub fn id(&self) -> &RuleId {
        &self.id
    }

    /// The name recorded in traces. `Downs` is shown as the `Down` it takes.
    pub fn shown_id(&self) -> RuleId {
        match &self.action {
            Action::Builtin(Builtin::Downs) => RuleId::named(builtin::DOWN),
            _ => self.id.clone(),
        }
    }

    pub fn is_minor(&self) -> bool {
        self.minor
    }

    pub fn apply(&self, env: &Environment, z: &Zipper<T>) -> Vec<(Environment, Zipper<T>)> {
        match &self.action {
            Action::Custom(f) => f(env, z),
            Action::Builtin(b) => b.apply(env, z),
        }
    }

    /// Applies the rule to a bare term at its root.
    pub fn apply_term(&self, term: &T) -> Vec<T> {
        self.apply(&Environment::new(), &Zipper::new(term.clone()))
            .into_iter()
            .map(|(_, z)| z.unfocus().clone())
            .collect()
    }
}

impl<T> fmt::Debug for RewriteRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteRule")
            .field("id", &self.id)
            .field("minor", &self.minor)
            .finish()
    }
}

/// How a rule behaves for the purposes of static analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Major,
    Minor,
    /// A minor rule that always moves the focus strictly deeper, so it can
    /// only be repeated finitely often.
    Descent,
}

/// The rules a strategy may mention, resolved by name. Built-in navigation
/// and label rules are always available.
#[derive(Clone)]
pub struct RuleBook<T> {
    rules: HashMap<RuleId, RewriteRule<T>>,
}

impl<T> Default for RuleBook<T> {
    fn default() -> Self {
        RuleBook {
            rules: HashMap::new(),
        }
    }
}

impl<T: Term> RuleBook<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, rule: RewriteRule<T>) -> Self {
        self.insert(rule);
        self
    }

    pub fn insert(&mut self, rule: RewriteRule<T>) {
        self.rules.insert(rule.id.clone(), rule);
    }

    pub fn resolve(&self, id: &RuleId) -> Option<RewriteRule<T>> {
        self.rules
            .get(id)
            .cloned()
            .or_else(|| RewriteRule::builtin(id))
    }

    pub fn is_minor(&self, id: &RuleId) -> bool {
        self.kind(id) != RuleKind::Major
    }

    pub fn kind(&self, id: &RuleId) -> RuleKind {
        match self.rules.get(id) {
            Some(r) if r.minor => RuleKind::Minor,
            Some(_) => RuleKind::Major,
            None => builtin_kind(id),
        }
    }
}

/// Classification of rule names without a rule book: built-ins are minor,
/// everything else is assumed major.
pub fn builtin_kind(id: &RuleId) -> RuleKind {
    match Builtin::parse(id) {
        Some(b) if b.is_descent() => RuleKind::Descent,
        Some(_) => RuleKind::Minor,
        None if id.as_str() == crate::strategy::APP_CHECK => RuleKind::Minor,
        None => RuleKind::Major,
    }
}
