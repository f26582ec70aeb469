//! The strategy language: identifiers, the combinator AST, and the derived
//! combinators built from it.
//!
//! A [`Strategy`] is a cheap-to-clone handle on an immutable node tree.
//! Recursion is expressed with an explicit binder ([`Node::Rec`]) and bound
//! occurrences ([`Node::Var`]) so strategies stay first-order data that can be
//! printed, parsed, compared and linted.

mod combinators;
pub mod language;
pub mod syntax;

pub use combinators::*;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {kind} name {name:?}")]
pub struct InvalidName {
    pub kind: &'static str,
    pub name: String,
}

fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Name of a rewrite rule.
///
/// Domain rules use plain identifiers. Built-in administrative rules may
/// carry one parenthesised argument, e.g. `Enter(l)` or `Down(1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(Arc<str>);

impl RuleId {
    pub fn new(name: impl AsRef<str>) -> Result<Self, InvalidName> {
        let name = name.as_ref();
        if Self::valid(name) {
            Ok(RuleId(Arc::from(name)))
        } else {
            Err(InvalidName {
                kind: "rule",
                name: name.to_string(),
            })
        }
    }

    fn valid(name: &str) -> bool {
        match name.find('(') {
            None => is_ident(name),
            Some(open) => {
                let (head, rest) = name.split_at(open);
                let arg = &rest[1..];
                is_ident(head)
                    && arg.ends_with(')')
                    && arg.len() > 1
                    && arg[..arg.len() - 1]
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
            }
        }
    }

    /// Panicking constructor for names known at compile time.
    pub fn named(name: &str) -> Self {
        Self::new(name).expect("static rule name")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn enter(label: &LabelId) -> Self {
        RuleId(Arc::from(format!("Enter({label})")))
    }

    pub fn leave(label: &LabelId) -> Self {
        RuleId(Arc::from(format!("Leave({label})")))
    }

    /// The pseudo rule recorded in traces when an applicability check succeeds.
    pub fn app_check() -> Self {
        RuleId(Arc::from(APP_CHECK))
    }
}

pub const APP_CHECK: &str = "AppCheck";

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! ident_newtype {
    ($(#[$meta:meta])* $name:ident, $kind:literal) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Result<Self, InvalidName> {
                let name = name.as_ref();
                if is_ident(name) {
                    Ok($name(Arc::from(name)))
                } else {
                    Err(InvalidName { kind: $kind, name: name.to_string() })
                }
            }

            pub fn named(name: &str) -> Self {
                Self::new(name).expect(concat!("static ", $kind, " name"))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

ident_newtype!(
    /// Label marking a position in a strategy.
    LabelId,
    "label"
);
ident_newtype!(
    /// Variable bound by a recursion binder.
    VarId,
    "variable"
);

/// A strategy term. Clones share structure.
#[derive(Clone)]
pub struct Strategy(Arc<Inner>);

struct Inner {
    node: Node,
    /// Structural hash, computed once.
    hash: u64,
    /// Whether ε is in the language, treating free variables as empty.
    nullable: bool,
    depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Rule(RuleId),
    /// `~s`: succeeds, without changing anything, when `s` has no successful run.
    Check(Strategy),
    Seq(Strategy, Strategy),
    Choice(Strategy, Strategy),
    Succeed,
    Fail,
    Label(LabelId, Strategy),
    Rec(VarId, Strategy),
    Var(VarId),
}

/// A symbol of the strategy alphabet: a rule or an applicability check.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Rule(RuleId),
    Check(Strategy),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rule(r) => write!(f, "{r}"),
            Atom::Check(s) => write!(f, "~({s})"),
        }
    }
}

impl Strategy {
    pub fn from_node(node: Node) -> Self {
        let nullable = match &node {
            Node::Succeed => true,
            Node::Rule(_) | Node::Check(_) | Node::Fail | Node::Label(..) | Node::Var(_) => false,
            Node::Seq(a, b) => a.0.nullable && b.0.nullable,
            Node::Choice(a, b) => a.0.nullable || b.0.nullable,
            // The least fixed point: the body with the variable taken as empty.
            Node::Rec(_, body) => body.0.nullable,
        };
        let depth = 1 + match &node {
            Node::Rule(_) | Node::Succeed | Node::Fail | Node::Var(_) => 0,
            Node::Check(a) | Node::Label(_, a) | Node::Rec(_, a) => a.0.depth,
            Node::Seq(a, b) | Node::Choice(a, b) => a.0.depth.max(b.0.depth),
        };
        let mut h = std::collections::hash_map::DefaultHasher::new();
        node.hash(&mut h);
        Strategy(Arc::new(Inner {
            hash: h.finish(),
            nullable,
            depth,
            node,
        }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// Whether the empty sentence is in the language. Constant time.
    pub fn nullable(&self) -> bool {
        self.0.nullable
    }

    /// Nesting depth of the term; an atom has depth 1. Constant time.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_succeed(&self) -> bool {
        matches!(self.node(), Node::Succeed)
    }

    /// Variables occurring free in the term.
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        fn go(s: &Strategy, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
            match s.node() {
                Node::Var(v) => {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
                Node::Rec(v, body) => {
                    bound.push(v.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Node::Check(a) | Node::Label(_, a) => go(a, bound, out),
                Node::Seq(a, b) | Node::Choice(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Node::Rule(_) | Node::Succeed | Node::Fail => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every rule name mentioned anywhere in the term, checks included.
    pub fn rule_ids(&self) -> BTreeSet<RuleId> {
        fn go(s: &Strategy, out: &mut BTreeSet<RuleId>) {
            match s.node() {
                Node::Rule(r) => {
                    out.insert(r.clone());
                }
                Node::Check(a) | Node::Label(_, a) | Node::Rec(_, a) => go(a, out),
                Node::Seq(a, b) | Node::Choice(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Node::Succeed | Node::Fail | Node::Var(_) => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Rule(_) | Node::Succeed | Node::Fail | Node::Var(_) => 1,
            Node::Check(a) | Node::Label(_, a) | Node::Rec(_, a) => 1 + a.size(),
            Node::Seq(a, b) | Node::Choice(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// One step of fixed-point unfolding: `Rec(v, body)` becomes `body` with
    /// the free occurrences of `v` replaced by the binder itself. Any other
    /// node is returned unchanged.
    ///
    /// Substitution is not capture-avoiding; the binder must be closed, which
    /// holds for every strategy the engine executes.
    pub fn unroll(&self) -> Strategy {
        match self.node() {
            Node::Rec(v, body) => substitute(body, v, self),
            _ => self.clone(),
        }
    }
}

fn substitute(s: &Strategy, var: &VarId, with: &Strategy) -> Strategy {
    match s.node() {
        Node::Var(v) if v == var => with.clone(),
        Node::Var(_) | Node::Rule(_) | Node::Succeed | Node::Fail => s.clone(),
        Node::Rec(v, _) if v == var => s.clone(),
        Node::Rec(v, body) => rebuild1(s, body, var, with, |b| Node::Rec(v.clone(), b)),
        Node::Check(a) => rebuild1(s, a, var, with, Node::Check),
        Node::Label(l, a) => rebuild1(s, a, var, with, |b| Node::Label(l.clone(), b)),
        Node::Seq(a, b) => rebuild2(s, a, b, var, with, Node::Seq),
        Node::Choice(a, b) => rebuild2(s, a, b, var, with, Node::Choice),
    }
}

fn rebuild1(
    original: &Strategy,
    child: &Strategy,
    var: &VarId,
    with: &Strategy,
    make: impl FnOnce(Strategy) -> Node,
) -> Strategy {
    let new = substitute(child, var, with);
    if Arc::ptr_eq(&new.0, &child.0) {
        original.clone()
    } else {
        Strategy::from_node(make(new))
    }
}

fn rebuild2(
    original: &Strategy,
    left: &Strategy,
    right: &Strategy,
    var: &VarId,
    with: &Strategy,
    make: impl FnOnce(Strategy, Strategy) -> Node,
) -> Strategy {
    let l = substitute(left, var, with);
    let r = substitute(right, var, with);
    if Arc::ptr_eq(&l.0, &left.0) && Arc::ptr_eq(&r.0, &right.0) {
        original.clone()
    } else {
        Strategy::from_node(make(l, r))
    }
}

impl PartialEq for Strategy {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for Strategy {}

impl PartialOrd for Strategy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Strategy {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.node.cmp(&other.0.node)
        }
    }
}

impl Hash for Strategy {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::print(self))
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strategy({self})")
    }
}
