use super::{LabelId, Node, RuleId, Strategy, VarId};

/// Atom for a named rule. Panics on an invalid name; use [`rule_id`] for
/// names that come from input.
pub fn rule(name: &str) -> Strategy {
    rule_id(RuleId::named(name))
}

pub fn rule_id(id: RuleId) -> Strategy {
    Strategy::from_node(Node::Rule(id))
}

pub fn check(s: Strategy) -> Strategy {
    Strategy::from_node(Node::Check(s))
}

pub fn seq(a: Strategy, b: Strategy) -> Strategy {
    Strategy::from_node(Node::Seq(a, b))
}

pub fn choice(a: Strategy, b: Strategy) -> Strategy {
    Strategy::from_node(Node::Choice(a, b))
}

pub fn succeed() -> Strategy {
    Strategy::from_node(Node::Succeed)
}

pub fn fail() -> Strategy {
    Strategy::from_node(Node::Fail)
}

pub fn label(l: &LabelId, s: Strategy) -> Strategy {
    Strategy::from_node(Node::Label(l.clone(), s))
}

pub fn rec(v: &VarId, body: Strategy) -> Strategy {
    Strategy::from_node(Node::Rec(v.clone(), body))
}

pub fn var(v: &VarId) -> Strategy {
    Strategy::from_node(Node::Var(v.clone()))
}

/// Right-nested sequence of all items; `succeed` when empty.
pub fn seq_all(items: impl IntoIterator<Item = Strategy>) -> Strategy {
    let items: Vec<_> = items.into_iter().collect();
    items
        .into_iter()
        .rev()
        .reduce(|acc, s| seq(s, acc))
        .unwrap_or_else(succeed)
}

/// Right-nested choice between all items; `fail` when empty.
pub fn choice_all(items: impl IntoIterator<Item = Strategy>) -> Strategy {
    let items: Vec<_> = items.into_iter().collect();
    items
        .into_iter()
        .rev()
        .reduce(|acc, s| choice(s, acc))
        .unwrap_or_else(fail)
}

/// Left-biased choice: `a <|> (~a <*> b)`.
pub fn orelse(a: Strategy, b: Strategy) -> Strategy {
    choice(a.clone(), seq(check(a), b))
}

/// `s <|> succeed`
pub fn option(s: Strategy) -> Strategy {
    choice(s, succeed())
}

/// `s |> succeed`
pub fn try_(s: Strategy) -> Strategy {
    orelse(s, succeed())
}

/// `mu x . try (s <*> x)`
pub fn repeat(s: Strategy) -> Strategy {
    let x = fresh_var(&[&s]);
    rec(&x, try_(seq(s, var(&x))))
}

/// A variable name not free in any of the given strategies.
pub(crate) fn fresh_var(avoid: &[&Strategy]) -> VarId {
    let taken: Vec<VarId> = avoid.iter().flat_map(|s| s.free_vars()).collect();
    let base = VarId::named("x");
    if !taken.contains(&base) {
        return base;
    }
    (1..)
        .map(|i| VarId::named(&format!("x{i}")))
        .find(|v| !taken.contains(v))
        .expect("unbounded supply of names")
}
