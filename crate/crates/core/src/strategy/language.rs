//! Bounded enumeration of the sentence language of a strategy, and the
//! syntactic emptiness tests the semantics relies on.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Atom, Node, RuleId, Strategy, VarId};

pub const DEFAULT_MAX_LEN: usize = 32;
pub const DEFAULT_MAX_UNROLL: usize = 8;
/// Upper bound on intermediate sentences built by [`language_upto`].
pub const DEFAULT_SENTENCE_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("sentence enumeration exceeded its budget of {0}")]
    BudgetExceeded(usize),
}

/// A finite sequence of atoms; labels appear as `Enter(l)` / `Leave(l)` rules.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(Vec<Atom>);

impl Sentence {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Sentence(atoms)
    }

    pub fn empty() -> Self {
        Sentence(Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Drops minor rules and checks, keeping the major rule names.
    pub fn majors(&self, is_minor: impl Fn(&RuleId) -> bool) -> Vec<RuleId> {
        self.0
            .iter()
            .filter_map(|a| match a {
                Atom::Rule(r) if !is_minor(r) => Some(r.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn prepend(&self, atom: Atom) -> Sentence {
        let mut atoms = Vec::with_capacity(self.0.len() + 1);
        atoms.push(atom);
        atoms.extend(self.0.iter().cloned());
        Sentence(atoms)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Sentences of `s` of length at most `max_len`, where every recursion
/// binder may be entered at most `max_unroll` times along any nesting path.
pub fn language_upto(
    s: &Strategy,
    max_len: usize,
    max_unroll: usize,
) -> Result<BTreeSet<Sentence>, LanguageError> {
    language_upto_with_budget(s, max_len, max_unroll, DEFAULT_SENTENCE_BUDGET)
}

pub fn language_upto_with_budget(
    s: &Strategy,
    max_len: usize,
    max_unroll: usize,
    budget: usize,
) -> Result<BTreeSet<Sentence>, LanguageError> {
    let mut e = Enumerator {
        max_len,
        max_unroll,
        budget,
        built: 0,
    };
    let sets = e.lang(s, &mut Vec::new())?;
    Ok(sets.into_iter().map(Sentence).collect())
}

/// Major-rule projection of a set of sentences.
pub fn major_language(
    sentences: &BTreeSet<Sentence>,
    is_minor: impl Fn(&RuleId) -> bool,
) -> BTreeSet<Vec<RuleId>> {
    sentences.iter().map(|s| s.majors(&is_minor)).collect()
}

struct Binding {
    var: VarId,
    body: Strategy,
    entries: usize,
}

struct Enumerator {
    max_len: usize,
    max_unroll: usize,
    budget: usize,
    built: usize,
}

type Words = BTreeSet<Vec<Atom>>;

impl Enumerator {
    fn charge(&mut self, n: usize) -> Result<(), LanguageError> {
        self.built += n;
        if self.built > self.budget {
            Err(LanguageError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn single(&mut self, atom: Atom) -> Result<Words, LanguageError> {
        self.charge(1)?;
        let mut out = Words::new();
        if self.max_len >= 1 {
            out.insert(vec![atom]);
        }
        Ok(out)
    }

    fn concat(&mut self, left: &Words, right: &Words) -> Result<Words, LanguageError> {
        let mut out = Words::new();
        for x in left {
            for y in right {
                if x.len() + y.len() <= self.max_len {
                    self.charge(1)?;
                    let mut w = x.clone();
                    w.extend(y.iter().cloned());
                    out.insert(w);
                }
            }
        }
        Ok(out)
    }

    fn lang(&mut self, s: &Strategy, env: &mut Vec<Binding>) -> Result<Words, LanguageError> {
        match s.node() {
            Node::Rule(r) => self.single(Atom::Rule(r.clone())),
            Node::Check(c) => self.single(Atom::Check(c.clone())),
            Node::Succeed => {
                self.charge(1)?;
                Ok(Words::from([Vec::new()]))
            }
            Node::Fail => Ok(Words::new()),
            Node::Seq(a, b) => {
                let la = self.lang(a, env)?;
                if la.is_empty() {
                    return Ok(la);
                }
                let lb = self.lang(b, env)?;
                self.concat(&la, &lb)
            }
            Node::Choice(a, b) => {
                let mut la = self.lang(a, env)?;
                la.extend(self.lang(b, env)?);
                Ok(la)
            }
            Node::Label(l, body) => {
                let enter = Words::from([vec![Atom::Rule(RuleId::enter(l))]]);
                let leave = Words::from([vec![Atom::Rule(RuleId::leave(l))]]);
                let inner = self.lang(body, env)?;
                let head = self.concat(&enter, &inner)?;
                self.concat(&head, &leave)
            }
            Node::Rec(v, body) => {
                if self.max_unroll == 0 {
                    return Ok(Words::new());
                }
                env.push(Binding {
                    var: v.clone(),
                    body: body.clone(),
                    entries: 1,
                });
                let out = self.lang(body, env);
                env.pop();
                out
            }
            Node::Var(v) => {
                let Some(pos) = env.iter().rposition(|b| &b.var == v) else {
                    // Free variable: no sentences.
                    return Ok(Words::new());
                };
                if env[pos].entries >= self.max_unroll {
                    return Ok(Words::new());
                }
                let binding = Binding {
                    var: v.clone(),
                    body: env[pos].body.clone(),
                    entries: env[pos].entries + 1,
                };
                // The body only sees bindings that were in scope at its binder.
                let mut scoped: Vec<Binding> = env
                    .drain(pos..)
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .collect();
                env.push(binding);
                let body = env.last().expect("just pushed").body.clone();
                let out = self.lang(&body, env);
                env.pop();
                while let Some(b) = scoped.pop() {
                    env.push(b);
                }
                out
            }
        }
    }
}

/// Whether the empty sentence is in the language (`ε ∈ L(s)`).
pub fn nullable(s: &Strategy) -> bool {
    s.nullable()
}

/// Whether the language contains ε or a sentence made only of minor rules
/// and applicability checks. Labels contribute minor `Enter`/`Leave` rules.
pub fn accepts_empty(s: &Strategy, is_minor: &dyn Fn(&RuleId) -> bool) -> bool {
    emptiness(s, is_minor, true, &mut Vec::new())
}

fn emptiness(
    s: &Strategy,
    minor: &dyn Fn(&RuleId) -> bool,
    checks: bool,
    env: &mut Vec<(VarId, bool)>,
) -> bool {
    match s.node() {
        Node::Rule(r) => minor(r),
        Node::Check(_) => checks,
        Node::Succeed => true,
        Node::Fail => false,
        Node::Seq(a, b) => emptiness(a, minor, checks, env) && emptiness(b, minor, checks, env),
        Node::Choice(a, b) => emptiness(a, minor, checks, env) || emptiness(b, minor, checks, env),
        Node::Label(l, body) => minor(&RuleId::enter(l)) && emptiness(body, minor, checks, env),
        Node::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, b)| *b)
            .unwrap_or(false),
        Node::Rec(v, body) => {
            // Least fixed point of a monotone boolean function: f(false)
            // decides it.
            env.push((v.clone(), false));
            let out = emptiness(body, minor, checks, env);
            env.pop();
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::*;

    fn r(name: &str) -> Atom {
        Atom::Rule(RuleId::named(name))
    }

    fn words(set: &BTreeSet<Sentence>) -> Vec<Vec<Atom>> {
        set.iter().map(|s| s.atoms().to_vec()).collect()
    }

    #[test]
    fn units() {
        assert_eq!(words(&language_upto(&succeed(), 5, 0).unwrap()), vec![vec![]]);
        assert!(language_upto(&fail(), 5, 0).unwrap().is_empty());
    }

    #[test]
    fn choice_is_union() {
        let s = choice(rule("A"), rule("B"));
        assert_eq!(
            words(&language_upto(&s, 1, 0).unwrap()),
            vec![vec![r("A")], vec![r("B")]]
        );
    }

    #[test]
    fn sequence_concatenates_within_length() {
        let s = seq(choice(rule("A"), succeed()), rule("B"));
        assert_eq!(
            words(&language_upto(&s, 2, 0).unwrap()),
            vec![vec![r("A"), r("B")], vec![r("B")]]
        );
        assert_eq!(words(&language_upto(&s, 1, 0).unwrap()), vec![vec![r("B")]]);
    }

    #[test]
    fn labels_expand_to_enter_and_leave() {
        let l = LabelId::named("l");
        let s = label(&l, rule("A"));
        assert_eq!(
            words(&language_upto(&s, 3, 0).unwrap()),
            vec![vec![r("Enter(l)"), r("A"), r("Leave(l)")]]
        );
        assert!(language_upto(&s, 2, 0).unwrap().is_empty());
    }

    #[test]
    fn recursion_is_bounded_by_unrolling() {
        let s = repeat(rule("A"));
        let lang = language_upto(&s, 10, 3).unwrap();
        let majors = major_language(&lang, |_| false);
        assert!(majors.contains(&vec![]));
        assert!(majors.contains(&vec![RuleId::named("A"), RuleId::named("A")]));
        assert!(!majors.contains(&vec![RuleId::named("A"); 3]));
        assert!(language_upto(&s, 10, 0).unwrap().is_empty());
    }

    #[test]
    fn nullability() {
        assert!(nullable(&succeed()));
        assert!(!nullable(&rule("A")));
        // The else-branch of `try` starts with a check atom.
        assert!(!nullable(&repeat(rule("A"))));
        assert!(nullable(&option(rule("A"))));
        let x = VarId::named("x");
        assert!(!nullable(&rec(&x, var(&x))));
        assert!(nullable(&rec(&x, choice(var(&x), succeed()))));
        assert!(!nullable(&label(&LabelId::named("l"), succeed())));
    }

    #[test]
    fn accepts_empty_sees_through_minors() {
        let minor = |r: &RuleId| r.as_str().starts_with("Enter") || r.as_str() == "M";
        assert!(accepts_empty(&succeed(), &minor));
        assert!(!accepts_empty(&rule("AddExp"), &minor));
        let enter = rule_id(RuleId::enter(&LabelId::named("l")));
        assert!(accepts_empty(&seq(enter, succeed()), &minor));
        assert!(accepts_empty(&repeat(rule("AddExp")), &minor));
    }

    #[test]
    fn budget_is_enforced() {
        let s = repeat(choice_all([rule("A"), rule("B"), rule("C")]));
        assert!(matches!(
            language_upto_with_budget(&s, 12, 12, 100),
            Err(LanguageError::BudgetExceeded(100))
        ));
    }
}
