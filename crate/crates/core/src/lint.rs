//! Static checks on strategies: left recursion and left factors.
//!
//! Both analyses work on the strategy term alone. Rules are classified by a
//! caller-supplied function, usually [`RuleBook::kind`](crate::rule::RuleBook::kind)
//! or [`builtin_kind`](crate::rule::builtin_kind).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::engine::Limits;
use crate::error::Error;
use crate::rule::RuleKind;
use crate::strategy::{Node, RuleId, Strategy, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    LeftRecursion,
    LeftFactor,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::LeftRecursion => "left recursion",
            FindingKind::LeftFactor => "left factor",
        })
    }
}

/// A problem at a node of the strategy tree. `path` lists child indices from
/// the root: both operands of `;` and `|` are numbered 0 and 1, the body of
/// a check, label or `mu` is child 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub path: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}: {}", self.kind, self.path, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LintReport {
    pub findings: Vec<Finding>,
}

impl LintReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn extend(&mut self, other: LintReport) {
        self.findings.extend(other.findings);
    }
}

/// Which rules count as progress when looking for left recursion.
///
/// Major rules always do, and so do descending moves (`Downs`, `Down(i)`),
/// which can only be repeated as often as the term is deep. `Transparent`
/// treats every other minor rule as no progress; `Opaque` counts them too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeftRecursionMode {
    #[default]
    Transparent,
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown lint mode {0:?}; expected transparent or opaque")]
pub struct UnknownMode(pub String);

impl FromStr for LeftRecursionMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "transparent" => Ok(LeftRecursionMode::Transparent),
            "opaque" => Ok(LeftRecursionMode::Opaque),
            _ => Err(UnknownMode(s.to_string())),
        }
    }
}

type Kind<'a> = &'a dyn Fn(&RuleId) -> RuleKind;

/// Both analyses.
pub fn lint(s: &Strategy, kind: Kind<'_>, mode: LeftRecursionMode) -> LintReport {
    let mut report = detect_left_recursion(s, kind, mode);
    report.extend(detect_left_factors(s, kind));
    report
}

/// Execution limits that abort evaluation after `budget` transitions.
pub fn with_step_budget(budget: usize) -> Result<Limits, Error> {
    Limits::with_budget(budget)
}

/// Flags every `mu x . s` whose body can reach `x` again before any rule
/// that counts as progress has been applied.
pub fn detect_left_recursion(s: &Strategy, kind: Kind<'_>, mode: LeftRecursionMode) -> LintReport {
    let progress = |id: &RuleId| match kind(id) {
        RuleKind::Major | RuleKind::Descent => true,
        RuleKind::Minor => mode == LeftRecursionMode::Opaque,
    };
    let mut lr = LeftRec {
        progress: &progress,
        report: LintReport::default(),
    };
    lr.walk(s, &mut Vec::new(), &mut HashMap::new());
    lr.report
}

struct LeftRec<'a> {
    progress: &'a dyn Fn(&RuleId) -> bool,
    report: LintReport,
}

impl LeftRec<'_> {
    /// Whether `s` can finish without progress, and which variables it can
    /// reach without progress. `env` holds that first component for bound
    /// variables.
    fn reach(&self, s: &Strategy, env: &mut HashMap<VarId, bool>) -> (bool, BTreeSet<VarId>) {
        match s.node() {
            Node::Rule(id) => (!(self.progress)(id), BTreeSet::new()),
            // A check runs its body from the current state.
            Node::Check(b) => (true, self.reach(b, env).1),
            Node::Succeed => (true, BTreeSet::new()),
            Node::Fail => (false, BTreeSet::new()),
            Node::Seq(a, b) => {
                let (pa, mut va) = self.reach(a, env);
                if !pa {
                    return (false, va);
                }
                let (pb, vb) = self.reach(b, env);
                va.extend(vb);
                (pb, va)
            }
            Node::Choice(a, b) => {
                let (pa, mut va) = self.reach(a, env);
                let (pb, vb) = self.reach(b, env);
                va.extend(vb);
                (pa || pb, va)
            }
            Node::Label(_, b) => self.reach(b, env),
            Node::Rec(v, b) => {
                let p = self.fixpoint(v, b, env);
                let saved = env.insert(v.clone(), p);
                let (_, mut vars) = self.reach(b, env);
                restore(env, v, saved);
                vars.remove(v);
                (p, vars)
            }
            Node::Var(v) => (
                env.get(v).copied().unwrap_or(false),
                BTreeSet::from([v.clone()]),
            ),
        }
    }

    fn fixpoint(&self, v: &VarId, body: &Strategy, env: &mut HashMap<VarId, bool>) -> bool {
        let mut p = false;
        loop {
            let saved = env.insert(v.clone(), p);
            let next = self.reach(body, env).0;
            restore(env, v, saved);
            if next == p {
                return p;
            }
            p = next;
        }
    }

    fn walk(&mut self, s: &Strategy, path: &mut Vec<usize>, env: &mut HashMap<VarId, bool>) {
        match s.node() {
            Node::Rule(_) | Node::Succeed | Node::Fail | Node::Var(_) => {}
            Node::Check(b) | Node::Label(_, b) => self.child(b, 0, path, env),
            Node::Seq(a, b) | Node::Choice(a, b) => {
                self.child(a, 0, path, env);
                self.child(b, 1, path, env);
            }
            Node::Rec(v, b) => {
                let p = self.fixpoint(v, b, env);
                let saved = env.insert(v.clone(), p);
                if self.reach(b, env).1.contains(v) {
                    self.report.findings.push(Finding {
                        kind: FindingKind::LeftRecursion,
                        path: path.clone(),
                        detail: format!(
                            "`{v}` can be re-entered before any rule makes progress"
                        ),
                    });
                }
                self.child(b, 0, path, env);
                restore(env, v, saved);
            }
        }
    }

    fn child(&mut self, s: &Strategy, i: usize, path: &mut Vec<usize>, env: &mut HashMap<VarId, bool>) {
        path.push(i);
        self.walk(s, path, env);
        path.pop();
    }
}

fn restore<V>(env: &mut HashMap<VarId, V>, v: &VarId, saved: Option<V>) {
    match saved {
        Some(old) => env.insert(v.clone(), old),
        None => env.remove(v),
    };
}

/// Leading behaviour of a strategy, up to its first major rule.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct First {
    /// Major rules that can come first.
    majors: BTreeSet<RuleId>,
    /// Whether the strategy can finish without a major rule.
    passes: bool,
    /// Whether an applicability check can come before the first major rule.
    checks: bool,
}

/// Flags every choice whose branches can start with the same major rule,
/// looking through minor rules, checks and labels.
///
/// `s |> t`, spelled `s | ~s; t`, is exempt: the check makes the choice
/// deterministic.
pub fn detect_left_factors(s: &Strategy, kind: Kind<'_>) -> LintReport {
    let is_major = |id: &RuleId| kind(id) == RuleKind::Major;
    let mut lf = LeftFactor {
        is_major: &is_major,
        report: LintReport::default(),
    };
    lf.walk(s, &mut Vec::new(), &mut HashMap::new());
    lf.report
}

struct LeftFactor<'a> {
    is_major: &'a dyn Fn(&RuleId) -> bool,
    report: LintReport,
}

impl LeftFactor<'_> {
    fn first(&self, s: &Strategy, env: &mut HashMap<VarId, First>) -> First {
        match s.node() {
            Node::Rule(id) if (self.is_major)(id) => First {
                majors: BTreeSet::from([id.clone()]),
                passes: false,
                checks: false,
            },
            Node::Rule(_) | Node::Succeed => First {
                passes: true,
                ..First::default()
            },
            Node::Check(_) => First {
                passes: true,
                checks: true,
                ..First::default()
            },
            Node::Fail => First::default(),
            Node::Seq(a, b) => {
                let mut fa = self.first(a, env);
                if fa.passes {
                    let fb = self.first(b, env);
                    fa.majors.extend(fb.majors);
                    fa.checks |= fb.checks;
                    fa.passes = fb.passes;
                }
                fa
            }
            Node::Choice(a, b) => {
                let mut fa = self.first(a, env);
                let fb = self.first(b, env);
                fa.majors.extend(fb.majors);
                fa.passes |= fb.passes;
                fa.checks |= fb.checks;
                fa
            }
            Node::Label(_, b) => self.first(b, env),
            Node::Rec(v, b) => self.fixpoint(v, b, env),
            Node::Var(v) => env.get(v).cloned().unwrap_or_default(),
        }
    }

    /// Least fixed point; every component only grows, so this terminates.
    fn fixpoint(&self, v: &VarId, body: &Strategy, env: &mut HashMap<VarId, First>) -> First {
        let mut f = First::default();
        loop {
            let saved = env.insert(v.clone(), f.clone());
            let next = self.first(body, env);
            restore(env, v, saved);
            if next == f {
                return f;
            }
            f = next;
        }
    }

    fn walk(&mut self, s: &Strategy, path: &mut Vec<usize>, env: &mut HashMap<VarId, First>) {
        match s.node() {
            Node::Rule(_) | Node::Succeed | Node::Fail | Node::Var(_) => {}
            Node::Check(b) | Node::Label(_, b) => self.child(b, 0, path, env),
            Node::Seq(a, b) => {
                self.child(a, 0, path, env);
                self.child(b, 1, path, env);
            }
            Node::Choice(a, b) => {
                if !is_orelse(a, b) {
                    self.compare(a, b, path, env);
                }
                self.child(a, 0, path, env);
                self.child(b, 1, path, env);
            }
            Node::Rec(v, b) => {
                let f = self.fixpoint(v, b, env);
                let saved = env.insert(v.clone(), f);
                self.child(b, 0, path, env);
                restore(env, v, saved);
            }
        }
    }

    fn compare(&mut self, a: &Strategy, b: &Strategy, path: &[usize], env: &mut HashMap<VarId, First>) {
        let fa = self.first(a, env);
        let fb = self.first(b, env);
        let common: Vec<String> = fa
            .majors
            .intersection(&fb.majors)
            .map(|r| r.to_string())
            .collect();
        if common.is_empty() {
            return;
        }
        let mut detail = format!("both branches can start with {}", common.join(", "));
        if fa.checks || fb.checks {
            detail.push_str(" (applicability checks may come first and were not compared)");
        }
        self.report.findings.push(Finding {
            kind: FindingKind::LeftFactor,
            path: path.to_vec(),
            detail,
        });
    }

    fn child(&mut self, s: &Strategy, i: usize, path: &mut Vec<usize>, env: &mut HashMap<VarId, First>) {
        path.push(i);
        self.walk(s, path, env);
        path.pop();
    }
}

/// `a | ~a; t`
fn is_orelse(a: &Strategy, b: &Strategy) -> bool {
    match b.node() {
        Node::Seq(c, _) => matches!(c.node(), Node::Check(inner) if inner == a),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exercise::write_as_power_of;
    use crate::rule::builtin_kind;
    use crate::strategy::syntax::parse;

    fn lr(text: &str, mode: LeftRecursionMode) -> LintReport {
        detect_left_recursion(&parse(text).unwrap(), &builtin_kind, mode)
    }

    fn lf(text: &str) -> LintReport {
        detect_left_factors(&parse(text).unwrap(), &builtin_kind)
    }

    #[test]
    fn direct_left_recursion() {
        for mode in [LeftRecursionMode::Transparent, LeftRecursionMode::Opaque] {
            let r = lr("mu x . x; AddExp", mode);
            assert_eq!(r.findings.len(), 1);
            assert_eq!(r.findings[0].kind, FindingKind::LeftRecursion);
            assert_eq!(r.findings[0].path, Vec::<usize>::new());
        }
    }

    #[test]
    fn leading_minor_depends_on_mode() {
        let text = "mu x . Down; x; AddExp";
        assert!(!lr(text, LeftRecursionMode::Transparent).is_clean());
        assert!(lr(text, LeftRecursionMode::Opaque).is_clean());
    }

    #[test]
    fn consuming_recursion_is_clean() {
        assert!(lr("mu x . AddExp; x | succeed", LeftRecursionMode::Transparent).is_clean());
        assert!(lr("mu x . Downs; x; Up | AddExp", LeftRecursionMode::Transparent).is_clean());
    }

    #[test]
    fn recursion_through_a_nullable_prefix() {
        assert!(!lr("mu x . (succeed | AddExp); x", LeftRecursionMode::Opaque).is_clean());
        assert!(!lr("mu x . ~x; AddExp", LeftRecursionMode::Opaque).is_clean());
        assert!(lr("mu x . fail; x", LeftRecursionMode::Opaque).is_clean());
    }

    #[test]
    fn nested_binders_report_the_inner_path() {
        let r = lr("AddExp; (mu x . mu y . y | x)", LeftRecursionMode::Opaque);
        let paths: Vec<_> = r.findings.iter().map(|f| f.path.clone()).collect();
        assert_eq!(paths, vec![vec![1], vec![1, 0]]);
    }

    #[test]
    fn left_factor_examples() {
        let r = lf("(l1: AddExp; MulExp) | (l2: AddExp; DistExp)");
        assert_eq!(r.findings.len(), 1);
        assert_eq!(r.findings[0].kind, FindingKind::LeftFactor);
        assert!(r.findings[0].detail.contains("AddExp"));
        assert!(lf("AddExp; (MulExp | DistExp)").is_clean());
        assert!(lf("AddExp | MulExp").is_clean());
    }

    #[test]
    fn left_factor_through_minors_and_recursion() {
        assert!(!lf("Up; AddExp | AddExp").is_clean());
        assert!(!lf("mu x . AddExp | Downs; x; Up").is_clean());
        assert!(lf("AddExp | ~AddExp; AddExp").is_clean());
    }

    #[test]
    fn shipped_strategy_is_clean() {
        let s = write_as_power_of();
        for mode in [LeftRecursionMode::Transparent, LeftRecursionMode::Opaque] {
            assert!(lint(&s, &builtin_kind, mode).is_clean());
        }
    }

    #[test]
    fn zero_budget_is_rejected() {
        assert_eq!(with_step_budget(0), Err(Error::ZeroBudget));
        assert_eq!(with_step_budget(5).unwrap().budget, 5);
    }
}
