//! Exercise records, a registry keyed by exercise code, and the shipped
//! power exercise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{Limits, State};
use crate::error::ParseError;
use crate::lint::{self, LeftRecursionMode};
use crate::nav::{self, Term, Zipper};
use crate::powers::{self, rules, Expr};
use crate::rule::{Environment, RewriteRule, RuleBook};
use crate::services::Services;
use crate::strategy::{choice_all, label, repeat, rule, LabelId, RuleId, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Difficulty {
    Easy,
    #[default]
    Medium,
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    /// Maximum constructor depth of generated expressions.
    pub fn max_depth(self) -> usize {
        match self {
            Difficulty::Easy => 3,
            Difficulty::Medium => 5,
            Difficulty::Hard => 7,
        }
    }

    /// Maximum number of constructors of generated expressions. Keeps worked
    /// solutions short enough for stepwise feedback.
    pub fn max_size(self) -> usize {
        match self {
            Difficulty::Easy => 6,
            Difficulty::Medium => 12,
            Difficulty::Hard => 16,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown difficulty {0:?}; expected easy, medium or hard")]
pub struct UnknownDifficulty(pub String);

impl FromStr for Difficulty {
    type Err = UnknownDifficulty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "easy" => Ok(Difficulty::Easy),
            "medium" => Ok(Difficulty::Medium),
            "hard" => Ok(Difficulty::Hard),
            _ => Err(UnknownDifficulty(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no suitable expression found after {0} attempts")]
pub struct GenerationFailed(pub usize);

pub type Relation<T> = fn(&T, &T) -> bool;
pub type Predicate<T> = fn(&T) -> bool;
pub type Generator<T> = fn(Difficulty, u64) -> Result<T, GenerationFailed>;

/// Everything needed to offer feedback on one kind of exercise.
#[derive(Clone)]
pub struct Exercise<T: Term> {
    pub code: String,
    pub strategy: Strategy,
    /// The domain rules the strategy mentions.
    pub strategy_rules: Vec<RewriteRule<T>>,
    /// Extra sound rules a student may use that the strategy does not.
    pub rule_set: Vec<RewriteRule<T>>,
    /// Known misconceptions, used only for diagnosis.
    pub buggy_rules: Vec<RewriteRule<T>>,
    pub equivalence: Relation<T>,
    pub similarity: Relation<T>,
    pub is_suitable: Predicate<T>,
    pub is_ready: Predicate<T>,
    pub generator: Option<Generator<T>>,
    /// Preferred rules first. Rules not listed come after, by name.
    pub ordering: Vec<RuleId>,
    pub parse: fn(&str) -> Result<T, ParseError>,
    pub print: fn(&T) -> String,
}

impl<T: Term> Exercise<T> {
    /// The rules the strategy may use: strategy rules and the extra rule set.
    pub fn rule_book(&self) -> RuleBook<T> {
        let mut book = RuleBook::new();
        for r in self.rules() {
            book.insert(r.clone());
        }
        book
    }

    /// Strategy rules followed by rule-set rules, without duplicates.
    pub fn rules(&self) -> Vec<&RewriteRule<T>> {
        let mut out: Vec<&RewriteRule<T>> = Vec::new();
        for r in self.strategy_rules.iter().chain(&self.rule_set) {
            if !out.iter().any(|o| o.id() == r.id()) {
                out.push(r);
            }
        }
        out
    }

    pub fn rule(&self, id: &RuleId) -> Option<&RewriteRule<T>> {
        self.rules().into_iter().find(|r| r.id() == id)
    }

    /// Sort key of a rule under the exercise's ordering.
    pub fn rank(&self, id: &RuleId) -> (usize, String) {
        match self.ordering.iter().position(|r| r == id) {
            Some(i) => (i, String::new()),
            None => (self.ordering.len(), id.to_string()),
        }
    }

    /// Initial state for `term`: empty environment, root focus, full strategy.
    pub fn start(&self, term: T) -> State<T> {
        State::new(Environment::new(), Zipper::new(term), self.strategy.clone())
    }
}

impl<T: Term> fmt::Debug for Exercise<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Exercise")
            .field("code", &self.code)
            .field("strategy", &self.strategy)
            .field("ordering", &self.ordering)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("an exercise with code {0:?} is already registered")]
    DuplicateCode(String),
    #[error("no exercise with code {0:?}")]
    UnknownCode(String),
}

#[derive(Debug, Clone)]
pub struct Registry<T: Term> {
    exercises: BTreeMap<String, Exercise<T>>,
}

impl<T: Term> Default for Registry<T> {
    fn default() -> Self {
        Registry {
            exercises: BTreeMap::new(),
        }
    }
}

impl<T: Term> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, ex: Exercise<T>) -> Result<(), RegistryError> {
        if self.exercises.contains_key(&ex.code) {
            return Err(RegistryError::DuplicateCode(ex.code));
        }
        self.exercises.insert(ex.code.clone(), ex);
        Ok(())
    }

    pub fn lookup(&self, code: &str) -> Result<&Exercise<T>, RegistryError> {
        self.exercises
            .get(code)
            .ok_or_else(|| RegistryError::UnknownCode(code.to_string()))
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.exercises.keys().map(String::as_str)
    }
}

pub const POWER_EXERCISE: &str = "powerExercise";
pub const WRITE_AS_POWER_OF: &str = "writeAsPowerOf";

/// `writeAsPowerOf = l (repeat (bottomUp (AddExp <|> MulExp <|> DistExp)))`
pub fn write_as_power_of() -> Strategy {
    let step = choice_all([
        rule(rules::ADD_EXP),
        rule(rules::MUL_EXP),
        rule(rules::DIST_EXP),
    ]);
    label(
        &LabelId::named(WRITE_AS_POWER_OF),
        repeat(nav::bottom_up(step)),
    )
}

pub fn power_exercise() -> Exercise<Expr> {
    Exercise {
        code: POWER_EXERCISE.to_string(),
        strategy: write_as_power_of(),
        strategy_rules: vec![
            rules::rule_add_exp(),
            rules::rule_mul_exp(),
            rules::rule_dist_exp(),
        ],
        rule_set: vec![rules::rule_reci_exp()],
        buggy_rules: vec![rules::rule_bug_add_exp()],
        equivalence: powers::eq_power,
        similarity: powers::sim_power,
        is_suitable: powers::suitable_power,
        is_ready: powers::ready_power,
        generator: Some(powers::generate_power),
        ordering: [
            rules::ADD_EXP,
            rules::MUL_EXP,
            rules::DIST_EXP,
            rules::RECI_EXP,
        ]
        .into_iter()
        .map(RuleId::named)
        .collect(),
        parse: powers::parse,
        print: powers::print,
    }
}

/// A registry holding every shipped exercise.
pub fn default_registry() -> Registry<Expr> {
    let mut reg = Registry::new();
    reg.register(power_exercise())
        .expect("shipped exercise codes are distinct");
    reg
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckReport>,
}

impl ValidationReport {
    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.outcome, Outcome::Failed { .. }))
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    fn push(&mut self, name: &'static str, outcome: Outcome) {
        self.checks.push(CheckReport { name, outcome });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.outcome {
                Outcome::Passed => writeln!(f, "pass  {}", c.name)?,
                Outcome::Failed { witness } => writeln!(f, "FAIL  {}: {witness}", c.name)?,
                Outcome::Skipped { reason } => writeln!(f, "skip  {}: {reason}", c.name)?,
            }
        }
        Ok(())
    }
}

pub const CHECK_LEFT_RECURSION: &str = "left-recursion";
pub const CHECK_LEFT_FACTORS: &str = "left-factors";
pub const CHECK_GENERATOR: &str = "generator";
pub const CHECK_RELATIONS: &str = "relations";
pub const CHECK_READY_AT_END: &str = "ready-at-end";
pub const CHECK_RULES_SOUND: &str = "rules-preserve-equivalence";
pub const CHECK_ONEFIRST_MINIMAL: &str = "onefirst-minimal";

/// Checks the requirements a domain description should meet, sampling
/// `samples` generated exercises starting from `seed`. Failures are report
/// entries with a witness, never errors.
pub fn validate<T: Term>(ex: &Exercise<T>, samples: usize, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let show = |t: &T| (ex.print)(t);

    let book = ex.rule_book();
    let kind = |id: &RuleId| book.kind(id);
    let lr = lint::detect_left_recursion(&ex.strategy, &kind, LeftRecursionMode::Transparent);
    report.push(CHECK_LEFT_RECURSION, lint_outcome(&lr));
    let lf = lint::detect_left_factors(&ex.strategy, &kind);
    report.push(CHECK_LEFT_FACTORS, lint_outcome(&lf));

    let Some(generator) = ex.generator else {
        let reason = "the exercise has no generator".to_string();
        for name in [
            CHECK_GENERATOR,
            CHECK_RELATIONS,
            CHECK_READY_AT_END,
            CHECK_RULES_SOUND,
            CHECK_ONEFIRST_MINIMAL,
        ] {
            report.push(name, Outcome::Skipped { reason: reason.clone() });
        }
        return report;
    };

    let mut starts = Vec::new();
    let mut generator_failure = None;
    for i in 0..samples {
        let d = Difficulty::ALL[i % Difficulty::ALL.len()];
        let s = seed.wrapping_add(i as u64);
        match generator(d, s) {
            Ok(t) if (ex.is_suitable)(&t) && !(ex.is_ready)(&t) => starts.push(t),
            Ok(t) => {
                generator_failure.get_or_insert(format!(
                    "{d} seed {s} gave {}, which is not suitable-and-not-ready",
                    show(&t)
                ));
            }
            Err(e) => {
                generator_failure.get_or_insert(format!("{d} seed {s}: {e}"));
            }
        }
    }
    report.push(CHECK_GENERATOR, failure_outcome(generator_failure));

    let services = Services::new(ex, Limits::default()).expect("default limits are valid");
    let mut ready_failure = None;
    let mut minimal_failure = None;
    let mut corpus: Vec<T> = Vec::new();
    for t in &starts {
        let mut state = ex.start(t.clone());
        corpus.push(t.clone());
        let mut steps = 0;
        let outcome = loop {
            let firsts = match services.allfirsts(&state) {
                Ok(f) => f,
                Err(e) => break Err(e.to_string()),
            };
            let Some(min) = firsts.iter().min_by_key(|b| ex.rank(&b.rule)) else {
                break Ok(());
            };
            let (min_rule, min_rank) = (min.rule.clone(), ex.rank(&min.rule));
            match services.onefirst(&state) {
                Ok(b) if ex.rank(&b.rule) == min_rank => {
                    corpus.push(b.state.term().clone());
                    state = b.state;
                }
                Ok(b) => {
                    minimal_failure.get_or_insert(format!(
                        "at {} onefirst chose {} over {}",
                        show(state.term()),
                        b.rule, min_rule
                    ));
                    state = b.state;
                }
                Err(e) => break Err(e.to_string()),
            }
            steps += 1;
            if steps > services.limits().budget {
                break Err("derivation does not terminate".to_string());
            }
        };
        match outcome {
            Ok(()) if (ex.is_ready)(state.term()) => {}
            Ok(()) => {
                ready_failure.get_or_insert(format!(
                    "derivation from {} ends at {}, which is not ready",
                    show(t),
                    show(state.term())
                ));
            }
            Err(e) => {
                ready_failure.get_or_insert(format!("derivation from {}: {e}", show(t)));
            }
        }
    }

    let mut relation_failure = None;
    for pair in corpus.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let eq = ex.equivalence;
        let sim = ex.similarity;
        let problem = if !eq(a, a) {
            Some(format!("{} is not equivalent to itself", show(a)))
        } else if !sim(a, a) {
            Some(format!("{} is not similar to itself", show(a)))
        } else if eq(a, b) != eq(b, a) {
            Some(format!("equivalence of {} and {} is not symmetric", show(a), show(b)))
        } else if sim(a, b) && !eq(a, b) {
            Some(format!("{} and {} are similar but not equivalent", show(a), show(b)))
        } else {
            None
        };
        if let Some(p) = problem {
            relation_failure.get_or_insert(p);
        }
    }
    report.push(CHECK_RELATIONS, failure_outcome(relation_failure));
    report.push(CHECK_READY_AT_END, failure_outcome(ready_failure));

    let mut sound_failure = None;
    'corpus: for t in &corpus {
        for path in nav::positions(t) {
            let z = Zipper::at_path(t.clone(), &path).expect("positions are valid paths");
            for r in ex.rules() {
                for (_, after) in r.apply(&Environment::new(), &z) {
                    if !(ex.equivalence)(t, after.unfocus()) {
                        sound_failure = Some(format!(
                            "{} at {:?} rewrites {} to {}",
                            r.id(),
                            path,
                            show(t),
                            show(after.unfocus())
                        ));
                        break 'corpus;
                    }
                }
            }
        }
    }
    report.push(CHECK_RULES_SOUND, failure_outcome(sound_failure));
    report.push(CHECK_ONEFIRST_MINIMAL, failure_outcome(minimal_failure));
    report
}

fn lint_outcome(r: &lint::LintReport) -> Outcome {
    match r.findings.first() {
        None => Outcome::Passed,
        Some(f) => Outcome::Failed {
            witness: f.to_string(),
        },
    }
}

fn failure_outcome(failure: Option<String>) -> Outcome {
    match failure {
        None => Outcome::Passed,
        Some(witness) => Outcome::Failed { witness },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::language::{language_upto, major_language};

    #[test]
    fn difficulty_names() {
        for d in Difficulty::ALL {
            assert_eq!(d.as_str().parse::<Difficulty>().unwrap(), d);
        }
        assert!("extreme".parse::<Difficulty>().is_err());
    }

    #[test]
    fn registry_semantics() {
        let mut reg = Registry::new();
        assert_eq!(
            reg.lookup("x").unwrap_err(),
            RegistryError::UnknownCode("x".into())
        );
        reg.register(power_exercise()).unwrap();
        assert_eq!(reg.lookup(POWER_EXERCISE).unwrap().code, POWER_EXERCISE);
        assert_eq!(
            reg.register(power_exercise()).unwrap_err(),
            RegistryError::DuplicateCode(POWER_EXERCISE.into())
        );
        assert_eq!(reg.codes().collect::<Vec<_>>(), vec![POWER_EXERCISE]);
    }

    #[test]
    fn ordering_is_total_over_the_rules() {
        let ex = power_exercise();
        let ids: Vec<RuleId> = ex.rules().iter().map(|r| r.id().clone()).collect();
        for a in &ids {
            for b in &ids {
                if a != b {
                    assert_ne!(ex.rank(a), ex.rank(b));
                }
            }
        }
        assert!(ex.rank(&RuleId::named("AddExp")) < ex.rank(&RuleId::named("DistExp")));
        assert!(ex.rank(&RuleId::named("DistExp")) < ex.rank(&RuleId::named("ReciExp")));
    }

    #[test]
    fn strategy_language_contains_the_worked_derivation() {
        let ex = power_exercise();
        let book = ex.rule_book();
        let sentences = language_upto(&ex.strategy, 9, 3).unwrap();
        let lang = major_language(&sentences, |id| book.is_minor(id));
        assert!(lang.contains(&vec![RuleId::named("AddExp"), RuleId::named("MulExp")]));
    }

    #[test]
    fn shipped_exercise_validates() {
        let report = validate(&power_exercise(), 100, 42);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn unsound_rule_set_is_caught() {
        let mut ex = power_exercise();
        ex.rule_set.push(rules::rule_bug_add_exp());
        let report = validate(&ex, 30, 42);
        assert!(
            matches!(report.get(CHECK_RULES_SOUND), Some(Outcome::Failed { witness }) if witness.contains("BugAddExp")),
            "{report}"
        );
    }

    #[test]
    fn left_recursive_strategy_is_caught() {
        let mut ex = power_exercise();
        ex.strategy = crate::strategy::syntax::parse("mu x . x; AddExp").unwrap();
        let report = validate(&ex, 3, 1);
        assert!(matches!(report.get(CHECK_LEFT_RECURSION), Some(Outcome::Failed { .. })));
        assert!(!report.passed());
    }

    #[test]
    fn checks_are_skipped_without_a_generator() {
        let mut ex = power_exercise();
        ex.generator = None;
        let report = validate(&ex, 10, 0);
        assert!(report.passed());
        assert!(matches!(report.get(CHECK_GENERATOR), Some(Outcome::Skipped { .. })));
    }
}
