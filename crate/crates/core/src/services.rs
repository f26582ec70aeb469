//! The feedback services, built on big steps and an exercise record.
//!
//! Each service call evaluates with a fresh [`Engine`], so the step budget
//! in [`Limits`] applies per call.

use std::fmt;

use thiserror::Error;

use crate::engine::{BigStep, Engine, Limits, State};
use crate::error::Error;
use crate::exercise::{Difficulty, Exercise, GenerationFailed};
use crate::nav::{self, Term, Zipper};
use crate::rule::{Environment, RewriteRule, RuleBook};
use crate::strategy::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("no step is available")]
    NoStep,
    #[error("no step is available but the strategy cannot finish here; the exercise is broken")]
    Stuck { trace: Vec<RuleId> },
    #[error("location {0:?} does not exist in the expression")]
    InvalidLocation(Vec<usize>),
    #[error("{rule} does not apply at {location:?}")]
    RuleNotApplicable { rule: RuleId, location: Vec<usize> },
    #[error("{0} is not a rule of this exercise")]
    UnknownRule(RuleId),
    #[error("exercise {0:?} has no generator")]
    NoGenerator(String),
    #[error(transparent)]
    Generation(#[from] GenerationFailed),
}

impl ServiceError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Engine(Error::BudgetExceeded { .. }) => "budget-exceeded",
            ServiceError::Engine(Error::ZeroBudget) => "invalid-budget",
            ServiceError::Engine(Error::UnknownRule(_)) => "unknown-rule",
            ServiceError::Engine(_) => "strategy-error",
            ServiceError::NoStep => "no-step-available",
            ServiceError::Stuck { .. } => "stuck",
            ServiceError::InvalidLocation(_) => "invalid-location",
            ServiceError::RuleNotApplicable { .. } => "rule-not-applicable",
            ServiceError::UnknownRule(_) => "unknown-rule",
            ServiceError::NoGenerator(_) => "no-generator",
            ServiceError::Generation(_) => "generation-failed",
        }
    }
}

/// Classification of a submitted expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diagnosis {
    /// Not equivalent to the current expression.
    NotEq,
    /// Not equivalent, but explained by a known misconception.
    Buggy(RuleId),
    /// Similar to the current expression: no visible progress.
    Similar,
    /// A step the strategy suggests.
    Expected(RuleId),
    /// A recognised rule the strategy did not suggest.
    Detour(RuleId),
    /// Equivalent, but no single rule explains it.
    Correct,
}

impl Diagnosis {
    pub fn name(&self) -> &'static str {
        match self {
            Diagnosis::NotEq => "NotEq",
            Diagnosis::Buggy(_) => "Buggy",
            Diagnosis::Similar => "Similar",
            Diagnosis::Expected(_) => "Expected",
            Diagnosis::Detour(_) => "Detour",
            Diagnosis::Correct => "Correct",
        }
    }

    pub fn rule(&self) -> Option<&RuleId> {
        match self {
            Diagnosis::Buggy(r) | Diagnosis::Expected(r) | Diagnosis::Detour(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule() {
            Some(r) => write!(f, "{} ({r})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Canonical sort key of a candidate step: rule order, then the location of
/// the rule (shorter first), then the resulting state.
type CandidateKey<T> = ((usize, String), usize, Vec<usize>, State<T>);

pub struct Services<'a, T: Term> {
    exercise: &'a Exercise<T>,
    rules: RuleBook<T>,
    limits: Limits,
}

impl<'a, T: Term> Services<'a, T> {
    pub fn new(exercise: &'a Exercise<T>, limits: Limits) -> Result<Self, ServiceError> {
        if limits.budget == 0 {
            return Err(Error::ZeroBudget.into());
        }
        Ok(Services {
            exercise,
            rules: exercise.rule_book(),
            limits,
        })
    }

    pub fn exercise(&self) -> &Exercise<T> {
        self.exercise
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// A fresh engine with the full budget.
    pub fn engine(&self) -> Engine<'_, T> {
        Engine::new(&self.rules, self.limits).expect("budget checked in Services::new")
    }

    fn key(&self, b: &BigStep<T>) -> CandidateKey<T> {
        (
            self.exercise.rank(&b.rule),
            b.location.len(),
            b.location.clone(),
            b.state.clone(),
        )
    }

    /// All big steps from `s`, in canonical order.
    pub fn allfirsts(&self, s: &State<T>) -> Result<Vec<BigStep<T>>, ServiceError> {
        self.allfirsts_in(&self.engine(), s)
    }

    pub fn allfirsts_in(&self, engine: &Engine<'_, T>, s: &State<T>) -> Result<Vec<BigStep<T>>, ServiceError> {
        let mut steps = engine.big_step(s)?;
        steps.sort_by_cached_key(|b| self.key(b));
        Ok(steps)
    }

    /// The candidate whose rule comes first in the exercise's ordering.
    pub fn onefirst(&self, s: &State<T>) -> Result<BigStep<T>, ServiceError> {
        self.onefirst_in(&self.engine(), s)
    }

    pub fn onefirst_in(&self, engine: &Engine<'_, T>, s: &State<T>) -> Result<BigStep<T>, ServiceError> {
        self.allfirsts_in(engine, s)?
            .into_iter()
            .next()
            .ok_or(ServiceError::NoStep)
    }

    /// A worked solution: `onefirst` until no step is left. The last state
    /// must be one where the strategy can finish.
    pub fn derivation(&self, s: &State<T>) -> Result<Vec<BigStep<T>>, ServiceError> {
        let engine = self.engine();
        let mut steps: Vec<BigStep<T>> = Vec::new();
        let majors = |steps: &[BigStep<T>]| steps.iter().map(|b| b.rule.clone()).collect();
        let with_trace = |e: ServiceError, steps: &[BigStep<T>]| match e {
            ServiceError::Engine(Error::BudgetExceeded { budget, .. }) => {
                ServiceError::Engine(Error::BudgetExceeded {
                    budget,
                    trace: majors(steps),
                })
            }
            e => e,
        };
        let mut current = s.clone();
        loop {
            match self.onefirst_in(&engine, &current) {
                Ok(b) => {
                    current = b.state.clone();
                    steps.push(b);
                }
                Err(ServiceError::NoStep) => break,
                Err(e) => return Err(with_trace(e, &steps)),
            }
        }
        match engine.minor_sentences(&current) {
            Ok(ends) if ends.is_empty() => Err(ServiceError::Stuck {
                trace: majors(&steps),
            }),
            Ok(_) => Ok(steps),
            Err(e) => Err(with_trace(e.into(), &steps)),
        }
    }

    pub fn ready(&self, s: &State<T>) -> bool {
        (self.exercise.is_ready)(s.term())
    }

    /// Number of major steps in [`derivation`](Self::derivation).
    pub fn steps_remaining(&self, s: &State<T>) -> Result<usize, ServiceError> {
        Ok(self.derivation(s)?.len())
    }

    fn focus_at(&self, location: &[usize], s: &State<T>) -> Result<Zipper<T>, ServiceError> {
        Zipper::at_path(s.term().clone(), location)
            .map_err(|_| ServiceError::InvalidLocation(location.to_vec()))
    }

    /// Applies `rule` at `location`, counted from the root, regardless of
    /// the strategy. The remaining strategy is left as it was.
    pub fn apply(&self, rule: &RuleId, location: &[usize], s: &State<T>) -> Result<State<T>, ServiceError> {
        let r = self
            .exercise
            .rule(rule)
            .ok_or_else(|| ServiceError::UnknownRule(rule.clone()))?;
        let z = self.focus_at(location, s)?;
        let (env, z) = r
            .apply(&s.env, &z)
            .into_iter()
            .next()
            .ok_or_else(|| ServiceError::RuleNotApplicable {
                rule: rule.clone(),
                location: location.to_vec(),
            })?;
        Ok(State::new(env, z, s.remaining.clone()))
    }

    /// The major rules of the exercise that apply at `location`, in rule order.
    pub fn applicable(&self, location: &[usize], s: &State<T>) -> Result<Vec<RuleId>, ServiceError> {
        let z = self.focus_at(location, s)?;
        let mut out: Vec<RuleId> = self
            .exercise
            .rules()
            .into_iter()
            .filter(|r| !r.is_minor() && !r.apply(&s.env, &z).is_empty())
            .map(|r| r.id().clone())
            .collect();
        out.sort_by_key(|r| self.exercise.rank(r));
        Ok(out)
    }

    /// A fresh initial state with a generated expression.
    pub fn generate(&self, difficulty: Difficulty, seed: u64) -> Result<State<T>, ServiceError> {
        let generator = self
            .exercise
            .generator
            .ok_or_else(|| ServiceError::NoGenerator(self.exercise.code.clone()))?;
        Ok(self.exercise.start(generator(difficulty, seed)?))
    }

    /// Classifies `new` as a successor of the current expression of `s`.
    pub fn diagnose(&self, s: &State<T>, new: &T) -> Result<Diagnosis, ServiceError> {
        let ex = self.exercise;
        let current = s.term();
        if !(ex.equivalence)(current, new) {
            return Ok(
                match find_rewrite(&ex.buggy_rules, current, |e| (ex.equivalence)(e, new)) {
                    Some(b) => Diagnosis::Buggy(b),
                    None => Diagnosis::NotEq,
                },
            );
        }
        if (ex.similarity)(current, new) {
            return Ok(Diagnosis::Similar);
        }
        if let Some(b) = self
            .allfirsts(s)?
            .into_iter()
            .find(|b| (ex.similarity)(b.state.term(), new))
        {
            return Ok(Diagnosis::Expected(b.rule));
        }
        let mut rules: Vec<RewriteRule<T>> = ex
            .rules()
            .into_iter()
            .filter(|r| !r.is_minor())
            .cloned()
            .collect();
        rules.sort_by_key(|r| ex.rank(r.id()));
        // Any witness will do; prefer a rule that produces exactly `new`.
        let detour = find_rewrite(&rules, current, |e| (ex.similarity)(e, new))
            .or_else(|| find_rewrite(&rules, current, |e| (ex.equivalence)(e, new)));
        Ok(match detour {
            Some(r) => Diagnosis::Detour(r),
            None => Diagnosis::Correct,
        })
    }
}

/// The first rule, in the given order, that rewrites some subterm of `term`
/// into an expression accepted by `accept`.
fn find_rewrite<T: Term>(
    rules: &[RewriteRule<T>],
    term: &T,
    accept: impl Fn(&T) -> bool,
) -> Option<RuleId> {
    let positions = nav::positions(term);
    rules.iter().find_map(|r| {
        positions.iter().find_map(|p| {
            let z = Zipper::at_path(term.clone(), p).expect("positions are valid");
            r.apply(&Environment::new(), &z)
                .into_iter()
                .any(|(_, z)| accept(z.unfocus()))
                .then(|| r.id().clone())
        })
    })
}

#[cfg(test)]
mod tests;
