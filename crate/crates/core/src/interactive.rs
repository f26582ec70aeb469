//! A line-oriented tutoring session over the services.
//!
//! Commands:
//!
//! ```text
//! show                  current expression and focus
//! hint                  the suggested next step
//! steps                 number of steps left
//! apply RULE [LOC]      apply a rule at a location such as [0,1]
//! submit EXPR           submit the next expression for diagnosis
//! solve                 the worked solution from here
//! new EXPR              start over with an expression
//! generate [DIFFICULTY] start over with a generated expression
//! help
//! quit
//! ```

use crate::engine::{Limits, State};
use crate::exercise::{Difficulty, Exercise};
use crate::nav::Term;
use crate::services::{Diagnosis, ServiceError, Services};
use crate::strategy::RuleId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reply {
    Text(String),
    Quit,
}

pub const HELP: &str = "commands: show | hint | steps | apply RULE [LOC] | submit EXPR | solve | new EXPR | generate [easy|medium|hard] | help | quit";

pub struct Session<'a, T: Term> {
    services: Services<'a, T>,
    state: State<T>,
    seed: u64,
}

impl<'a, T: Term> Session<'a, T> {
    pub fn new(exercise: &'a Exercise<T>, limits: Limits, start: T, seed: u64) -> Result<Self, ServiceError> {
        Ok(Session {
            state: exercise.start(start),
            services: Services::new(exercise, limits)?,
            seed,
        })
    }

    /// Starts from a generated expression.
    pub fn generated(
        exercise: &'a Exercise<T>,
        limits: Limits,
        difficulty: Difficulty,
        seed: u64,
    ) -> Result<Self, ServiceError> {
        let services = Services::new(exercise, limits)?;
        let state = services.generate(difficulty, seed)?;
        Ok(Session {
            services,
            state,
            seed: seed.wrapping_add(1),
        })
    }

    pub fn state(&self) -> &State<T> {
        &self.state
    }

    fn print(&self, t: &T) -> String {
        (self.services.exercise().print)(t)
    }

    fn restart(&mut self, term: T) {
        self.state = self.services.exercise().start(term);
    }

    /// Runs one command line.
    pub fn handle(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let (cmd, arg) = match line.split_once(char::is_whitespace) {
            Some((c, a)) => (c, a.trim()),
            None => (line, ""),
        };
        let text = match cmd {
            "quit" | "exit" => return Reply::Quit,
            "" => String::new(),
            "help" => HELP.to_string(),
            "show" => self.show(),
            "hint" => self.hint(),
            "steps" => match self.services.steps_remaining(&self.state) {
                Ok(n) => n.to_string(),
                Err(e) => error(&e),
            },
            "apply" => self.apply(arg),
            "submit" => self.submit(arg),
            "solve" => self.solve(),
            "new" => match (self.services.exercise().parse)(arg) {
                Ok(t) => {
                    self.restart(t);
                    self.show()
                }
                Err(e) => format!("error: {e}"),
            },
            "generate" => self.generate(arg),
            other => format!("unknown command {other:?}; {HELP}"),
        };
        Reply::Text(text)
    }

    fn show(&self) -> String {
        let path = self.state.zipper.path();
        if path.is_empty() {
            self.print(self.state.term())
        } else {
            format!(
                "{} (focus {:?}: {})",
                self.print(self.state.term()),
                path,
                self.print(self.state.zipper.focus())
            )
        }
    }

    fn hint(&self) -> String {
        match self.services.onefirst(&self.state) {
            Ok(b) => format!("{} at {:?}", b.rule, b.location),
            Err(ServiceError::NoStep) => "no step left; the exercise is done".to_string(),
            Err(e) => error(&e),
        }
    }

    fn apply(&mut self, arg: &str) -> String {
        let (rule, loc) = match arg.split_once(char::is_whitespace) {
            Some((r, l)) => (r, l.trim()),
            None => (arg, ""),
        };
        let rule = match RuleId::new(rule) {
            Ok(r) => r,
            Err(e) => return format!("error: {e}"),
        };
        let location = match parse_location(loc) {
            Some(l) => l,
            None => return format!("error: bad location {loc:?}; write it like [0,1]"),
        };
        match self.services.apply(&rule, &location, &self.state) {
            Ok(next) => {
                // Rules applied by hand are detours: follow the strategy
                // again from the new expression.
                let term = next.term().clone();
                self.restart(term);
                self.show()
            }
            Err(e) => error(&e),
        }
    }

    fn submit(&mut self, arg: &str) -> String {
        let new = match (self.services.exercise().parse)(arg) {
            Ok(t) => t,
            Err(e) => return format!("error: {e}"),
        };
        let d = match self.services.diagnose(&self.state, &new) {
            Ok(d) => d,
            Err(e) => return error(&e),
        };
        match &d {
            Diagnosis::Expected(rule) => {
                let sim = self.services.exercise().similarity;
                let next = self.services.allfirsts(&self.state).ok().and_then(|cands| {
                    cands
                        .into_iter()
                        .find(|b| &b.rule == rule && sim(b.state.term(), &new))
                });
                match next {
                    Some(b) => self.state = b.state,
                    None => self.restart(new),
                }
            }
            Diagnosis::Detour(_) | Diagnosis::Correct => self.restart(new),
            Diagnosis::NotEq | Diagnosis::Buggy(_) | Diagnosis::Similar => {}
        }
        d.to_string()
    }

    fn solve(&self) -> String {
        match self.services.derivation(&self.state) {
            Ok(steps) if steps.is_empty() => "nothing left to do".to_string(),
            Ok(steps) => steps
                .iter()
                .map(|b| format!("{}: {}", b.rule, self.print(b.state.term())))
                .collect::<Vec<_>>()
                .join("\n"),
            Err(e) => error(&e),
        }
    }

    fn generate(&mut self, arg: &str) -> String {
        let difficulty = if arg.is_empty() {
            Difficulty::default()
        } else {
            match arg.parse::<Difficulty>() {
                Ok(d) => d,
                Err(e) => return format!("error: {e}"),
            }
        };
        match self.services.generate(difficulty, self.seed) {
            Ok(s) => {
                self.seed = self.seed.wrapping_add(1);
                self.state = s;
                self.show()
            }
            Err(e) => error(&e),
        }
    }
}

fn error(e: &ServiceError) -> String {
    format!("error ({}): {e}", e.code())
}

/// `[0,1]`, `[]` or nothing at all for the root.
fn parse_location(text: &str) -> Option<Vec<usize>> {
    if text.is_empty() {
        return Some(Vec::new());
    }
    let inner = text.strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}
