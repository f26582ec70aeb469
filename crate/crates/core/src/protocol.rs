//! JSON-lines protocol exposing the services.
//!
//! Every request is one JSON object on one line; every response is one line,
//! either `{"ok": result}` or `{"error": {"code": ..., "message": ...}}`.
//! The server is stateless: states travel in full with every request.
//!
//! A state on the wire:
//!
//! ```json
//! {"env": {"bindings": {}, "labels": []},
//!  "expr": "(a^7)^2", "path": [0],
//!  "strategy": {"replay": {"start": "(a^3*a^4)^2", "trace": [["AddExp", "(a^7)^2"]]}}}
//! ```
//!
//! The remaining strategy is either re-derived by replaying major steps of
//! the exercise strategy from `start` (each entry names the rule and the
//! resulting expression), or given inline in strategy syntax as
//! `{"inline": "..."}`. Only `expr` is required; a missing strategy means the
//! exercise strategy from `expr` itself.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::{BigStep, Limits, State};
use crate::exercise::{Difficulty, Exercise, Registry};
use crate::lint::{self, LeftRecursionMode};
use crate::nav::{Term, Zipper};
use crate::rule::Environment;
use crate::services::{ServiceError, Services};
use crate::strategy::{syntax, LabelId, RuleId, Strategy};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub service: String,
    #[serde(default)]
    pub exercise: Option<String>,
    #[serde(default)]
    pub state: Option<WireState>,
    #[serde(default)]
    pub rule: Option<String>,
    #[serde(default)]
    pub location: Option<Vec<usize>>,
    #[serde(default)]
    pub expression: Option<String>,
    #[serde(default)]
    pub difficulty: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub strategy: Option<String>,
    #[serde(default)]
    pub mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireEnv {
    #[serde(default)]
    pub bindings: BTreeMap<String, String>,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Replay {
    pub start: String,
    #[serde(default)]
    pub trace: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum WireStrategy {
    Replay(Replay),
    Inline(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireState {
    #[serde(default)]
    pub env: WireEnv,
    pub expr: String,
    #[serde(default)]
    pub path: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<WireStrategy>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ProtocolError {
    pub code: &'static str,
    pub message: String,
}

impl ProtocolError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        ProtocolError {
            code,
            message: message.into(),
        }
    }

    fn missing(field: &str) -> Self {
        Self::new("invalid-request", format!("missing field `{field}`"))
    }
}

impl From<ServiceError> for ProtocolError {
    fn from(e: ServiceError) -> Self {
        ProtocolError::new(e.code(), e.to_string())
    }
}

/// How the remaining strategy of a decoded state is to be encoded again.
#[derive(Debug, Clone)]
enum Origin<T> {
    Replay { start: T, trace: Vec<(RuleId, T)> },
    Inline,
}

/// A decoded state together with what is needed to encode it again.
#[derive(Debug, Clone)]
pub struct Tracked<T: Term> {
    pub state: State<T>,
    origin: Origin<T>,
}

pub const SERVICES: [&str; 10] = [
    "allfirsts",
    "onefirst",
    "derivation",
    "ready",
    "stepsremaining",
    "apply",
    "applicable",
    "generate",
    "diagnose",
    "lint",
];

pub struct Server<'a, T: Term> {
    registry: &'a Registry<T>,
    default_exercise: String,
    default_seed: u64,
    limits: Limits,
}

impl<'a, T: Term> Server<'a, T> {
    pub fn new(registry: &'a Registry<T>, default_exercise: &str, default_seed: u64, limits: Limits) -> Self {
        Server {
            registry,
            default_exercise: default_exercise.to_string(),
            default_seed,
            limits,
        }
    }

    /// Answers requests line by line until end of input. Blank lines are
    /// skipped.
    pub fn serve(&self, input: impl BufRead, mut output: impl Write) -> io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            writeln!(output, "{}", self.handle_line(&line))?;
            output.flush()?;
        }
        Ok(())
    }

    /// The response line for one request line.
    pub fn handle_line(&self, line: &str) -> String {
        let response = match serde_json::from_str::<Request>(line) {
            Ok(req) => match self.handle(&req) {
                Ok(v) => json!({ "ok": v }),
                Err(e) => error_value(&e),
            },
            Err(e) => error_value(&ProtocolError::new("parse-error", e.to_string())),
        };
        response.to_string()
    }

    pub fn handle(&self, req: &Request) -> Result<Value, ProtocolError> {
        if !SERVICES.contains(&req.service.as_str()) {
            return Err(ProtocolError::new(
                "unknown-service",
                format!("unknown service {:?}", req.service),
            ));
        }
        let code = req.exercise.as_deref().unwrap_or(&self.default_exercise);
        let ex = self
            .registry
            .lookup(code)
            .map_err(|e| ProtocolError::new("unknown-code", e.to_string()))?;
        let sv = Services::new(ex, self.limits)?;
        let codec = Codec { ex, sv: &sv };
        let state = || -> Result<Tracked<T>, ProtocolError> {
            codec.decode(req.state.as_ref().ok_or_else(|| ProtocolError::missing("state"))?)
        };
        let location = || req.location.clone().ok_or_else(|| ProtocolError::missing("location"));

        match req.service.as_str() {
            "allfirsts" => {
                let t = state()?;
                let steps = sv.allfirsts(&t.state)?;
                Ok(Value::Array(steps.iter().map(|b| codec.candidate(&t, b)).collect()))
            }
            "onefirst" => {
                let t = state()?;
                Ok(codec.candidate(&t, &sv.onefirst(&t.state)?))
            }
            "derivation" => {
                let t = state()?;
                let steps = sv.derivation(&t.state)?;
                let mut last = t.clone();
                let mut out = Vec::new();
                for b in &steps {
                    out.push(json!([b.rule.as_str(), (ex.print)(b.state.term())]));
                    last = last.advance(b);
                }
                Ok(json!({ "steps": out, "state": codec.encode(&last) }))
            }
            "ready" => Ok(json!(sv.ready(&state()?.state))),
            "stepsremaining" => Ok(json!(sv.steps_remaining(&state()?.state)?)),
            "apply" => {
                let t = state()?;
                let rule = req.rule.as_deref().ok_or_else(|| ProtocolError::missing("rule"))?;
                let rule = parse_rule(rule)?;
                let next = sv.apply(&rule, &location()?, &t.state)?;
                Ok(codec.encode(&Tracked {
                    state: next,
                    origin: t.origin,
                }))
            }
            "applicable" => {
                let t = state()?;
                let rules = sv.applicable(&location()?, &t.state)?;
                Ok(json!(rules.iter().map(RuleId::as_str).collect::<Vec<_>>()))
            }
            "generate" => {
                let difficulty = match &req.difficulty {
                    Some(d) => d
                        .parse::<Difficulty>()
                        .map_err(|e| ProtocolError::new("invalid-request", e.to_string()))?,
                    None => Difficulty::default(),
                };
                let s = sv.generate(difficulty, req.seed.unwrap_or(self.default_seed))?;
                Ok(codec.encode(&Tracked::start(s)))
            }
            "diagnose" => {
                let t = state()?;
                let text = req
                    .expression
                    .as_deref()
                    .ok_or_else(|| ProtocolError::missing("expression"))?;
                let new = (ex.parse)(text)
                    .map_err(|e| ProtocolError::new("parse-error", format!("expression: {e}")))?;
                let d = sv.diagnose(&t.state, &new)?;
                Ok(match d.rule() {
                    Some(r) => json!({ "diagnosis": d.name(), "rule": r.as_str() }),
                    None => json!({ "diagnosis": d.name() }),
                })
            }
            "lint" => {
                let strategy = match &req.strategy {
                    Some(text) => syntax::parse(text)
                        .map_err(|e| ProtocolError::new("parse-error", format!("strategy: {e}")))?,
                    None => ex.strategy.clone(),
                };
                let mode = match &req.mode {
                    Some(m) => m
                        .parse::<LeftRecursionMode>()
                        .map_err(|e| ProtocolError::new("invalid-request", e.to_string()))?,
                    None => LeftRecursionMode::default(),
                };
                let book = ex.rule_book();
                let report = lint::lint(&strategy, &|id| book.kind(id), mode);
                Ok(json!({
                    "clean": report.is_clean(),
                    "findings": serde_json::to_value(&report.findings).expect("findings serialize"),
                }))
            }
            _ => unreachable!("service names are checked above"),
        }
    }
}

fn error_value(e: &ProtocolError) -> Value {
    json!({ "error": { "code": e.code, "message": e.message } })
}

fn parse_rule(text: &str) -> Result<RuleId, ProtocolError> {
    RuleId::new(text).map_err(|e| ProtocolError::new("invalid-request", e.to_string()))
}

impl<T: Term> Tracked<T> {
    /// A state at the start of the exercise strategy.
    pub fn start(state: State<T>) -> Self {
        Tracked {
            origin: Origin::Replay {
                start: state.term().clone(),
                trace: Vec::new(),
            },
            state,
        }
    }

    /// The state after big step `b`, taken from this state.
    pub fn advance(&self, b: &BigStep<T>) -> Self {
        let origin = match &self.origin {
            Origin::Replay { start, trace } => {
                let mut trace = trace.clone();
                trace.push((b.rule.clone(), b.state.term().clone()));
                Origin::Replay {
                    start: start.clone(),
                    trace,
                }
            }
            Origin::Inline => Origin::Inline,
        };
        Tracked {
            state: b.state.clone(),
            origin,
        }
    }
}

struct Codec<'s, 'a, T: Term> {
    ex: &'a Exercise<T>,
    sv: &'s Services<'a, T>,
}

impl<T: Term> Codec<'_, '_, T> {
    fn parse_expr(&self, what: &str, text: &str) -> Result<T, ProtocolError> {
        (self.ex.parse)(text).map_err(|e| ProtocolError::new("parse-error", format!("{what}: {e}")))
    }

    fn decode(&self, w: &WireState) -> Result<Tracked<T>, ProtocolError> {
        let term = self.parse_expr("expr", &w.expr)?;
        let zipper = Zipper::at_path(term.clone(), &w.path)
            .map_err(|_| ServiceError::InvalidLocation(w.path.clone()))?;
        let labels = w
            .env
            .labels
            .iter()
            .map(|l| LabelId::new(l).map_err(|e| ProtocolError::new("invalid-state", e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let env = Environment::with_parts(w.env.bindings.clone(), labels);
        let (remaining, origin) = match &w.strategy {
            None => (
                self.ex.strategy.clone(),
                Origin::Replay {
                    start: term,
                    trace: Vec::new(),
                },
            ),
            Some(WireStrategy::Inline(text)) => {
                let s = syntax::parse(text)
                    .map_err(|e| ProtocolError::new("parse-error", format!("strategy: {e}")))?;
                (s, Origin::Inline)
            }
            Some(WireStrategy::Replay(r)) => self.replay(r)?,
        };
        Ok(Tracked {
            state: State::new(env, zipper, remaining),
            origin,
        })
    }

    /// Re-derives the remaining strategy by following the recorded major
    /// steps; among equal candidates the canonically first is taken.
    fn replay(&self, r: &Replay) -> Result<(Strategy, Origin<T>), ProtocolError> {
        let start = self.parse_expr("replay start", &r.start)?;
        let engine = self.sv.engine();
        let mut current = self.ex.start(start.clone());
        let mut trace = Vec::new();
        for (i, (rule, expr)) in r.trace.iter().enumerate() {
            let rule = parse_rule(rule)?;
            let expr = self.parse_expr("replay trace", expr)?;
            let next = self
                .sv
                .allfirsts_in(&engine, &current)?
                .into_iter()
                .find(|b| b.rule == rule && b.state.term() == &expr)
                .ok_or_else(|| {
                    ProtocolError::new(
                        "invalid-state",
                        format!("replay step {i} ({rule}) is not a step of the strategy"),
                    )
                })?;
            trace.push((rule, expr));
            current = next.state;
        }
        Ok((current.remaining, Origin::Replay { start, trace }))
    }

    fn encode(&self, t: &Tracked<T>) -> Value {
        let print = self.ex.print;
        let strategy = match &t.origin {
            Origin::Replay { start, trace } => WireStrategy::Replay(Replay {
                start: print(start),
                trace: trace
                    .iter()
                    .map(|(r, e)| (r.to_string(), print(e)))
                    .collect(),
            }),
            Origin::Inline => WireStrategy::Inline(t.state.remaining.to_string()),
        };
        let w = WireState {
            env: WireEnv {
                bindings: t.state.env.bindings().clone(),
                labels: t.state.env.labels().iter().map(|l| l.to_string()).collect(),
            },
            expr: print(t.state.term()),
            path: t.state.zipper.path(),
            strategy: Some(strategy),
        };
        serde_json::to_value(w).expect("wire states serialize")
    }

    fn candidate(&self, from: &Tracked<T>, b: &BigStep<T>) -> Value {
        json!({
            "rule": b.rule.as_str(),
            "location": b.location,
            "expr": (self.ex.print)(b.state.term()),
            "state": self.encode(&from.advance(b)),
        })
    }
}

/// Decodes a wire state against an exercise, as the server does.
pub fn decode_state<T: Term>(
    ex: &Exercise<T>,
    limits: Limits,
    w: &WireState,
) -> Result<Tracked<T>, ProtocolError> {
    let sv = Services::new(ex, limits)?;
    Codec { ex, sv: &sv }.decode(w)
}

/// Encodes a state as the server does.
pub fn encode_state<T: Term>(ex: &Exercise<T>, t: &Tracked<T>) -> Result<WireState, ProtocolError> {
    let sv = Services::new(ex, Limits::default())?;
    let v = Codec { ex, sv: &sv }.encode(t);
    Ok(serde_json::from_value(v).expect("encoded states decode"))
}

#[cfg(test)]
mod tests;
