use std::fmt;

use thiserror::Error;

use crate::strategy::{RuleId, VarId};

/// A syntax error in strategy or expression text. `offset` is a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// Failures of the strategy semantics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("step budget of {budget} transitions exceeded after {}", TraceDisplay(.trace))]
    BudgetExceeded { budget: usize, trace: Vec<RuleId> },
    #[error("step budget must be positive")]
    ZeroBudget,
    #[error("left recursion: `{0}` is reached again before any rule is consumed")]
    LeftRecursion(String),
    #[error("applicability check depends on itself: `{0}`")]
    CyclicCheck(String),
    #[error("unknown rule {0}")]
    UnknownRule(RuleId),
    #[error("remaining strategy nested {depth} deep, beyond the limit of {limit}; a recursion keeps growing it")]
    TooDeep { depth: usize, limit: usize },
    #[error("unbound strategy variable {0}")]
    UnboundVariable(VarId),
}

struct TraceDisplay<'a>(&'a [RuleId]);

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("no recorded steps");
        }
        f.write_str("[")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}
