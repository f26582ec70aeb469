//! Navigation and label bookkeeping rules. All of them are minor.

use crate::nav::{Term, Zipper};
use crate::strategy::{LabelId, RuleId};

use super::Environment;

pub const UP: &str = "Up";
pub const DOWN: &str = "Down";
pub const DOWNS: &str = "Downs";
pub const LEFT: &str = "Left";
pub const RIGHT: &str = "Right";
pub const ENTER: &str = "Enter";
pub const LEAVE: &str = "Leave";

/// Environment key read by the argument-less `Down` rule to pick a child.
/// When it is absent the first child is taken.
pub const DOWN_SELECTOR_KEY: &str = "down";

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Builtin {
    Up,
    /// Every child, one successor each.
    Downs,
    /// The child with a fixed index.
    DownTo(usize),
    /// The child named by the environment.
    DownSelected,
    Left,
    Right,
    Enter(LabelId),
    Leave(LabelId),
}

impl Builtin {
    pub(crate) fn parse(id: &RuleId) -> Option<Builtin> {
        let name = id.as_str();
        let (head, arg) = match name.find('(') {
            Some(open) => (&name[..open], Some(&name[open + 1..name.len() - 1])),
            None => (name, None),
        };
        match (head, arg) {
            (UP, None) => Some(Builtin::Up),
            (DOWNS, None) => Some(Builtin::Downs),
            (DOWN, None) => Some(Builtin::DownSelected),
            (DOWN, Some(i)) => i.parse().ok().map(Builtin::DownTo),
            (LEFT, None) => Some(Builtin::Left),
            (RIGHT, None) => Some(Builtin::Right),
            (ENTER, Some(l)) => LabelId::new(l).ok().map(Builtin::Enter),
            (LEAVE, Some(l)) => LabelId::new(l).ok().map(Builtin::Leave),
            _ => None,
        }
    }

    pub(crate) fn is_descent(&self) -> bool {
        matches!(self, Builtin::Downs | Builtin::DownTo(_))
    }

    pub(crate) fn apply<T: Term>(
        &self,
        env: &Environment,
        z: &Zipper<T>,
    ) -> Vec<(Environment, Zipper<T>)> {
        let moved = |r: Result<Zipper<T>, _>| r.ok().map(|z| (env.clone(), z)).into_iter().collect();
        match self {
            Builtin::Up => moved(z.up()),
            Builtin::Downs => z.downs().into_iter().map(|c| (env.clone(), c)).collect(),
            Builtin::DownTo(i) => moved(z.down(*i)),
            Builtin::DownSelected => {
                let index = match env.get(DOWN_SELECTOR_KEY) {
                    Some(v) => match v.parse() {
                        Ok(i) => i,
                        Err(_) => return Vec::new(),
                    },
                    None => 0,
                };
                moved(z.down(index))
            }
            Builtin::Left => moved(z.left()),
            Builtin::Right => moved(z.right()),
            Builtin::Enter(l) => {
                let mut env = env.clone();
                env.push_label(l.clone());
                vec![(env, z.clone())]
            }
            Builtin::Leave(l) => {
                let mut env = env.clone();
                if env.pop_label(l) {
                    vec![(env, z.clone())]
                } else {
                    Vec::new()
                }
            }
        }
    }
}
