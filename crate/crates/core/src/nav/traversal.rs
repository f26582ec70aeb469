//! Traversal combinators, defined in terms of the navigation rules.

use crate::rule::builtin;
use crate::strategy::{choice, orelse, rec, rule, seq, var, Strategy};

/// The minor rule moving the focus to any one child.
pub fn downs() -> Strategy {
    rule(builtin::DOWNS)
}

pub fn up() -> Strategy {
    rule(builtin::UP)
}

/// `Down(i)`: move to the child with the given index.
pub fn down_to(index: usize) -> Strategy {
    rule(&format!("{}({index})", builtin::DOWN))
}

/// `Downs <*> s <*> Up`
pub fn once(s: Strategy) -> Strategy {
    seq(downs(), seq(s, up()))
}

/// `mu x . s <|> once x`
pub fn somewhere(s: Strategy) -> Strategy {
    let x = crate::strategy::fresh_var(&[&s]);
    rec(&x, choice(s, once(var(&x))))
}

/// `mu x . once x |> s`
pub fn bottom_up(s: Strategy) -> Strategy {
    let x = crate::strategy::fresh_var(&[&s]);
    rec(&x, orelse(once(var(&x)), s))
}

/// `mu x . s |> once x`
pub fn top_down(s: Strategy) -> Strategy {
    let x = crate::strategy::fresh_var(&[&s]);
    rec(&x, orelse(s, once(var(&x))))
}
