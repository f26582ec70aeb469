//! Normal forms of power expressions.
//!
//! [`norm_power`] rewrites innermost-first with the three strategy rules
//! `(a^x)^y = a^(x*y)`, `a^x*a^y = a^(x+y)` and `(a*b)^x = a^x*b^x`,
//! re-normalising whatever a rewrite produces. Reciprocals are eliminated:
//! `1/e` normalises to `e` with every exponent negated, and `1/v` to `v^-1`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::expr::{mul, pow, Expr};

pub fn norm_power(e: &Expr) -> Expr {
    match e {
        Expr::Var(_) => e.clone(),
        Expr::Mul(l, r) => smart_mul(norm_power(l), norm_power(r)),
        Expr::Power(b, n) => smart_pow(norm_power(b), n),
        Expr::Recip(a) => smart_recip(norm_power(a)),
    }
}

/// One top-level simplification of a product or power, if any case matches.
pub fn simplify_power(e: &Expr) -> Expr {
    match e {
        Expr::Power(b, y) => match &**b {
            Expr::Power(a, x) => Expr::Power(a.clone(), x * y),
            Expr::Mul(a, c) => mul(
                Expr::Power(a.clone(), y.clone()),
                Expr::Power(c.clone(), y.clone()),
            ),
            _ => e.clone(),
        },
        Expr::Mul(l, r) => match (&**l, &**r) {
            (Expr::Power(a, x), Expr::Power(b, y)) if a == b => Expr::Power(a.clone(), x + y),
            _ => e.clone(),
        },
        _ => e.clone(),
    }
}

// Arguments are in normal form; so is the result.
fn smart_pow(base: Expr, n: &BigInt) -> Expr {
    match base {
        Expr::Power(a, x) => smart_pow((*a).clone(), &(x * n)),
        Expr::Mul(l, r) => smart_mul(smart_pow((*l).clone(), n), smart_pow((*r).clone(), n)),
        other => pow(other, n.clone()),
    }
}

fn smart_mul(l: Expr, r: Expr) -> Expr {
    match (&l, &r) {
        (Expr::Power(a, x), Expr::Power(b, y)) if a == b => smart_pow((**a).clone(), &(x + y)),
        _ => Expr::Mul(Arc::new(l), Arc::new(r)),
    }
}

fn smart_recip(e: Expr) -> Expr {
    match e {
        Expr::Var(_) => pow(e, -1),
        Expr::Power(a, x) => smart_pow((*a).clone(), &-x),
        Expr::Mul(l, r) => smart_mul(smart_recip((*l).clone()), smart_recip((*r).clone())),
        // Normal forms contain no reciprocals.
        Expr::Recip(a) => (*a).clone(),
    }
}
