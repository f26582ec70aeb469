//! Rewrite rules of the power domain. Exponent arithmetic is evaluated as
//! part of each rule.

use super::expr::{mul, recip, Expr};
use crate::rule::RewriteRule;
use crate::strategy::RuleId;

pub const ADD_EXP: &str = "AddExp";
pub const MUL_EXP: &str = "MulExp";
pub const DIST_EXP: &str = "DistExp";
pub const RECI_EXP: &str = "ReciExp";
pub const BUG_ADD_EXP: &str = "BugAddExp";

/// `a^x * a^y = a^(x+y)`
pub fn add_exp(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Mul(l, r) => match (&**l, &**r) {
            (Expr::Power(a, x), Expr::Power(b, y)) if a == b => Some(Expr::Power(a.clone(), x + y)),
            _ => None,
        },
        _ => None,
    }
}

/// `(a^x)^y = a^(x*y)`
pub fn mul_exp(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Power(b, y) => match &**b {
            Expr::Power(a, x) => Some(Expr::Power(a.clone(), x * y)),
            _ => None,
        },
        _ => None,
    }
}

/// `(a*b)^x = a^x * b^x`
pub fn dist_exp(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Power(b, x) => match &**b {
            Expr::Mul(l, r) => Some(mul(
                Expr::Power(l.clone(), x.clone()),
                Expr::Power(r.clone(), x.clone()),
            )),
            _ => None,
        },
        _ => None,
    }
}

/// `a^x = 1/a^-x`
pub fn reci_exp(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Power(a, x) => Some(recip(Expr::Power(a.clone(), -x))),
        _ => None,
    }
}

/// The misconception `a^x * a^y = a^(x*y)`.
pub fn bug_add_exp(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Mul(l, r) => match (&**l, &**r) {
            (Expr::Power(a, x), Expr::Power(b, y)) if a == b => Some(Expr::Power(a.clone(), x * y)),
            _ => None,
        },
        _ => None,
    }
}

fn lifted(name: &str, f: fn(&Expr) -> Option<Expr>) -> RewriteRule<Expr> {
    RewriteRule::lift(RuleId::named(name), f)
}

pub fn rule_add_exp() -> RewriteRule<Expr> {
    lifted(ADD_EXP, add_exp)
}

pub fn rule_mul_exp() -> RewriteRule<Expr> {
    lifted(MUL_EXP, mul_exp)
}

pub fn rule_dist_exp() -> RewriteRule<Expr> {
    lifted(DIST_EXP, dist_exp)
}

pub fn rule_reci_exp() -> RewriteRule<Expr> {
    lifted(RECI_EXP, reci_exp)
}

pub fn rule_bug_add_exp() -> RewriteRule<Expr> {
    lifted(BUG_ADD_EXP, bug_add_exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::expr::{pow, var};
    use crate::powers::text::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn add_exp_needs_equal_bases() {
        assert_eq!(add_exp(&p("a^3*a^4")), Some(p("a^7")));
        assert_eq!(add_exp(&p("a^3*b^4")), None);
        assert_eq!(add_exp(&p("a*a")), None);
    }

    #[test]
    fn mul_and_dist() {
        assert_eq!(mul_exp(&p("(a^7)^2")), Some(p("a^14")));
        assert_eq!(mul_exp(&p("(a*b)^2")), None);
        assert_eq!(dist_exp(&p("(a^3*a^4)^2")), Some(p("(a^3)^2*(a^4)^2")));
        assert_eq!(dist_exp(&p("a^2")), None);
    }

    #[test]
    fn reciprocal_rule_flips_the_sign() {
        assert_eq!(reci_exp(&p("a^3")), Some(p("1/a^-3")));
        assert_eq!(reci_exp(&p("a^-2")), Some(p("1/a^2")));
        assert_eq!(reci_exp(&p("a*b")), None);
    }

    #[test]
    fn buggy_rule_multiplies() {
        assert_eq!(bug_add_exp(&p("a^3*a^4")), Some(p("a^12")));
        assert_eq!(bug_add_exp(&p("a^3*b^4")), None);
        assert_eq!(bug_add_exp(&p("a^1*a^1")), Some(pow(var("a"), 1)));
    }

    #[test]
    fn lifted_rules_act_on_the_focus() {
        let rule = rule_add_exp();
        assert_eq!(rule.apply_term(&p("a^3*a^4")), vec![p("a^7")]);
        assert!(!rule.is_minor());
        assert_eq!(rule.id().as_str(), "AddExp");
    }
}
