//! Properties of the power-expression domain.

use proptest::prelude::*;
use proptest::strategy::Strategy as Gen;

use strategem::exercise::{power_exercise, Difficulty};
use strategem::nav::{positions, Zipper};
use strategem::powers::{
    eq_power, generate_power, mul, norm_power, parse, pow, print, ready_power, recip, rules,
    sim_power, suitable_power, var, Expr,
};

fn arb_expr() -> impl Gen<Value = Expr> {
    let leaf = prop_oneof![Just("a"), Just("b"), Just("x1")].prop_map(var);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| mul(l, r)),
            (inner.clone(), -6i64..7).prop_map(|(b, n)| pow(b, n)),
            inner.prop_map(recip),
        ]
    })
}

proptest! {
    #[test]
    fn printing_round_trips(e in arb_expr()) {
        prop_assert_eq!(parse(&print(&e)).unwrap(), e);
    }

    #[test]
    fn normalisation_is_idempotent(e in arb_expr()) {
        let n = norm_power(&e);
        prop_assert_eq!(norm_power(&n), n.clone());
        prop_assert!(eq_power(&e, &n));
    }

    #[test]
    fn sound_rules_preserve_equivalence(e in arb_expr()) {
        let sound = [rules::add_exp, rules::mul_exp, rules::dist_exp, rules::reci_exp];
        for path in positions(&e) {
            let z = Zipper::at_path(e.clone(), &path).unwrap();
            for f in sound {
                if let Some(out) = f(z.focus()) {
                    let after = z.replace(out).unfocus().clone();
                    prop_assert!(eq_power(&e, &after), "{} -> {}", print(&e), print(&after));
                }
            }
        }
    }

    #[test]
    fn similarity_implies_equivalence(a in arb_expr(), b in arb_expr()) {
        if sim_power(&a, &b) {
            prop_assert!(eq_power(&a, &b));
        }
        prop_assert_eq!(eq_power(&a, &b), eq_power(&b, &a));
    }

    #[test]
    fn generated_expressions_are_exercises(seed in any::<u64>(), d in 0usize..3) {
        let d = Difficulty::ALL[d];
        let e = generate_power(d, seed).unwrap();
        prop_assert!(suitable_power(&e) && !ready_power(&e));
        prop_assert!(e.size() <= d.max_size());
        prop_assert_eq!(generate_power(d, seed).unwrap(), e);
    }
}

#[test]
fn buggy_rule_is_not_sound() {
    let e = parse("a^3*a^4").unwrap();
    let wrong = rules::bug_add_exp(&e).unwrap();
    assert_eq!(wrong, pow(var("a"), 12));
    assert!(!eq_power(&e, &wrong));
}

#[test]
fn shipped_exercise_uses_these_relations() {
    let ex = power_exercise();
    let (a, b) = (parse("(a^7)^2").unwrap(), parse("a^14").unwrap());
    assert_eq!((ex.equivalence)(&a, &b), eq_power(&a, &b));
    assert_eq!((ex.similarity)(&a, &b), sim_power(&a, &b));
}
