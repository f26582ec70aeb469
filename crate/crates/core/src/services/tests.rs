use super::*;
use crate::exercise::power_exercise;
use crate::nav::somewhere;
use crate::powers::{parse, Expr};
use crate::strategy::{choice, repeat, rule, seq, seq_all, Strategy};

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn id(s: &str) -> RuleId {
    RuleId::named(s)
}

/// `(somewhere AddExp <*> MulExp) <|> (DistExp <*> repeat MulExp <*> AddExp)`
fn example_strategy() -> Strategy {
    choice(
        seq(somewhere(rule("AddExp")), rule("MulExp")),
        seq_all([rule("DistExp"), repeat(rule("MulExp")), rule("AddExp")]),
    )
}

fn example_state() -> State<Expr> {
    State::start(p("(a^3*a^4)^2"), example_strategy())
}

#[test]
fn allfirsts_on_the_example_state() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let firsts = sv.allfirsts(&example_state()).unwrap();
    assert_eq!(firsts.len(), 2);
    assert_eq!(firsts[0].rule, id("AddExp"));
    assert_eq!(firsts[0].state.term(), &p("(a^7)^2"));
    assert_eq!(firsts[0].state.zipper.path(), vec![0]);
    assert_eq!(firsts[0].state.zipper.focus(), &p("a^7"));
    assert_eq!(firsts[0].state.remaining.to_string(), "Up; MulExp");
    assert_eq!(firsts[1].rule, id("DistExp"));
    assert_eq!(firsts[1].state.term(), &p("(a^3)^2*(a^4)^2"));
    assert_eq!(firsts[1].state.zipper.path(), Vec::<usize>::new());
    assert_eq!(firsts[1].state.remaining, seq(repeat(rule("MulExp")), rule("AddExp")));
}

#[test]
fn onefirst_follows_the_ordering() {
    let mut ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let b = sv.onefirst(&example_state()).unwrap();
    assert_eq!(b.rule, id("AddExp"));
    assert_eq!(b.state.term(), &p("(a^7)^2"));

    ex.ordering.reverse();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    assert_eq!(sv.onefirst(&example_state()).unwrap().rule, id("DistExp"));
}

#[test]
fn no_steps_from_a_finished_state() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let done = State::start(p("(a^3*a^4)^2"), crate::strategy::succeed());
    assert!(sv.allfirsts(&done).unwrap().is_empty());
    assert_eq!(sv.onefirst(&done).unwrap_err(), ServiceError::NoStep);
}

#[test]
fn initial_state_of_the_exercise_has_one_candidate() {
    // bottomUp only lets DistExp fire at the root once nothing below applies.
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let firsts = sv.allfirsts(&ex.start(p("(a^3*a^4)^2"))).unwrap();
    let rules: Vec<_> = firsts.iter().map(|b| b.rule.clone()).collect();
    assert_eq!(rules, vec![id("AddExp")]);
}

#[test]
fn worked_derivation() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let steps = sv.derivation(&ex.start(p("(a^3*a^4)^2"))).unwrap();
    let majors: Vec<_> = steps.iter().map(|b| b.rule.clone()).collect();
    assert_eq!(majors, vec![id("AddExp"), id("MulExp")]);
    assert_eq!(steps[1].state.term(), &p("a^14"));
    let trace: Vec<String> = steps
        .iter()
        .flat_map(|b| b.trace())
        .map(|r| r.to_string())
        .collect();
    assert_eq!(
        trace,
        [
            "Enter(writeAsPowerOf)",
            "Down",
            "AppCheck",
            "AddExp",
            "Up",
            "AppCheck",
            "MulExp",
            "AppCheck",
            "Leave(writeAsPowerOf)"
        ]
    );
}

#[test]
fn derivation_from_a_ready_expression_is_empty() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let s = ex.start(p("a^14"));
    assert!(sv.derivation(&s).unwrap().is_empty());
    assert_eq!(sv.steps_remaining(&s).unwrap(), 0);
}

#[test]
fn broken_exercise_is_stuck() {
    let mut ex = power_exercise();
    ex.strategy = crate::strategy::fail();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    assert!(matches!(
        sv.derivation(&ex.start(p("(a^3*a^4)^2"))),
        Err(ServiceError::Stuck { .. })
    ));
}

#[test]
fn steps_remaining_counts_majors() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let s = ex.start(p("(a^3*a^4)^2"));
    assert_eq!(sv.steps_remaining(&s).unwrap(), 2);
    let mid = sv.onefirst(&s).unwrap().state;
    assert_eq!(sv.steps_remaining(&mid).unwrap(), 1);
}

#[test]
fn ready_examples() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    assert!(sv.ready(&ex.start(p("a^14"))));
    assert!(!sv.ready(&ex.start(p("(a^3*a^4)^2"))));
    assert!(sv.ready(&ex.start(p("v"))));
}

#[test]
fn apply_examples() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let s = ex.start(p("(a^3)^2*(a^4)^2"));
    let out = sv.apply(&id("MulExp"), &[1], &s).unwrap();
    assert_eq!(out.term(), &p("(a^3)^2*a^8"));
    assert_eq!(out.zipper.path(), vec![1]);
    assert_eq!(out.remaining, s.remaining);
    let left = sv.apply(&id("MulExp"), &[0], &s).unwrap();
    assert_eq!(left.term(), &p("a^6*(a^4)^2"));
    assert_eq!(
        sv.apply(&id("AddExp"), &[], &ex.start(p("a^14"))).unwrap_err(),
        ServiceError::RuleNotApplicable {
            rule: id("AddExp"),
            location: vec![]
        }
    );
    assert_eq!(
        sv.apply(&id("MulExp"), &[2], &s).unwrap_err(),
        ServiceError::InvalidLocation(vec![2])
    );
    assert_eq!(
        sv.apply(&id("BugAddExp"), &[], &s).unwrap_err(),
        ServiceError::UnknownRule(id("BugAddExp"))
    );
}

#[test]
fn applicable_examples() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let s = ex.start(p("(a^3*a^4)^2"));
    assert_eq!(sv.applicable(&[], &s).unwrap(), vec![id("DistExp"), id("ReciExp")]);
    assert_eq!(sv.applicable(&[0], &s).unwrap(), vec![id("AddExp")]);
    assert!(sv.applicable(&[], &ex.start(p("v"))).unwrap().is_empty());
    assert!(sv.applicable(&[1], &s).is_err());
}

#[test]
fn generate_is_deterministic() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let a = sv.generate(Difficulty::Easy, 7).unwrap();
    assert_eq!(a, sv.generate(Difficulty::Easy, 7).unwrap());
    assert!((ex.is_suitable)(a.term()) && !(ex.is_ready)(a.term()));
    assert_eq!(a.remaining, ex.strategy);
    let mut none = power_exercise();
    none.generator = None;
    let sv = Services::new(&none, Limits::default()).unwrap();
    assert!(matches!(sv.generate(Difficulty::Easy, 7), Err(ServiceError::NoGenerator(_))));
}

#[test]
fn diagnose_examples() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let d = |cur: &str, new: &str| sv.diagnose(&ex.start(p(cur)), &p(new)).unwrap();
    assert_eq!(d("a^3*a^4", "a^12"), Diagnosis::Buggy(id("BugAddExp")));
    assert_eq!(d("(a^3*a^4)^2", "(a^12)^2"), Diagnosis::Buggy(id("BugAddExp")));
    assert_eq!(d("(a^3*a^4)^2", "(a^7)^2"), Diagnosis::Expected(id("AddExp")));
    assert_eq!(d("(a^3*a^4)^2", "(a^3*a^4)^2"), Diagnosis::Similar);
    assert_eq!(d("a^5", "1/a^-5"), Diagnosis::Detour(id("ReciExp")));
    assert_eq!(d("(a^3*a^4)^2", "b^9"), Diagnosis::NotEq);
    assert_eq!(d("1/a", "a^-1"), Diagnosis::Correct);
}

#[test]
fn budget_is_enforced_per_call() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::with_budget(3).unwrap()).unwrap();
    let err = sv.derivation(&ex.start(p("(a^3*a^4)^2"))).unwrap_err();
    assert_eq!(err.code(), "budget-exceeded");
    assert!(Services::new(&ex, Limits { budget: 0, ..Limits::default() }).is_err());
}
