//! The wire format: states survive a round trip, and served sessions are
//! deterministic.

use strategem::engine::Limits;
use strategem::exercise::{default_registry, power_exercise, Difficulty, POWER_EXERCISE};
use strategem::protocol::{decode_state, encode_state, Server, Tracked, WireState};
use strategem::services::Services;

#[test]
fn states_along_derivations_round_trip() {
    let ex = power_exercise();
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let generator = ex.generator.unwrap();
    let mut checked = 0;
    for seed in 0..30 {
        let start = generator(Difficulty::ALL[seed as usize % 3], seed).unwrap();
        let mut t = Tracked::start(ex.start(start));
        loop {
            let wire = encode_state(&ex, &t).unwrap();
            let text = serde_json::to_string(&wire).unwrap();
            let parsed: WireState = serde_json::from_str(&text).unwrap();
            let back = decode_state(&ex, Limits::default(), &parsed).unwrap();
            assert_eq!(back.state, t.state, "{text}");
            checked += 1;
            match sv.allfirsts(&t.state).unwrap().into_iter().next() {
                Some(b) => t = t.advance(&b),
                None => break,
            }
        }
    }
    assert!(checked > 60);
}

#[test]
fn every_candidate_state_is_accepted_back() {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 0, Limits::default());
    let first = server.handle_line(r#"{"service":"allfirsts","state":{"expr":"(a^2*b)^3*(c^2)^4"}}"#);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    let cands = v["ok"].as_array().unwrap();
    assert!(!cands.is_empty());
    for c in cands {
        let req = serde_json::json!({"service": "stepsremaining", "state": c["state"]});
        let out: serde_json::Value = serde_json::from_str(&server.handle_line(&req.to_string())).unwrap();
        assert!(out["ok"].is_u64(), "{out}");
    }
}

#[test]
fn serving_is_deterministic_and_keeps_going_after_errors() {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 7, Limits::default());
    let input = concat!(
        "{\"service\":\"generate\"}\n",
        "not json\n",
        "{\"service\":\"derivation\",\"state\":{\"expr\":\"(a^3*a^4)^2\"}}\n",
    );
    let run = || {
        let mut out = Vec::new();
        server.serve(input.as_bytes(), &mut out).unwrap();
        String::from_utf8(out).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with(r#"{"error":{"code":"parse-error""#));
    assert!(lines[2].contains(r#""steps":[["AddExp","(a^7)^2"],["MulExp","a^14"]]"#));
}

#[test]
fn budget_applies_to_each_request() {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 0, Limits::with_budget(3).unwrap());
    let out = server.handle_line(r#"{"service":"derivation","state":{"expr":"(a^3*a^4)^2"}}"#);
    assert!(out.starts_with(r#"{"error":{"code":"budget-exceeded""#), "{out}");
}
