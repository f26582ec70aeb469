use serde_json::{json, Value};

use super::*;
use crate::exercise::{default_registry, POWER_EXERCISE};

fn call(line: &str) -> Value {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 0, Limits::default());
    serde_json::from_str(&server.handle_line(line)).unwrap()
}

fn req(v: Value) -> Value {
    call(&v.to_string())
}

fn error_code(v: &Value) -> &str {
    v["error"]["code"].as_str().unwrap_or_else(|| panic!("not an error: {v}"))
}

#[test]
fn allfirsts_then_onefirst_through_the_wire() {
    let r = req(json!({"service": "allfirsts", "state": {"expr": "(a^3*a^4)^2"}}));
    let cands = r["ok"].as_array().unwrap();
    assert_eq!(cands.len(), 1);
    assert_eq!(cands[0]["rule"], "AddExp");
    assert_eq!(cands[0]["expr"], "(a^7)^2");
    assert_eq!(cands[0]["location"], json!([0]));
    let state = cands[0]["state"].clone();
    assert_eq!(
        state["strategy"],
        json!({"replay": {"start": "(a^3*a^4)^2", "trace": [["AddExp", "(a^7)^2"]]}})
    );

    let r = req(json!({"service": "onefirst", "state": state}));
    assert_eq!(r["ok"]["rule"], "MulExp");
    assert_eq!(r["ok"]["expr"], "a^14");
    let end = r["ok"]["state"].clone();
    assert_eq!(req(json!({"service": "ready", "state": end})), json!({"ok": true}));
    let r = req(json!({"service": "onefirst", "state": end}));
    assert_eq!(error_code(&r), "no-step-available");
}

#[test]
fn derivation_and_steps_remaining() {
    let r = req(json!({"service": "derivation", "state": {"expr": "(a^3*a^4)^2"}}));
    assert_eq!(r["ok"]["steps"], json!([["AddExp", "(a^7)^2"], ["MulExp", "a^14"]]));
    assert_eq!(r["ok"]["state"]["expr"], "a^14");
    let r = req(json!({"service": "stepsremaining", "state": {"expr": "(a^3*a^4)^2"}}));
    assert_eq!(r, json!({"ok": 2}));
}

#[test]
fn inline_strategies_round_trip() {
    let state = json!({"expr": "(a^7)^2", "strategy": {"inline": "MulExp"}});
    let r = req(json!({"service": "allfirsts", "state": state}));
    let c = &r["ok"][0];
    assert_eq!(c["rule"], "MulExp");
    assert_eq!(c["state"]["strategy"], json!({"inline": "succeed"}));
}

#[test]
fn apply_and_applicable() {
    let state = json!({"expr": "a^5"});
    let r = req(json!({"service": "applicable", "state": state, "location": []}));
    assert_eq!(r, json!({"ok": ["ReciExp"]}));
    let r = req(json!({"service": "apply", "state": state, "rule": "ReciExp", "location": []}));
    assert_eq!(r["ok"]["expr"], "1/a^-5");
    let r = req(json!({"service": "apply", "state": state, "rule": "AddExp", "location": []}));
    assert_eq!(error_code(&r), "rule-not-applicable");
    let r = req(json!({"service": "apply", "state": state, "rule": "ReciExp", "location": [3]}));
    assert_eq!(error_code(&r), "invalid-location");
    let r = req(json!({"service": "applicable", "state": state}));
    assert_eq!(error_code(&r), "invalid-request");
}

#[test]
fn diagnose_over_the_wire() {
    let state = json!({"expr": "(a^3*a^4)^2"});
    let r = req(json!({"service": "diagnose", "state": state, "expression": "(a^7)^2"}));
    assert_eq!(r, json!({"ok": {"diagnosis": "Expected", "rule": "AddExp"}}));
    let r = req(json!({"service": "diagnose", "state": state, "expression": "b"}));
    assert_eq!(r, json!({"ok": {"diagnosis": "NotEq"}}));
}

#[test]
fn generate_is_deterministic() {
    let line = json!({"service": "generate", "difficulty": "easy", "seed": 7}).to_string();
    let a = call(&line);
    assert_eq!(a, call(&line));
    let expr = a["ok"]["expr"].as_str().unwrap();
    assert_eq!(a["ok"]["strategy"]["replay"]["start"], expr);
    let r = req(json!({"service": "generate", "difficulty": "extreme"}));
    assert_eq!(error_code(&r), "invalid-request");
}

#[test]
fn lint_over_the_wire() {
    let r = req(json!({"service": "lint"}));
    assert_eq!(r["ok"]["clean"], true);
    let r = req(json!({"service": "lint", "strategy": "mu x . x; AddExp"}));
    assert_eq!(r["ok"]["clean"], false);
    assert_eq!(r["ok"]["findings"][0]["kind"], "left-recursion");
    let r = req(json!({"service": "lint", "strategy": "AddExp;"}));
    assert_eq!(error_code(&r), "parse-error");
}

#[test]
fn malformed_requests() {
    assert_eq!(error_code(&call("{")), "parse-error");
    assert_eq!(error_code(&call(r#"{"service":"ready","bogus":1}"#)), "parse-error");
    assert_eq!(error_code(&req(json!({"service": "frobnicate"}))), "unknown-service");
    assert_eq!(
        error_code(&req(json!({"service": "ready", "exercise": "nope", "state": {"expr": "a"}}))),
        "unknown-code"
    );
    assert_eq!(error_code(&req(json!({"service": "ready"}))), "invalid-request");
    assert_eq!(
        error_code(&req(json!({"service": "ready", "state": {"expr": "a^"}}))),
        "parse-error"
    );
    let bad_replay = json!({"expr": "a^14", "strategy": {"replay": {"start": "(a^7)^2", "trace": [["AddExp", "a^14"]]}}});
    assert_eq!(
        error_code(&req(json!({"service": "onefirst", "state": bad_replay}))),
        "invalid-state"
    );
}

#[test]
fn responses_are_single_lines_with_stable_key_order() {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 0, Limits::default());
    let line = r#"{"service":"onefirst","state":{"expr":"(a^3*a^4)^2"}}"#;
    let out = server.handle_line(line);
    assert!(!out.contains('\n'));
    assert_eq!(out, server.handle_line(line));
    assert!(out.starts_with(r#"{"ok":{"expr":"(a^7)^2","location":[0],"rule":"AddExp","state":{"env":"#));
}

#[test]
fn serve_skips_blank_lines() {
    let reg = default_registry();
    let server = Server::new(&reg, POWER_EXERCISE, 0, Limits::default());
    let input = "\n{\"service\":\"ready\",\"state\":{\"expr\":\"a^3\"}}\n\n";
    let mut out = Vec::new();
    server.serve(input.as_bytes(), &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "{\"ok\":true}\n");
}

#[test]
fn encoded_states_decode_to_the_same_state() {
    let ex = crate::exercise::power_exercise();
    let s0 = Tracked::start(ex.start(crate::powers::parse("(a^3*a^4)^2").unwrap()));
    let sv = Services::new(&ex, Limits::default()).unwrap();
    let b = sv.onefirst(&s0.state).unwrap();
    let s1 = s0.advance(&b);
    let wire = encode_state(&ex, &s1).unwrap();
    let back = decode_state(&ex, Limits::default(), &wire).unwrap();
    assert_eq!(back.state, s1.state);
    assert_eq!(encode_state(&ex, &back).unwrap(), wire);
}
