#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use strategem::engine::Limits;
use strategem::exercise::{default_registry, Registry, POWER_EXERCISE};
use strategem::powers::Expr;
use strategem::protocol::Server;

fn registry() -> &'static Registry<Expr> {
    static REG: OnceLock<Registry<Expr>> = OnceLock::new();
    REG.get_or_init(default_registry)
}

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    if line.contains('\n') {
        return;
    }
    // A small budget keeps every request cheap; errors are fine, panics
    // and malformed responses are not.
    let server = Server::new(registry(), POWER_EXERCISE, 0, Limits::with_budget(2_000).unwrap());
    let out = server.handle_line(line);
    assert!(!out.contains('\n'));
    let v: serde_json::Value = serde_json::from_str(&out).expect("responses are JSON");
    assert!(v.get("ok").is_some() != v.get("error").is_some());
    assert_eq!(server.handle_line(line), out);
});
