#![no_main]

use libfuzzer_sys::fuzz_target;
use strategem::engine::Limits;
use strategem::exercise::power_exercise;
use strategem::protocol::{decode_state, encode_state, WireState};

fuzz_target!(|data: &[u8]| {
    let Ok(wire) = serde_json::from_slice::<WireState>(data) else {
        return;
    };
    let ex = power_exercise();
    let limits = Limits::with_budget(2_000).unwrap();
    if let Ok(t) = decode_state(&ex, limits, &wire) {
        // Whatever decodes must encode to something that decodes to the
        // same state.
        let again = encode_state(&ex, &t).expect("encodable");
        let back = decode_state(&ex, limits, &again).expect("re-decodable");
        assert_eq!(back.state, t.state);
    }
});
