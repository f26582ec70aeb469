#![no_main]

use libfuzzer_sys::fuzz_target;
use strategem::strategy::syntax::{parse, print};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse(text) {
        let printed = print(&s);
        assert_eq!(parse(&printed).as_ref(), Ok(&s), "{printed}");
    }
});
