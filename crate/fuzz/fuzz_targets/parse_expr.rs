#![no_main]

use libfuzzer_sys::fuzz_target;
use strategem::powers::{norm_power, parse, print};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = parse(text) {
        // Printing is canonical: it parses back to the same tree.
        let printed = print(&e);
        assert_eq!(parse(&printed).as_ref(), Ok(&e), "{printed}");
        let n = norm_power(&e);
        assert_eq!(norm_power(&n), n);
    }
});
