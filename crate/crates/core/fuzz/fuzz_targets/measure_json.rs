#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftlab::simplexmetrics::{parse_measure, render_measure};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mu) = parse_measure(text) {
        assert_eq!(parse_measure(&render_measure(&mu)).unwrap(), mu);
    }
});
