#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftlab::seqcore::{parse_sequence, render_sequence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_sequence(text) {
        assert_eq!(parse_sequence(&render_sequence(&x)).unwrap(), x);
        assert_eq!(x.shift(1).get(0), x.get(1));
    }
});
