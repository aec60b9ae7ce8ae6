#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftlab::seqcore::{render_symbols, Word};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = Word::parse(text) {
        let again = Word::parse(&render_symbols(w.symbols())).expect("rendered word parses");
        assert_eq!(again, w);
    }
});
