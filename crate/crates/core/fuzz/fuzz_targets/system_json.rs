#![no_main]

use libfuzzer_sys::fuzz_target;
use shiftlab::systems::parse_system;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sys) = parse_system(text) {
        // Membership must answer or refuse, never panic.
        for w in [&[][..], &[0], &[1, 0], &[0, 1, 0, 0, 1]] {
            let _ = sys.contains(w);
        }
    }
});
