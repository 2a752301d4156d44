#![no_main]

use kstab::exact::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(s) {
        // Canonical text must parse back to the same value.
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
});
