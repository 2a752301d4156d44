#![no_main]

use kstab::scenario::load_scenario_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = load_scenario_str(s);
});
