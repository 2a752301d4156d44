#![no_main]

use kstab::exact::rat;
use kstab::expr::{parse_affine, parse_polynomial, Params};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let mut params = Params::new();
    params.insert("d".to_string(), rat(3, 1));
    params.insert("delta".to_string(), rat(1, 2));
    let _ = parse_polynomial(s, &params);
    let _ = parse_affine(s, &params);
});
