#![no_main]

use libfuzzer_sys::fuzz_target;
use sgx_core::io::parse_merge_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((l, r)) = parse_merge_spec(text) {
        assert!(!l.is_empty() && !r.is_empty());
    }
});
