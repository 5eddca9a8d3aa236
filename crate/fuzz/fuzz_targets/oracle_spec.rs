#![no_main]

use libfuzzer_sys::fuzz_target;
use sgx_core::io::parse_oracle_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_oracle_spec(text);
});
