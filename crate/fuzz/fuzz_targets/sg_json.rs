#![no_main]

use libfuzzer_sys::fuzz_target;
use sgx_core::io::{from_sg_json, to_sg_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = from_sg_json(text) {
        assert!(s.associativity_witness().is_none());
        let back = from_sg_json(&to_sg_json(&s)).expect("round trip");
        assert_eq!(back.flat_table(), s.flat_table());
    }
});
