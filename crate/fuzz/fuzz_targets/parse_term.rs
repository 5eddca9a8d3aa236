#![no_main]

use libfuzzer_sys::fuzz_target;
use sgx_core::Term;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Term::parse(text) {
        // the display form parses back to the same word
        let again = Term::parse(&t.to_string()).expect("display form parses");
        assert_eq!(again.word(), t.word());
    }
});
