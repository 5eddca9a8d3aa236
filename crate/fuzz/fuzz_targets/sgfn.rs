#![no_main]

use libfuzzer_sys::fuzz_target;
use sgx_core::io::decode_sgfn_raw;
use sgx_core::Limits;

fuzz_target!(|data: &[u8]| {
    let limits = Limits {
        max_cells: 1 << 16,
        ..Limits::default()
    };
    if let Ok(f) = decode_sgfn_raw(data, &limits) {
        assert!(f.values.iter().all(|&v| (v as usize) < f.order));
    }
});
