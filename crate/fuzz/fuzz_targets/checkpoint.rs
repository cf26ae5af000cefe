#![no_main]

use libfuzzer_sys::fuzz_target;
use thermotact::classifier::checkpoint::{from_bytes, to_bytes};

fuzz_target!(|data: &[u8]| {
    if let Ok(model) = from_bytes(data) {
        assert_eq!(to_bytes(&model), data);
    }
});
