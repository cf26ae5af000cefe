#![no_main]

use libfuzzer_sys::fuzz_target;
use thermotact::episodes::{dataset_from_json, dataset_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ds) = dataset_from_json(text) {
        let json = dataset_to_json(&ds).expect("valid dataset serializes");
        assert_eq!(dataset_from_json(&json).expect("round trip"), ds);
    }
});
