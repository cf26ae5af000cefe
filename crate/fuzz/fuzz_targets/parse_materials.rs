#![no_main]

use libfuzzer_sys::fuzz_target;
use thermotact::materials::{format_db, parse_db};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(db) = parse_db(text) {
        let again = parse_db(&format_db(&db)).expect("formatted database reparses");
        assert_eq!(db, again);
    }
});
