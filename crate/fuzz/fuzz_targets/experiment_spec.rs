#![no_main]

use libfuzzer_sys::fuzz_target;
use thermotact::experiment::ExperimentSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = ExperimentSpec::from_toml_str(text) {
        let again = ExperimentSpec::from_toml_str(&spec.to_toml()).expect("serialized spec reparses");
        assert_eq!(again, spec);
    }
});
