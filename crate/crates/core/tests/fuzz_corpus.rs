//! Replays the checked-in fuzz corpus through the same round-trip checks the
//! fuzz targets make, so the seeds stay meaningful without a nightly toolchain.

use std::path::{Path, PathBuf};

use thermotact::classifier::checkpoint::{from_bytes, to_bytes};
use thermotact::episodes::{dataset_from_json, dataset_to_json};
use thermotact::experiment::ExperimentSpec;
use thermotact::materials::{format_db, parse_db};

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn materials_seeds() {
    let mut parsed = 0;
    for (path, bytes) in seeds("parse_materials") {
        let text = String::from_utf8(bytes).unwrap();
        if let Ok(db) = parse_db(&text) {
            assert_eq!(parse_db(&format_db(&db)).unwrap(), db, "{}", path.display());
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn dataset_seeds() {
    let mut parsed = 0;
    for (path, bytes) in seeds("dataset_json") {
        let text = String::from_utf8(bytes).unwrap();
        match dataset_from_json(&text) {
            Ok(ds) => {
                assert_eq!(
                    dataset_from_json(&dataset_to_json(&ds).unwrap()).unwrap(),
                    ds
                );
                parsed += 1;
            }
            Err(e) => assert!(path.ends_with("truncated.json"), "{}: {e}", path.display()),
        }
    }
    assert_eq!(parsed, 1);
}

#[test]
fn checkpoint_seeds() {
    for (path, bytes) in seeds("checkpoint") {
        let model = from_bytes(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(to_bytes(&model), bytes);
        assert!(from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }
}

#[test]
fn experiment_spec_seeds() {
    for (path, bytes) in seeds("experiment_spec") {
        let text = String::from_utf8(bytes).unwrap();
        let spec = ExperimentSpec::from_toml_str(&text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(
            ExperimentSpec::from_toml_str(&spec.to_toml()).unwrap(),
            spec
        );
    }
}
