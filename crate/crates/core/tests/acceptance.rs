//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! The classification criteria train 27 full-size models and take tens of
//! minutes on a single core.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use ndarray::Array2;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermotact::classifier::{gradient_check, Batch, LstmModel, Normalization, TrainConfig};
use thermotact::episodes::{build_dataset, AugmentationSpec, ContactConfig};
use thermotact::experiment::{run_experiment, ExperimentSpec};
use thermotact::materials::MaterialDb;
use thermotact::oracle::{
    interface_flux, log_log_slope, solve_contact, FdConfig, DEFAULT_GRID_POINTS,
};
use thermotact::thermal::{
    contact_surface_temp, gamma, heat_flux_device, temp_gradient, temp_profile, ThermalProps,
};

const SEEDS: [u64; 3] = [1, 2, 3];
const T_HOT: f64 = 43.0;
const T_COLD: f64 = 23.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../experiments")
        .join(format!("{name}.toml"))
}

/// Test-split accuracies, memoized on the resolved spec so identical runs
/// under different case names train once.
struct Runs {
    db: MaterialDb,
    device: ThermalProps,
    cache: HashMap<String, (f64, f64)>,
    /// One `(case and seed, lstm, centroid)` entry per distinct run.
    log: Vec<(String, f64, f64)>,
}

impl Runs {
    /// (LSTM accuracy %, nearest-centroid accuracy %) for the bundled spec `name` at `seed`.
    fn accuracy(&mut self, name: &str, seed: u64) -> (f64, f64) {
        let mut spec = ExperimentSpec::load(spec_path(name)).expect("bundled spec");
        spec.seed = seed;
        let mut key = spec.resolved().expect("resolved");
        key.name.clear();
        key.description.clear();
        let key = key.to_toml();
        if let Some(&acc) = self.cache.get(&key) {
            return acc;
        }
        let t0 = Instant::now();
        let out = run_experiment(&spec, &self.db, &self.device).expect("experiment runs");
        let acc = (out.accuracy_pct(), out.baseline.accuracy_pct());
        println!(
            "    run {name} seed {seed}: lstm {:.2}%  centroid {:.2}%  ({:.0} s)",
            acc.0,
            acc.1,
            t0.elapsed().as_secs_f64()
        );
        self.cache.insert(key, acc);
        self.log.push((format!("{name} seed {seed}"), acc.0, acc.1));
        acc
    }

    fn lstm(&mut self, name: &str) -> Vec<f64> {
        SEEDS.iter().map(|&s| self.accuracy(name, s).0).collect()
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2}")).collect();
    format!("[{}]", parts.join(", "))
}

/// FD interface temperature vs the contact temperature, five materials, t in [0.1, 10] s.
fn contact_temperature_law() -> Verdict {
    let db = MaterialDb::bundled();
    let water = ThermalProps::water();
    let mut worst: f64 = 0.0;
    for rec in db.records() {
        let mat = rec.to_thermal_props().unwrap();
        let cfg = FdConfig::semi_infinite(&water, &mat, 1000, 10.0, 0.1).unwrap();
        let sol = solve_contact(&water, &mat, T_COLD, T_HOT, &cfg).unwrap();
        let ts = contact_surface_temp(T_HOT, T_COLD, gamma(&water, &mat).unwrap()).unwrap();
        for (k, &t) in sol.times.iter().enumerate() {
            if t >= 0.1 - 1e-9 {
                worst = worst.max((sol.interface_temps()[k] - ts).abs());
            }
        }
    }
    verdict(
        worst <= 0.05,
        format!("max |T_interface - T_s| = {worst:.2e} C (tol 0.05)"),
    )
}

/// Closed-form profile vs FD on 10 depths × 10 times, both bodies, copper and wood.
fn profile_law() -> Verdict {
    let db = MaterialDb::bundled();
    let water = ThermalProps::water();
    let mut worst: f64 = 0.0;
    for name in ["Copper", "Wood"] {
        let mat = db.props(name).unwrap();
        let cfg = FdConfig::semi_infinite(&water, &mat, 1000, 10.0, 0.1).unwrap();
        let sol = solve_contact(&water, &mat, T_COLD, T_HOT, &cfg).unwrap();
        let ts = contact_surface_temp(T_HOT, T_COLD, gamma(&water, &mat).unwrap()).unwrap();
        for ti in 1..=10 {
            let t = ti as f64;
            let k = sol.snapshot_index(t);
            for di in 1..=10 {
                let frac = di as f64 / 10.0;
                let xd = frac * 4.0 * (water.diffusivity() * 10.0).sqrt();
                let xm = frac * 4.0 * (mat.diffusivity() * 10.0).sqrt();
                let ed =
                    sol.device_temp_at(k, xd) - temp_profile(&water, T_COLD, ts, xd, t).unwrap();
                let em =
                    sol.material_temp_at(k, xm) - temp_profile(&mat, T_HOT, ts, xm, t).unwrap();
                worst = worst.max(ed.abs()).max(em.abs());
            }
        }
    }
    verdict(
        worst <= 0.05,
        format!("max profile error = {worst:.2e} C over 2 pairs x 2 sides x 10 x 10 (tol 0.05)"),
    )
}

/// Closed-form device heat flux vs FD interface flux, and its 1/sqrt(t) decay.
fn flux_law() -> Verdict {
    let db = MaterialDb::bundled();
    let water = ThermalProps::water();
    let area = 4e-4;
    let mut worst_rel: f64 = 0.0;
    let mut worst_slope: f64 = 0.0;
    for name in ["Copper", "Wood"] {
        let mat = db.props(name).unwrap();
        let cfg = FdConfig::semi_infinite(&water, &mat, DEFAULT_GRID_POINTS, 10.0, 0.5).unwrap();
        let sol = solve_contact(&water, &mat, T_HOT + 20.0, T_HOT, &cfg).unwrap();
        let g = gamma(&water, &mat).unwrap();
        let q = interface_flux(&sol);
        let (mut ts, mut qs) = (Vec::new(), Vec::new());
        for (k, &t) in sol.times.iter().enumerate() {
            if t < 1.0 {
                continue;
            }
            let exact = heat_flux_device(&water, 20.0, g, area, t).unwrap();
            worst_rel = worst_rel.max(((q[k] * area - exact) / exact).abs());
            ts.push(t);
            qs.push(q[k]);
        }
        worst_slope = worst_slope.max((log_log_slope(&ts, &qs) + 0.5).abs());
    }
    verdict(
        worst_rel <= 0.02 && worst_slope <= 0.03,
        format!("max relative flux error {worst_rel:.2e} (tol 2e-2), max |slope + 0.5| {worst_slope:.2e} (tol 0.03)"),
    )
}

fn accuracy_vs_delta_t(runs: &mut Runs) -> Verdict {
    let acc: Vec<Vec<f64>> = ["2-A", "2-B", "2-C", "2-D", "2-E"]
        .iter()
        .map(|c| runs.lstm(c))
        .collect();
    let chance = acc[0].iter().all(|&a| (25.0..=42.0).contains(&a));
    let perfect = acc[2..].iter().flatten().all(|&a| a == 100.0);
    let (m0, m5, m10) = (mean(&acc[0]), mean(&acc[1]), mean(&acc[2]));
    let between = m0 < m5 && m5 < m10;
    let means: Vec<f64> = acc.iter().map(|a| mean(a)).collect();
    let monotone = means.windows(2).all(|w| w[0] <= w[1]);
    verdict(
        chance && perfect && between && monotone,
        format!(
            "dT=0 {} in [25,42]: {chance}; dT=5 {} mean {m5:.2} strictly between {m0:.2} and {m10:.2}: {between}; \
             dT=10/15/20 {} {} {} all 100: {perfect}; seed-mean nondecreasing: {monotone}",
            fmt(&acc[0]),
            fmt(&acc[1]),
            fmt(&acc[2]),
            fmt(&acc[3]),
            fmt(&acc[4])
        ),
    )
}

fn five_class_contrast(runs: &mut Runs) -> Verdict {
    let a = runs.lstm("1-A");
    let b = runs.lstm("1-B");
    let perfect = a.iter().all(|&x| x == 100.0);
    let lower = a.iter().zip(&b).all(|(x, y)| y < x) && b.iter().all(|&y| y < 70.0);
    verdict(
        perfect && lower,
        format!(
            "5 classes dT=20 {} all 100: {perfect}; dT=5 {} below dT=20 and below 70: {lower}",
            fmt(&a),
            fmt(&b)
        ),
    )
}

fn object_temperature_invariance(runs: &mut Runs) -> Verdict {
    let cases = ["3-A", "3-B", "3-C"];
    let acc: Vec<Vec<f64>> = cases.iter().map(|c| runs.lstm(c)).collect();
    let pass = acc.iter().flatten().all(|&a| a == 100.0);
    let parts: Vec<String> = cases
        .iter()
        .zip(&acc)
        .map(|(c, a)| format!("{c} {}", fmt(a)))
        .collect();
    verdict(pass, format!("{} all 100: {pass}", parts.join(", ")))
}

fn centroid_guard(runs: &Runs) -> Verdict {
    let gap = |r: &&(String, f64, f64)| r.2 - r.1;
    let Some(worst) = runs.log.iter().max_by(|a, b| gap(a).total_cmp(&gap(b))) else {
        return verdict(false, "no experiment runs recorded");
    };
    let over: Vec<&str> = runs
        .log
        .iter()
        .filter(|r| gap(r) > 5.0)
        .map(|r| r.0.as_str())
        .collect();
    verdict(
        over.is_empty(),
        format!(
            "largest centroid-minus-LSTM gap over {} runs = {:.2} points at {} (tol 5); over tolerance: {over:?}",
            runs.log.len(),
            gap(&worst),
            worst.0
        ),
    )
}

fn gradient_correctness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let names: Vec<String> = ["Copper", "Iron", "Wood"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let model = LstmModel::new(8, names, Normalization::IDENTITY, &mut rng).unwrap();
    let random = Batch {
        inputs: Array2::from_shape_fn((8, 20), |_| rng.random_range(-2.0..2.0)),
        labels: (0..8).map(|i| i % 3).collect(),
    };
    let e_random = gradient_check(&model, &random);

    let classes: Vec<ContactConfig> = ["Copper", "Iron", "Wood"]
        .iter()
        .map(|m| ContactConfig {
            duration: 1.9,
            ..ContactConfig::new(*m, T_HOT, T_COLD)
        })
        .collect();
    let spec = AugmentationSpec {
        multiplier: 4,
        ..AugmentationSpec::default()
    };
    let ds = build_dataset(
        &classes,
        &spec,
        0.25,
        1,
        &MaterialDb::bundled(),
        &ThermalProps::water(),
    )
    .unwrap();
    let refs: Vec<_> = ds.train.iter().collect();
    let norm = Normalization::fit(&refs).unwrap();
    let model = LstmModel {
        normalization: norm,
        ..model
    };
    let traces = model.batch(&refs).unwrap();
    let e_traces = gradient_check(&model, &traces);
    let worst = e_random.max(e_traces);
    verdict(
        worst < 1e-4 && traces.inputs.ncols() == 20,
        format!("max relative error {worst:.2e} (random batch {e_random:.2e}, trace batch {e_traces:.2e}; tol 1e-4)"),
    )
}

fn props_strategy() -> impl Strategy<Value = ThermalProps> {
    (0.05f64..500.0, 100.0f64..5e4)
        .prop_map(|(l, e)| ThermalProps::from_conductivity_effusivity(l, e).unwrap())
}

fn property_suites() -> Verdict {
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let temp = -20.0f64..80.0;

    record(
        "interval containment",
        runner
            .run(
                &(
                    props_strategy(),
                    props_strategy(),
                    temp.clone(),
                    temp.clone(),
                ),
                |(d, m, td, tm)| {
                    let ts = contact_surface_temp(tm, td, gamma(&d, &m).unwrap()).unwrap();
                    prop_assert!(ts >= tm.min(td) && ts <= tm.max(td));
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "equal temperatures fix the surface",
        runner
            .run(
                &(props_strategy(), props_strategy(), temp.clone()),
                |(d, m, t)| {
                    prop_assert_eq!(
                        contact_surface_temp(t, t, gamma(&d, &m).unwrap()).unwrap(),
                        t
                    );
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "flux continuity and antisymmetry",
        runner
            .run(
                &(
                    props_strategy(),
                    props_strategy(),
                    temp.clone(),
                    temp.clone(),
                    0.1f64..20.0,
                ),
                |(d, m, td, tm, t)| {
                    let g = gamma(&d, &m).unwrap();
                    let ts = contact_surface_temp(tm, td, g).unwrap();
                    let out_of_device =
                        d.conductivity() * temp_gradient(&d, td, ts, 0.0, t).unwrap();
                    let into_material =
                        -m.conductivity() * temp_gradient(&m, tm, ts, 0.0, t).unwrap();
                    let scale = out_of_device.abs().max(into_material.abs()).max(1e-300);
                    prop_assert!((out_of_device - into_material).abs() <= 1e-9 * scale);
                    let q = heat_flux_device(&d, td - tm, g, 4e-4, t).unwrap();
                    let q_rev = heat_flux_device(&d, tm - td, g, 4e-4, t).unwrap();
                    prop_assert_eq!(q, -q_rev);
                    prop_assert!((q - out_of_device * 4e-4).abs() <= 1e-9 * q.abs().max(1e-300));
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "gamma identity",
        runner
            .run(
                &(
                    0.05f64..500.0,
                    100.0f64..2e4,
                    100.0f64..5000.0,
                    0.05f64..500.0,
                    100.0f64..2e4,
                    100.0f64..5000.0,
                ),
                |(l1, r1, c1, l2, r2, c2)| {
                    let d = ThermalProps::from_bulk(l1, r1, c1).unwrap();
                    let m = ThermalProps::from_bulk(l2, r2, c2).unwrap();
                    let expected = ((l1 * r1 * c1) / (l2 * r2 * c2)).sqrt();
                    prop_assert!((gamma(&d, &m).unwrap() - expected).abs() <= 1e-9 * expected);
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );
    record(
        "flux monotone in dT and A",
        runner
            .run(
                &(
                    props_strategy(),
                    props_strategy(),
                    0.0f64..40.0,
                    0.0f64..10.0,
                    1e-5f64..1e-2,
                    1.0f64..3.0,
                    0.1f64..20.0,
                ),
                |(d, m, dt, extra, a, k, t)| {
                    let g = gamma(&d, &m).unwrap();
                    let q = heat_flux_device(&d, dt, g, a, t).unwrap();
                    prop_assert!(heat_flux_device(&d, dt + extra, g, a, t).unwrap() >= q);
                    prop_assert!(heat_flux_device(&d, dt, g, a * k, t).unwrap() >= q);
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    );

    let db = MaterialDb::bundled();
    let water = ThermalProps::water();
    let small = |mt: f64, dt: f64| -> Vec<ContactConfig> {
        ["Copper", "Iron", "Wood"]
            .iter()
            .map(|m| ContactConfig {
                duration: 2.0,
                ..ContactConfig::new(*m, mt, mt - dt)
            })
            .collect()
    };
    let mut slow = TestRunner::new(Config {
        cases: 8,
        failure_persistence: None,
        ..Config::default()
    });
    record(
        "dataset determinism",
        slow.run(
            &(any::<u64>(), any::<u64>(), 0.0f64..20.0),
            |(aug_seed, split_seed, dt)| {
                let spec = AugmentationSpec {
                    multiplier: 20,
                    rng_seed: aug_seed,
                    ..AugmentationSpec::default()
                };
                let a =
                    build_dataset(&small(T_HOT, dt), &spec, 0.2, split_seed, &db, &water).unwrap();
                let b =
                    build_dataset(&small(T_HOT, dt), &spec, 0.2, split_seed, &db, &water).unwrap();
                prop_assert_eq!(a, b);
                Ok(())
            },
        )
        .map_err(|e| e.to_string()),
    );
    record(
        "pipeline shift invariance",
        slow.run(
            &(any::<u64>(), -10.0f64..10.0, 0.0f64..20.0),
            |(seed, shift, dt)| {
                let spec = AugmentationSpec {
                    multiplier: 20,
                    rng_seed: seed,
                    ..AugmentationSpec::default()
                };
                let base = build_dataset(&small(T_HOT, dt), &spec, 0.2, seed, &db, &water).unwrap();
                let mut shifted = base.clone();
                for t in shifted.train.iter_mut().chain(shifted.test.iter_mut()) {
                    t.samples.iter_mut().for_each(|v| *v += shift);
                }
                let cfg = TrainConfig {
                    hidden_size: 6,
                    batch_size: 16,
                    epochs: 20,
                    seed,
                    ..TrainConfig::default()
                };
                let cm = |ds| {
                    let m = thermotact::classifier::train(ds, &cfg)
                        .map_err(|e| TestCaseError::fail(e.to_string()))?;
                    thermotact::classifier::evaluate_dataset(&m.model, ds)
                        .map_err(|e| TestCaseError::fail(e.to_string()))
                };
                prop_assert_eq!(cm(&base)?, cm(&shifted)?);
                Ok(())
            },
        )
        .map_err(|e| e.to_string()),
    );

    let pass = failures.is_empty();
    verdict(
        pass,
        if pass {
            "7 property suites hold (256 cases each for the contact laws, 8 for dataset/pipeline)"
                .to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let mut runs = Runs {
        db: MaterialDb::bundled(),
        device: ThermalProps::water(),
        cache: HashMap::new(),
        log: Vec::new(),
    };
    let mut all_pass = true;
    let mut report = |id: &str, title: &str, f: &mut dyn FnMut() -> Verdict| {
        let t0 = Instant::now();
        let v = f();
        all_pass &= v.pass;
        println!(
            "criterion {id} {title}: {} ({:.0} s) - {}",
            if v.pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64(),
            v.detail
        );
    };
    report("1", "contact-temperature law", &mut contact_temperature_law);
    report("2", "profile law", &mut profile_law);
    report("3", "flux law", &mut flux_law);
    report("7", "gradient correctness", &mut gradient_correctness);
    report("8", "property suites", &mut property_suites);
    report("4", "accuracy vs temperature difference", &mut || {
        accuracy_vs_delta_t(&mut runs)
    });
    report("5", "five-class contrast", &mut || {
        five_class_contrast(&mut runs)
    });
    report("6", "object-temperature invariance", &mut || {
        object_temperature_invariance(&mut runs)
    });
    report(
        "4-6 guard",
        "LSTM within 5 points of nearest centroid",
        &mut || centroid_guard(&runs),
    );
    if !all_pass {
        std::process::exit(1);
    }
}
