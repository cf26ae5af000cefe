//! Synthetic grasp episodes, augmentation and labeled datasets.
//!
//! One clean episode is synthesized per material from the contact model.
//! Augmentation then makes `multiplier` noisy copies of it: every copy gets
//! a constant offset drawn from `Uniform(-shift_range, shift_range)` plus
//! independent `N(0, noise_sigma²)` noise on each sample.
//!
//! Every augmented trace draws from its own ChaCha8 stream, selected by the
//! trace's global index, so generation order never changes the result.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::MaterialDb;
use crate::thermal::{check_temperature, device_sensor_response, ContactState, ThermalProps};

pub const DEFAULT_SENSOR_DEPTH: f64 = 5e-5;
pub const DEFAULT_DURATION: f64 = 10.0;
pub const DEFAULT_SAMPLE_RATE: f64 = 10.0;
/// A 2 cm × 2 cm contact patch.
pub const DEFAULT_AREA: f64 = 4e-4;

pub const DEFAULT_NOISE_SIGMA: f64 = 0.5;
pub const DEFAULT_SHIFT_RANGE: f64 = 0.1;
pub const DEFAULT_MULTIPLIER: usize = 100;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

/// One grasp: which material, both initial temperatures and how the device
/// sensor is sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactConfig {
    pub material: String,
    /// Material initial temperature [°C].
    pub material_temp: f64,
    /// Device initial temperature [°C].
    pub device_temp: f64,
    /// Sensor depth below the device surface [m].
    pub sensor_depth: f64,
    /// Episode length [s].
    pub duration: f64,
    /// [Hz]
    pub sample_rate: f64,
    /// Contact area [m²].
    pub area: f64,
}

impl ContactConfig {
    pub fn new(material: impl Into<String>, material_temp: f64, device_temp: f64) -> Self {
        Self {
            material: material.into(),
            material_temp,
            device_temp,
            sensor_depth: DEFAULT_SENSOR_DEPTH,
            duration: DEFAULT_DURATION,
            sample_rate: DEFAULT_SAMPLE_RATE,
            area: DEFAULT_AREA,
        }
    }

    pub fn delta_t(&self) -> f64 {
        self.device_temp - self.material_temp
    }

    pub fn validate(&self) -> Result<()> {
        if self.material.trim().is_empty() {
            return Err(Error::invalid("material", "empty material name"));
        }
        check_temperature("material_temp", self.material_temp)
            .map_err(|e| Error::invalid("material_temp", e.to_string()))?;
        check_temperature("device_temp", self.device_temp)
            .map_err(|e| Error::invalid("device_temp", e.to_string()))?;
        for (name, v) in [
            ("duration", self.duration),
            ("sample_rate", self.sample_rate),
            ("area", self.area),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        if !(self.sensor_depth >= 0.0) || !self.sensor_depth.is_finite() {
            return Err(Error::invalid(
                "sensor_depth",
                format!("must be finite and >= 0, got {}", self.sensor_depth),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TraceOrigin {
    /// Noise-free output of the contact model.
    Base,
    /// `index`-th augmented copy of the base episode, with the offset it received.
    Augmented { index: usize, shift: f64 },
}

/// Where a trace came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub config: ContactConfig,
    pub gamma: f64,
    pub surface_temp: f64,
    pub origin: TraceOrigin,
}

/// Device sensor temperatures for one episode, sampled every `dt` seconds
/// from the moment of contact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureTrace {
    pub label: String,
    pub samples: Vec<f64>,
    pub dt: f64,
    pub meta: TraceMeta,
}

impl TemperatureTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::Format(format!(
                "trace {:?} has fewer than 2 samples",
                self.label
            )));
        }
        if let Some(i) = self.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "trace {:?}: sample {i} is not finite",
                self.label
            )));
        }
        let expected = 1.0 / self.meta.config.sample_rate;
        if !(self.dt > 0.0) || ((self.dt - expected) / expected).abs() > 1e-12 {
            return Err(Error::Format(format!(
                "trace {:?}: dt {} does not match sample rate {}",
                self.label, self.dt, self.meta.config.sample_rate
            )));
        }
        Ok(())
    }

    /// Plain-text export: `#`-prefixed `key=value` header lines, then a
    /// `time_s,temperature_c` header row and one row per sample.
    pub fn to_csv(&self) -> String {
        let c = &self.meta.config;
        let mut out = String::from("# thermotact trace v1\n");
        let _ = writeln!(out, "# label={}", self.label);
        let _ = writeln!(out, "# material_temp_c={}", c.material_temp);
        let _ = writeln!(out, "# device_temp_c={}", c.device_temp);
        let _ = writeln!(out, "# surface_temp_c={}", self.meta.surface_temp);
        let _ = writeln!(out, "# gamma={}", self.meta.gamma);
        let _ = writeln!(out, "# sensor_depth_m={}", c.sensor_depth);
        let _ = writeln!(out, "# sample_rate_hz={}", c.sample_rate);
        let _ = writeln!(out, "# area_m2={}", c.area);
        out.push_str("time_s,temperature_c\n");
        for (k, v) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{},{}", k as f64 * self.dt, v);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationSpec {
    /// Standard deviation of per-sample noise [°C].
    pub noise_sigma: f64,
    /// Half-width of the per-trace uniform offset [°C].
    pub shift_range: f64,
    /// Copies produced per base trace.
    pub multiplier: usize,
    pub rng_seed: u64,
}

impl Default for AugmentationSpec {
    fn default() -> Self {
        Self {
            noise_sigma: DEFAULT_NOISE_SIGMA,
            shift_range: DEFAULT_SHIFT_RANGE,
            multiplier: DEFAULT_MULTIPLIER,
            rng_seed: 0,
        }
    }
}

impl AugmentationSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::invalid(
                "noise_sigma",
                format!("must be >= 0, got {}", self.noise_sigma),
            ));
        }
        if !(self.shift_range >= 0.0) || !self.shift_range.is_finite() {
            return Err(Error::invalid(
                "shift_range",
                format!("must be >= 0, got {}", self.shift_range),
            ));
        }
        if self.multiplier == 0 {
            return Err(Error::invalid("multiplier", "must be >= 1"));
        }
        Ok(())
    }
}

/// Runs the contact model for one grasp and labels the trace with the
/// material name as written in the database.
pub fn synthesize_episode(
    cfg: &ContactConfig,
    db: &MaterialDb,
    device: &ThermalProps,
) -> Result<TemperatureTrace> {
    cfg.validate()?;
    let rec = db.get(&cfg.material)?;
    let material = rec.to_thermal_props()?;
    let state = ContactState::new(device, &material, cfg.device_temp, cfg.material_temp)?;
    let samples = device_sensor_response(
        device,
        &material,
        cfg.device_temp,
        cfg.material_temp,
        cfg.sensor_depth,
        cfg.duration,
        cfg.sample_rate,
    )?;
    Ok(TemperatureTrace {
        label: rec.name.clone(),
        samples,
        dt: 1.0 / cfg.sample_rate,
        meta: TraceMeta {
            config: cfg.clone(),
            gamma: state.gamma,
            surface_temp: state.surface_temp,
            origin: TraceOrigin::Base,
        },
    })
}

/// Returns exactly `spec.multiplier` noisy copies of `base`.
pub fn augment(base: &TemperatureTrace, spec: &AugmentationSpec) -> Result<Vec<TemperatureTrace>> {
    augment_from_stream(base, spec, 0)
}

fn augment_from_stream(
    base: &TemperatureTrace,
    spec: &AugmentationSpec,
    first_stream: u64,
) -> Result<Vec<TemperatureTrace>> {
    spec.validate()?;
    let noise = Normal::new(0.0, spec.noise_sigma)
        .map_err(|e| Error::invalid("noise_sigma", e.to_string()))?;
    let out = (0..spec.multiplier)
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            rng.set_stream(first_stream + index as u64);
            let shift = if spec.shift_range > 0.0 {
                rng.random_range(-spec.shift_range..=spec.shift_range)
            } else {
                0.0
            };
            let samples = base
                .samples
                .iter()
                .map(|&v| {
                    let n = if spec.noise_sigma > 0.0 {
                        noise.sample(&mut rng)
                    } else {
                        0.0
                    };
                    v + shift + n
                })
                .collect();
            let mut meta = base.meta.clone();
            meta.origin = TraceOrigin::Augmented { index, shift };
            TemperatureTrace {
                label: base.label.clone(),
                samples,
                dt: base.dt,
                meta,
            }
        })
        .collect();
    Ok(out)
}

/// Labeled train/test traces together with everything needed to rebuild them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub class_names: Vec<String>,
    pub train: Vec<TemperatureTrace>,
    pub test: Vec<TemperatureTrace>,
    pub split_seed: u64,
    pub test_fraction: f64,
    pub augmentation: AugmentationSpec,
}

impl Dataset {
    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == label)
    }

    pub fn trace_len(&self) -> usize {
        self.train
            .first()
            .or(self.test.first())
            .map_or(0, |t| t.len())
    }

    pub fn validate(&self) -> Result<()> {
        if self.class_names.is_empty() {
            return Err(Error::Format("dataset has no classes".into()));
        }
        for (i, c) in self.class_names.iter().enumerate() {
            if self.class_names[..i]
                .iter()
                .any(|o| o.eq_ignore_ascii_case(c))
            {
                return Err(Error::Format(format!("duplicate class name {c:?}")));
            }
        }
        let len = self.trace_len();
        for (split, traces) in [("train", &self.train), ("test", &self.test)] {
            for (i, t) in traces.iter().enumerate() {
                t.validate()?;
                if self.class_index(&t.label).is_none() {
                    return Err(Error::Format(format!(
                        "{split} trace {i} has unknown label {:?}",
                        t.label
                    )));
                }
                if t.len() != len {
                    return Err(Error::Format(format!(
                        "{split} trace {i} has {} samples, expected {len}",
                        t.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One clean episode per class, augmented, then split per class so both
/// splits stay balanced.
pub fn build_dataset(
    classes: &[ContactConfig],
    spec: &AugmentationSpec,
    test_fraction: f64,
    seed: u64,
    db: &MaterialDb,
    device: &ThermalProps,
) -> Result<Dataset> {
    if classes.len() < 2 {
        return Err(Error::invalid(
            "classes",
            format!("need at least 2 classes, got {}", classes.len()),
        ));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::invalid(
            "test_fraction",
            format!("must be in (0, 1), got {test_fraction}"),
        ));
    }
    spec.validate()?;
    let n_test = (spec.multiplier as f64 * test_fraction).round() as usize;
    if n_test == 0 || n_test >= spec.multiplier {
        return Err(Error::invalid(
            "test_fraction",
            format!(
                "{test_fraction} of {} traces leaves an empty split",
                spec.multiplier
            ),
        ));
    }

    let mut class_names: Vec<String> = Vec::with_capacity(classes.len());
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (k, cfg) in classes.iter().enumerate() {
        let base = synthesize_episode(cfg, db, device)?;
        if class_names.iter().any(|c| c == &base.label) {
            return Err(Error::invalid(
                "classes",
                format!("material {:?} listed twice", base.label),
            ));
        }
        if let Some(first) = train.first().map(|t: &TemperatureTrace| t.len()) {
            if base.len() != first {
                return Err(Error::invalid(
                    "classes",
                    "all classes must share duration and sample rate",
                ));
            }
        }
        class_names.push(base.label.clone());
        let copies = augment_from_stream(&base, spec, (k * spec.multiplier) as u64)?;

        let mut order: Vec<usize> = (0..copies.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        shuffle(&mut order, &mut rng);
        let mut is_test = vec![false; copies.len()];
        for &i in &order[..n_test] {
            is_test[i] = true;
        }
        for (trace, to_test) in copies.into_iter().zip(is_test) {
            if to_test {
                test.push(trace);
            } else {
                train.push(trace);
            }
        }
    }
    Ok(Dataset {
        class_names,
        train,
        test,
        split_seed: seed,
        test_fraction,
        augmentation: *spec,
    })
}

/// Fisher-Yates with an explicit generator so results never depend on the
/// `rand` version's slice shuffle.
pub(crate) fn shuffle<T, R: Rng>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

pub const DATASET_FORMAT: &str = "thermotact-dataset";
pub const DATASET_VERSION: u32 = 1;

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: String,
    version: u32,
    dataset: Dataset,
}

/// JSON envelope `{"format": "thermotact-dataset", "version": 1, "dataset": {...}}`.
pub fn dataset_to_json(ds: &Dataset) -> Result<String> {
    let env = Envelope {
        format: DATASET_FORMAT.into(),
        version: DATASET_VERSION,
        dataset: ds.clone(),
    };
    serde_json::to_string(&env).map_err(|e| Error::Format(e.to_string()))
}

pub fn dataset_from_json(text: &str) -> Result<Dataset> {
    let json_err = |e: serde_json::Error| {
        Error::Format(format!("line {}, column {}: {e}", e.line(), e.column()))
    };
    let header: Header = serde_json::from_str(text).map_err(json_err)?;
    if header.format != DATASET_FORMAT {
        return Err(Error::Format(format!(
            "not a dataset file (format {:?})",
            header.format
        )));
    }
    if header.version != DATASET_VERSION {
        return Err(Error::UnsupportedVersion {
            what: "dataset",
            found: header.version,
            expected: DATASET_VERSION,
        });
    }
    let env: Envelope = serde_json::from_str(text).map_err(json_err)?;
    env.dataset.validate()?;
    Ok(env.dataset)
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, dataset_to_json(ds)?).map_err(|e| Error::io(path, e))
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    dataset_from_json(&text)
}
