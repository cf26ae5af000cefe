//! Experiment specifications and the end-to-end pipeline behind the CLI.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifier::{
    evaluate_dataset, nearest_centroid_dataset, train, ConfusionMatrix, LstmModel, TrainConfig,
    DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, DEFAULT_GRAD_CLIP, DEFAULT_HIDDEN_SIZE,
    DEFAULT_LEARNING_RATE, DEFAULT_WEIGHT_DECAY,
};
use crate::episodes::{
    build_dataset, AugmentationSpec, ContactConfig, Dataset, DEFAULT_AREA, DEFAULT_DURATION,
    DEFAULT_MULTIPLIER, DEFAULT_NOISE_SIGMA, DEFAULT_SAMPLE_RATE, DEFAULT_SENSOR_DEPTH,
    DEFAULT_SHIFT_RANGE, DEFAULT_TEST_FRACTION,
};
use crate::error::{Error, Result};
use crate::materials::MaterialDb;
use crate::thermal::{check_temperature, gamma, heat_flux_device, ContactState, ThermalProps};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AugmentationSettings {
    pub noise_sigma: f64,
    pub shift_range: f64,
    pub multiplier: usize,
}

impl Default for AugmentationSettings {
    fn default() -> Self {
        Self {
            noise_sigma: DEFAULT_NOISE_SIGMA,
            shift_range: DEFAULT_SHIFT_RANGE,
            multiplier: DEFAULT_MULTIPLIER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSettings {
    pub hidden_size: usize,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub grad_clip: f64,
    pub weight_decay: f64,
}

impl Default for TrainingSettings {
    fn default() -> Self {
        Self {
            hidden_size: DEFAULT_HIDDEN_SIZE,
            batch_size: DEFAULT_BATCH_SIZE,
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LEARNING_RATE,
            grad_clip: DEFAULT_GRAD_CLIP,
            weight_decay: DEFAULT_WEIGHT_DECAY,
        }
    }
}

fn default_duration() -> f64 {
    DEFAULT_DURATION
}
fn default_sample_rate() -> f64 {
    DEFAULT_SAMPLE_RATE
}
fn default_sensor_depth() -> f64 {
    DEFAULT_SENSOR_DEPTH
}
fn default_area() -> f64 {
    DEFAULT_AREA
}
fn default_test_fraction() -> f64 {
    DEFAULT_TEST_FRACTION
}

/// One named classification run. Give either `device_temp` or `delta_t`
/// (signed, `device_temp − material_temp`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub materials: Vec<String>,
    pub material_temp: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device_temp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_t: Option<f64>,
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_sample_rate")]
    pub sample_rate: f64,
    #[serde(default = "default_sensor_depth")]
    pub sensor_depth: f64,
    #[serde(default = "default_area")]
    pub area: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default)]
    pub augmentation: AugmentationSettings,
    #[serde(default)]
    pub training: TrainingSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Deserialize)]
struct SummaryEnvelope {
    spec: ExperimentSpec,
}

/// splitmix64 finalizer, truncated to 63 bits so seeds stay valid TOML integers.
fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) >> 1
}

/// Seeds derived from an experiment's single `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedSeeds {
    pub split: u64,
    pub augmentation: u64,
    pub training: u64,
}

impl ExperimentSpec {
    pub fn new(
        name: impl Into<String>,
        materials: &[&str],
        material_temp: f64,
        device_temp: f64,
    ) -> Self {
        Self {
            name: name.into(),
            description: String::new(),
            materials: materials.iter().map(|s| s.to_string()).collect(),
            material_temp,
            device_temp: Some(device_temp),
            delta_t: None,
            duration: DEFAULT_DURATION,
            sample_rate: DEFAULT_SAMPLE_RATE,
            sensor_depth: DEFAULT_SENSOR_DEPTH,
            area: DEFAULT_AREA,
            seed: 0,
            test_fraction: DEFAULT_TEST_FRACTION,
            augmentation: AugmentationSettings::default(),
            training: TrainingSettings::default(),
            output_dir: None,
        }
    }

    /// Parses a spec file, or the `[spec]` table of a run summary.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let value: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Format(e.to_string()))?;
        let spec: Self = if value.contains_key("spec") && !value.contains_key("name") {
            toml::from_str::<SummaryEnvelope>(text)
                .map_err(spec_err)?
                .spec
        } else {
            toml::from_str(text).map_err(spec_err)?
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn resolved_device_temp(&self) -> Result<f64> {
        match (self.device_temp, self.delta_t) {
            (Some(d), None) => Ok(d),
            (None, Some(dt)) => Ok(self.material_temp + dt),
            (Some(_), Some(_)) => Err(Error::invalid(
                "device_temp",
                "give device_temp or delta_t, not both",
            )),
            (None, None) => Err(Error::invalid(
                "device_temp",
                "one of device_temp or delta_t is required",
            )),
        }
    }

    /// Same run with `device_temp` made explicit.
    pub fn resolved(&self) -> Result<Self> {
        let mut r = self.clone();
        r.device_temp = Some(self.resolved_device_temp()?);
        r.delta_t = None;
        Ok(r)
    }

    pub fn seeds(&self) -> DerivedSeeds {
        DerivedSeeds {
            split: mix(self.seed, 1),
            augmentation: mix(self.seed, 2),
            training: mix(self.seed, 3),
        }
    }

    pub fn contact_configs(&self) -> Result<Vec<ContactConfig>> {
        let device_temp = self.resolved_device_temp()?;
        Ok(self
            .materials
            .iter()
            .map(|m| ContactConfig {
                material: m.clone(),
                material_temp: self.material_temp,
                device_temp,
                sensor_depth: self.sensor_depth,
                duration: self.duration,
                sample_rate: self.sample_rate,
                area: self.area,
            })
            .collect())
    }

    pub fn augmentation_spec(&self) -> AugmentationSpec {
        AugmentationSpec {
            noise_sigma: self.augmentation.noise_sigma,
            shift_range: self.augmentation.shift_range,
            multiplier: self.augmentation.multiplier,
            rng_seed: self.seeds().augmentation,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            hidden_size: self.training.hidden_size,
            batch_size: self.training.batch_size,
            epochs: self.training.epochs,
            learning_rate: self.training.learning_rate,
            grad_clip: self.training.grad_clip,
            weight_decay: self.training.weight_decay,
            seed: self.seeds().training,
        }
    }

    /// `override_dir`, else the spec's `output_dir`, else `out/<name>`.
    pub fn output_dir(&self, override_dir: Option<&Path>) -> PathBuf {
        override_dir
            .map(Path::to_path_buf)
            .or_else(|| self.output_dir.clone())
            .unwrap_or_else(|| Path::new("out").join(sanitize(&self.name)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("name", "must not be empty"));
        }
        if self.materials.len() < 2 {
            return Err(Error::invalid("materials", "need at least 2 materials"));
        }
        for (i, m) in self.materials.iter().enumerate() {
            if self.materials[..i]
                .iter()
                .any(|o| o.eq_ignore_ascii_case(m))
            {
                return Err(Error::invalid("materials", format!("{m:?} listed twice")));
            }
        }
        check_temperature("material_temp", self.material_temp)
            .map_err(|e| Error::invalid("material_temp", e.to_string()))?;
        let device_temp = self.resolved_device_temp()?;
        check_temperature("device_temp", device_temp)
            .map_err(|e| Error::invalid("device_temp", e.to_string()))?;
        for c in self.contact_configs()? {
            c.validate()?;
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::invalid(
                "test_fraction",
                format!("must be in (0, 1), got {}", self.test_fraction),
            ));
        }
        self.augmentation_spec()
            .validate()
            .map_err(|e| prefix_field(e, "augmentation"))?;
        self.train_config()
            .validate()
            .map_err(|e| prefix_field(e, "training"))?;
        Ok(())
    }
}

fn prefix_field(e: Error, table: &str) -> Error {
    match e {
        Error::Validation { field, message } => Error::Validation {
            field: format!("{table}.{field}"),
            message,
        },
        other => other,
    }
}

fn spec_err(e: toml::de::Error) -> Error {
    Error::Format(e.to_string().trim_end().to_string())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn build_experiment_dataset(
    spec: &ExperimentSpec,
    db: &MaterialDb,
    device: &ThermalProps,
) -> Result<Dataset> {
    spec.validate()?;
    build_dataset(
        &spec.contact_configs()?,
        &spec.augmentation_spec(),
        spec.test_fraction,
        spec.seeds().split,
        db,
        device,
    )
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Resolved spec the run used.
    pub spec: ExperimentSpec,
    pub confusion: ConfusionMatrix,
    /// Nearest-centroid result on the same split.
    pub baseline: ConfusionMatrix,
    pub loss_history: Vec<f64>,
    pub model: LstmModel,
    pub dataset: Dataset,
}

/// Builds the dataset, trains, and evaluates on the held-out split.
pub fn run_experiment(
    spec: &ExperimentSpec,
    db: &MaterialDb,
    device: &ThermalProps,
) -> Result<ExperimentOutcome> {
    let spec = spec.resolved()?;
    let dataset = build_experiment_dataset(&spec, db, device)?;
    let trained = train(&dataset, &spec.train_config())?;
    let confusion = evaluate_dataset(&trained.model, &dataset)?;
    let baseline = nearest_centroid_dataset(&dataset)?;
    Ok(ExperimentOutcome {
        spec,
        confusion,
        baseline,
        loss_history: trained.loss_history,
        model: trained.model,
        dataset,
    })
}

#[derive(Serialize)]
struct SummaryResult {
    accuracy_pct: f64,
    correct: u64,
    total: u64,
    centroid_accuracy_pct: f64,
    initial_loss: f64,
    final_loss: f64,
    split_seed: u64,
    augmentation_seed: u64,
    training_seed: u64,
}

#[derive(Serialize)]
struct Summary<'a> {
    result: SummaryResult,
    spec: &'a ExperimentSpec,
}

impl ExperimentOutcome {
    pub fn accuracy_pct(&self) -> f64 {
        self.confusion.accuracy_pct()
    }

    /// `[result]` table followed by the resolved `[spec]`; reloadable with
    /// [`ExperimentSpec::from_toml_str`].
    pub fn summary_toml(&self) -> String {
        let seeds = self.spec.seeds();
        let s = Summary {
            result: SummaryResult {
                accuracy_pct: self.confusion.accuracy_pct(),
                correct: self.confusion.correct(),
                total: self.confusion.total(),
                centroid_accuracy_pct: self.baseline.accuracy_pct(),
                initial_loss: self.loss_history.first().copied().unwrap_or(f64::NAN),
                final_loss: self.loss_history.last().copied().unwrap_or(f64::NAN),
                split_seed: seeds.split,
                augmentation_seed: seeds.augmentation,
                training_seed: seeds.training,
            },
            spec: &self.spec,
        };
        toml::to_string(&s).expect("summary serializes")
    }

    pub fn loss_csv(&self) -> String {
        let mut out = String::from("epoch,loss\n");
        for (i, l) in self.loss_history.iter().enumerate() {
            let _ = writeln!(out, "{},{}", i + 1, l);
        }
        out
    }
}

/// One row of a ΔT sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub case: String,
    pub delta_t: f64,
    pub seed: u64,
    pub accuracy_pct: f64,
    pub centroid_accuracy_pct: f64,
}

/// `A`, `B`, ..., `Z`, `AA`, ...
fn case_letter(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// Device temperature for a sweep entry. `delta_t` is a magnitude; the device
/// is colder than the material unless `heated_device` is set.
pub fn sweep_device_temp(material_temp: f64, delta_t: f64, heated_device: bool) -> f64 {
    if heated_device {
        material_temp + delta_t
    } else {
        material_temp - delta_t
    }
}

/// Re-runs `base` for every ΔT and seed. Cases are labeled
/// `<case_prefix>-A`, `<case_prefix>-B`, ... in ΔT order.
#[allow(clippy::too_many_arguments)]
pub fn sweep_dt(
    base: &ExperimentSpec,
    deltas: &[f64],
    seeds: &[u64],
    heated_device: bool,
    case_prefix: &str,
    db: &MaterialDb,
    device: &ThermalProps,
    mut on_row: impl FnMut(&SweepRow),
) -> Result<Vec<SweepRow>> {
    if deltas.is_empty() {
        return Err(Error::invalid("delta_t", "empty list"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("seeds", "empty list"));
    }
    if let Some(d) = deltas.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
        return Err(Error::invalid(
            "delta_t",
            format!("values must be finite and >= 0, got {d}"),
        ));
    }
    let mut rows = Vec::new();
    for (i, &dt) in deltas.iter().enumerate() {
        for &seed in seeds {
            let mut spec = base.clone();
            spec.name = format!("{case_prefix}-{}", case_letter(i));
            spec.device_temp = Some(sweep_device_temp(base.material_temp, dt, heated_device));
            spec.delta_t = None;
            spec.seed = seed;
            let out = run_experiment(&spec, db, device)?;
            let row = SweepRow {
                case: spec.name,
                delta_t: dt,
                seed,
                accuracy_pct: out.accuracy_pct(),
                centroid_accuracy_pct: out.baseline.accuracy_pct(),
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

pub const SWEEP_CSV_HEADER: &str = "case,delta_t_c,seed,accuracy_pct,centroid_accuracy_pct";

pub fn sweep_row_csv(r: &SweepRow) -> String {
    format!(
        "{},{},{},{:.2},{:.2}",
        r.case, r.delta_t, r.seed, r.accuracy_pct, r.centroid_accuracy_pct
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&sweep_row_csv(r));
        out.push('\n');
    }
    out
}

/// One point of the heat-flow surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxRow {
    pub material: String,
    pub delta_t: f64,
    pub area: f64,
    /// Heat leaving the device [W].
    pub q_device: f64,
    pub surface_temp: f64,
}

/// Heat flow out of the device at time `t` for every material × ΔT × area,
/// with the material held at `material_temp` and the device at
/// `material_temp + ΔT`.
pub fn flux_surface(
    materials: &[String],
    deltas: &[f64],
    areas: &[f64],
    t: f64,
    material_temp: f64,
    db: &MaterialDb,
    device: &ThermalProps,
) -> Result<Vec<FluxRow>> {
    if materials.is_empty() || deltas.is_empty() || areas.is_empty() {
        return Err(Error::invalid(
            "grid",
            "materials, delta_t and area lists must be non-empty",
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid("time", format!("must be > 0, got {t}")));
    }
    let mut rows = Vec::with_capacity(materials.len() * deltas.len() * areas.len());
    for name in materials {
        let rec = db.get(name)?;
        let mat = rec.to_thermal_props()?;
        let g = gamma(device, &mat)?;
        for &dt in deltas {
            let state = ContactState::new(device, &mat, material_temp + dt, material_temp)?;
            for &area in areas {
                rows.push(FluxRow {
                    material: rec.name.clone(),
                    delta_t: dt,
                    area,
                    q_device: heat_flux_device(device, dt, g, area, t)?,
                    surface_temp: state.surface_temp,
                });
            }
        }
    }
    Ok(rows)
}

pub fn flux_csv(rows: &[FluxRow]) -> String {
    let mut out = String::from("material,delta_t_c,area_m2,q_device_w,surface_temp_c\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.material, r.delta_t, r.area, r.q_device, r.surface_temp
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentSpec {
        ExperimentSpec::new("t", &["Copper", "Iron", "Wood"], 43.0, 23.0)
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let spec = ExperimentSpec::from_toml_str(
            "name = \"3-A\"\nmaterials = [\"Copper\", \"Iron\", \"Wood\"]\nmaterial_temp = 43.0\ndevice_temp = 23.0\n",
        )
        .unwrap();
        assert_eq!(
            spec,
            ExperimentSpec {
                name: "3-A".into(),
                ..base()
            }
        );
        assert_eq!(spec.train_config().epochs, 2000);
        assert_eq!(spec.augmentation_spec().multiplier, 100);
    }

    #[test]
    fn delta_t_resolves_to_device_temp() {
        let spec = ExperimentSpec {
            device_temp: None,
            delta_t: Some(-5.0),
            ..base()
        };
        assert_eq!(spec.resolved().unwrap().device_temp, Some(38.0));
        let both = ExperimentSpec {
            delta_t: Some(1.0),
            ..base()
        };
        assert!(
            matches!(both.validate(), Err(Error::Validation { field, .. }) if field == "device_temp")
        );
    }

    #[test]
    fn validation_names_the_field() {
        let cases: Vec<(&str, ExperimentSpec)> = vec![
            (
                "materials",
                ExperimentSpec {
                    materials: vec!["Copper".into()],
                    ..base()
                },
            ),
            (
                "material_temp",
                ExperimentSpec {
                    material_temp: -300.0,
                    ..base()
                },
            ),
            (
                "duration",
                ExperimentSpec {
                    duration: 0.0,
                    ..base()
                },
            ),
            (
                "test_fraction",
                ExperimentSpec {
                    test_fraction: 1.0,
                    ..base()
                },
            ),
            (
                "augmentation.noise_sigma",
                ExperimentSpec {
                    augmentation: AugmentationSettings {
                        noise_sigma: -1.0,
                        ..Default::default()
                    },
                    ..base()
                },
            ),
            (
                "training.epochs",
                ExperimentSpec {
                    training: TrainingSettings {
                        epochs: 0,
                        ..Default::default()
                    },
                    ..base()
                },
            ),
        ];
        for (want, spec) in cases {
            match spec.validate() {
                Err(Error::Validation { field, .. }) => assert_eq!(field, want),
                other => panic!("{want}: {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentSpec::from_toml_str(
            "name = \"x\"\nmaterials = [\"Copper\", \"Wood\"]\nmaterial_temp = 43.0\ndevice_temp = 23.0\nsigma = 1\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("sigma"), "{err}");
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let s = base().seeds();
        assert!(s.split != s.augmentation && s.augmentation != s.training);
        assert_eq!(s, base().seeds());
        assert_ne!(s, ExperimentSpec { seed: 1, ..base() }.seeds());
    }

    #[test]
    fn summary_round_trips_to_the_same_spec() {
        let mut spec = base();
        spec.training = TrainingSettings {
            hidden_size: 4,
            epochs: 3,
            batch_size: 50,
            ..Default::default()
        };
        spec.augmentation.multiplier = 10;
        spec.duration = 1.0;
        let out = run_experiment(&spec, &MaterialDb::bundled(), &ThermalProps::water()).unwrap();
        let summary = out.summary_toml();
        assert!(summary.starts_with("[result]"));
        let reloaded = ExperimentSpec::from_toml_str(&summary).unwrap();
        assert_eq!(reloaded, out.spec);
        let again =
            run_experiment(&reloaded, &MaterialDb::bundled(), &ThermalProps::water()).unwrap();
        assert_eq!(again.summary_toml(), summary);
        assert_eq!(again.confusion.to_csv(), out.confusion.to_csv());
    }

    #[test]
    fn case_letters() {
        assert_eq!(case_letter(0), "A");
        assert_eq!(case_letter(4), "E");
        assert_eq!(case_letter(25), "Z");
        assert_eq!(case_letter(26), "AA");
    }

    #[test]
    fn flux_surface_rows() {
        let db = MaterialDb::bundled();
        let names: Vec<String> = db.records().iter().map(|r| r.name.clone()).collect();
        let rows = flux_surface(
            &names,
            &[0.0, 5.0, 10.0],
            &[1e-4, 4e-4],
            10.0,
            23.0,
            &db,
            &ThermalProps::water(),
        )
        .unwrap();
        assert_eq!(rows.len(), 5 * 3 * 2);
        for r in rows.iter().filter(|r| r.delta_t == 0.0) {
            assert_eq!(r.q_device, 0.0);
            assert_eq!(r.surface_temp, 23.0);
        }
        let q = |m: &str, dt: f64, a: f64| {
            rows.iter()
                .find(|r| r.material == m && r.delta_t == dt && r.area == a)
                .unwrap()
                .q_device
        };
        assert!(q("Copper", 10.0, 4e-4) > q("Wood", 10.0, 4e-4));
        assert!(q("Iron", 10.0, 4e-4) > q("Iron", 5.0, 4e-4));
        assert!(q("Iron", 10.0, 4e-4) > q("Iron", 10.0, 1e-4));
        let csv = flux_csv(&rows);
        assert!(csv.starts_with(
            "material,delta_t_c,area_m2,q_device_w,surface_temp_c\nCopper,0,0.0001,0,23\n"
        ));
    }
}
