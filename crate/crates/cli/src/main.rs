use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermotact::classifier::{self, TrainConfig};
use thermotact::episodes::{self, ContactConfig};
use thermotact::experiment::{self, ExperimentSpec};
use thermotact::materials::{self, MaterialDb};
use thermotact::thermal::ThermalProps;
use thermotact::{Error, Result};

/// Environment variable that overrides the default output directory.
const OUT_DIR_ENV: &str = "THERMOTACT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "thermotact",
    version,
    about = "Thermal contact simulation and material classification"
)]
struct Cli {
    /// Material database file (default: the bundled table).
    #[arg(long, global = true, value_name = "FILE")]
    db: Option<PathBuf>,

    /// Directory for outputs without an explicit path (overrides THERMOTACT_OUT_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one noise-free grasp trace and report the contact temperature.
    Simulate(SimulateArgs),
    /// Build an augmented train/test dataset from a spec file.
    GenDataset(GenDatasetArgs),
    /// Train an LSTM on a dataset file.
    Train(TrainArgs),
    /// Evaluate a trained model on a dataset's test split.
    Eval(EvalArgs),
    /// Accuracy versus device/material temperature difference.
    SweepDt(SweepArgs),
    /// Run one experiment spec end to end.
    Experiment(ExperimentArgs),
    /// Heat flow out of the device over a material × ΔT × area grid.
    FluxSurface(FluxArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    material: String,
    /// Material initial temperature [°C].
    #[arg(long, allow_negative_numbers = true)]
    material_temp: f64,
    /// Device initial temperature [°C].
    #[arg(long, allow_negative_numbers = true)]
    device_temp: f64,
    #[arg(long, default_value_t = episodes::DEFAULT_DURATION)]
    duration: f64,
    #[arg(long, default_value_t = episodes::DEFAULT_SAMPLE_RATE)]
    sample_rate: f64,
    /// Sensor depth below the device surface [m].
    #[arg(long, default_value_t = episodes::DEFAULT_SENSOR_DEPTH)]
    sensor_depth: f64,
    /// Trace CSV path; written to standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenDatasetArgs {
    spec: PathBuf,
    /// Dataset path (default: <out-dir>/dataset.json).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Checkpoint path (default: <out-dir>/model.bin).
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = classifier::DEFAULT_HIDDEN_SIZE)]
    hidden_size: usize,
    #[arg(long, default_value_t = classifier::DEFAULT_BATCH_SIZE)]
    batch_size: usize,
    #[arg(long, default_value_t = classifier::DEFAULT_EPOCHS)]
    epochs: usize,
    #[arg(long, default_value_t = classifier::DEFAULT_LEARNING_RATE)]
    learning_rate: f64,
    #[arg(long, default_value_t = classifier::DEFAULT_GRAD_CLIP)]
    grad_clip: f64,
    #[arg(long, default_value_t = classifier::DEFAULT_WEIGHT_DECAY)]
    weight_decay: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    dataset: PathBuf,
    /// Confusion matrix CSV (default: <out-dir>/confusion.csv).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Base experiment spec; its device temperature is replaced per ΔT.
    spec: PathBuf,
    /// Temperature differences [°C], comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 5.0, 10.0, 15.0, 20.0])]
    delta_t: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
    seeds: Vec<u64>,
    /// Put the device above the material temperature instead of below.
    #[arg(long)]
    heated_device: bool,
    #[arg(long, default_value = "2")]
    case_prefix: String,
    /// Table path (default: <out-dir>/sweep_dt.csv).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    spec: PathBuf,
}

#[derive(Args)]
struct FluxArgs {
    /// Material names, comma separated (default: every material in the database).
    #[arg(long, value_delimiter = ',')]
    materials: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 5.0, 10.0, 15.0, 20.0])]
    delta_t: Vec<f64>,
    /// Contact areas [m²].
    #[arg(long, value_delimiter = ',', default_values_t = [1e-4, 2e-4, 3e-4, 4e-4])]
    area: Vec<f64>,
    /// Time after contact [s].
    #[arg(long, default_value_t = 10.0)]
    time: f64,
    #[arg(long, default_value_t = 23.0, allow_negative_numbers = true)]
    material_temp: f64,
    /// Grid path (default: <out-dir>/flux_surface.csv).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

struct Ctx {
    db: MaterialDb,
    device: ThermalProps,
    out_dir: Option<PathBuf>,
}

impl Ctx {
    fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    fn output(&self, explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
        explicit.unwrap_or_else(|| self.out_dir().join(default_name))
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn simulate(ctx: &Ctx, a: SimulateArgs) -> Result<()> {
    let cfg = ContactConfig {
        material: a.material,
        material_temp: a.material_temp,
        device_temp: a.device_temp,
        sensor_depth: a.sensor_depth,
        duration: a.duration,
        sample_rate: a.sample_rate,
        area: episodes::DEFAULT_AREA,
    };
    let trace = episodes::synthesize_episode(&cfg, &ctx.db, &ctx.device)?;
    match a.out {
        Some(path) => {
            write(&path, trace.to_csv())?;
            println!("material={}", trace.label);
            println!("surface_temp_c={}", trace.meta.surface_temp);
            println!("gamma={}", trace.meta.gamma);
            println!("wrote {}", path.display());
        }
        None => print!("{}", trace.to_csv()),
    }
    Ok(())
}

fn gen_dataset(ctx: &Ctx, a: GenDatasetArgs) -> Result<()> {
    let spec = ExperimentSpec::load(&a.spec)?;
    let ds = experiment::build_experiment_dataset(&spec, &ctx.db, &ctx.device)?;
    let path = a
        .out
        .unwrap_or_else(|| spec.output_dir(ctx.out_dir.as_deref()).join("dataset.json"));
    write(&path, episodes::dataset_to_json(&ds)?)?;
    println!(
        "{} classes, {} train / {} test traces -> {}",
        ds.class_names.len(),
        ds.train.len(),
        ds.test.len(),
        path.display()
    );
    Ok(())
}

fn train(ctx: &Ctx, a: TrainArgs) -> Result<()> {
    let ds = episodes::load_dataset(&a.dataset)?;
    let cfg = TrainConfig {
        hidden_size: a.hidden_size,
        batch_size: a.batch_size,
        epochs: a.epochs,
        learning_rate: a.learning_rate,
        grad_clip: a.grad_clip,
        weight_decay: a.weight_decay,
        seed: a.seed,
    };
    let out = classifier::train(&ds, &cfg)?;
    let path = ctx.output(a.out, "model.bin");
    write(&path, classifier::checkpoint::to_bytes(&out.model))?;
    println!(
        "loss {:.6} -> {:.6} over {} epochs; model -> {}",
        out.loss_history[0],
        out.loss_history[out.loss_history.len() - 1],
        cfg.epochs,
        path.display()
    );
    Ok(())
}

fn eval(ctx: &Ctx, a: EvalArgs) -> Result<()> {
    let model = classifier::load_model(&a.model)?;
    let ds = episodes::load_dataset(&a.dataset)?;
    let cm = classifier::evaluate_dataset(&model, &ds)?;
    let path = ctx.output(a.out, "confusion.csv");
    write(&path, cm.to_csv())?;
    println!(
        "accuracy_pct={:.2} ({}/{})",
        cm.accuracy_pct(),
        cm.correct(),
        cm.total()
    );
    Ok(())
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<()> {
    let spec = ExperimentSpec::load(&a.spec)?;
    println!("{}", experiment::SWEEP_CSV_HEADER);
    let rows = experiment::sweep_dt(
        &spec,
        &a.delta_t,
        &a.seeds,
        a.heated_device,
        &a.case_prefix,
        &ctx.db,
        &ctx.device,
        |r| println!("{}", experiment::sweep_row_csv(r)),
    )?;
    let path = ctx.output(a.out, "sweep_dt.csv");
    write(&path, experiment::sweep_csv(&rows))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_experiment(ctx: &Ctx, a: ExperimentArgs) -> Result<()> {
    let spec = ExperimentSpec::load(&a.spec)?;
    let out = experiment::run_experiment(&spec, &ctx.db, &ctx.device)?;
    let dir = spec.output_dir(ctx.out_dir.as_deref());
    write(&dir.join("confusion.csv"), out.confusion.to_csv())?;
    write(&dir.join("summary.toml"), out.summary_toml())?;
    write(&dir.join("loss.csv"), out.loss_csv())?;
    write(
        &dir.join("model.bin"),
        classifier::checkpoint::to_bytes(&out.model),
    )?;
    println!(
        "{}: accuracy_pct={:.2} ({}/{}), centroid_accuracy_pct={:.2}; outputs in {}",
        out.spec.name,
        out.accuracy_pct(),
        out.confusion.correct(),
        out.confusion.total(),
        out.baseline.accuracy_pct(),
        dir.display()
    );
    Ok(())
}

fn flux(ctx: &Ctx, a: FluxArgs) -> Result<()> {
    let materials = if a.materials.is_empty() {
        ctx.db.records().iter().map(|r| r.name.clone()).collect()
    } else {
        a.materials
    };
    let rows = experiment::flux_surface(
        &materials,
        &a.delta_t,
        &a.area,
        a.time,
        a.material_temp,
        &ctx.db,
        &ctx.device,
    )?;
    let path = ctx.output(a.out, "flux_surface.csv");
    write(&path, experiment::flux_csv(&rows))?;
    println!("{} rows -> {}", rows.len(), path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let db = match &cli.db {
        Some(path) => materials::load_db(path)?,
        None => MaterialDb::bundled(),
    };
    let out_dir = cli.out_dir.or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    let ctx = Ctx {
        db,
        device: ThermalProps::water(),
        out_dir,
    };
    match cli.command {
        Command::Simulate(a) => simulate(&ctx, a),
        Command::GenDataset(a) => gen_dataset(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::SweepDt(a) => sweep(&ctx, a),
        Command::Experiment(a) => run_experiment(&ctx, a),
        Command::FluxSurface(a) => flux(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
