use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lstm::{loss_and_gradient_in, Batch, LstmModel, Normalization, Workspace};
use crate::episodes::{shuffle, Dataset, TemperatureTrace};
use crate::error::{Error, Result};

pub const DEFAULT_HIDDEN_SIZE: usize = 32;
pub const DEFAULT_BATCH_SIZE: usize = 100;
pub const DEFAULT_EPOCHS: usize = 2000;
pub const DEFAULT_LEARNING_RATE: f64 = 0.05;
pub const DEFAULT_GRAD_CLIP: f64 = 5.0;
pub const DEFAULT_WEIGHT_DECAY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Global gradient-norm ceiling applied before every update.
    pub grad_clip: f64,
    /// L2 penalty on the weight matrices (not the biases).
    pub weight_decay: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_size: DEFAULT_HIDDEN_SIZE,
            batch_size: DEFAULT_BATCH_SIZE,
            epochs: DEFAULT_EPOCHS,
            learning_rate: DEFAULT_LEARNING_RATE,
            grad_clip: DEFAULT_GRAD_CLIP,
            weight_decay: DEFAULT_WEIGHT_DECAY,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_size == 0 {
            return Err(Error::invalid("hidden_size", "must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::invalid("batch_size", "must be >= 1"));
        }
        if self.epochs == 0 {
            return Err(Error::invalid("epochs", "must be >= 1"));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::invalid(
                "learning_rate",
                format!("must be > 0, got {}", self.learning_rate),
            ));
        }
        if !(self.grad_clip > 0.0) {
            return Err(Error::invalid(
                "grad_clip",
                format!("must be > 0, got {}", self.grad_clip),
            ));
        }
        if !(self.weight_decay >= 0.0) || !self.weight_decay.is_finite() {
            return Err(Error::invalid(
                "weight_decay",
                format!("must be >= 0, got {}", self.weight_decay),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub model: LstmModel,
    /// Mean training loss of each epoch.
    pub loss_history: Vec<f64>,
}

/// Indices of `w_x`, `w_h` and `w_y` in [`LstmParams::blocks`](super::LstmParams::blocks).
const WEIGHT_BLOCKS: [usize; 3] = [0, 1, 3];

/// Mini-batch SGD with gradient-norm clipping and optional weight decay on the training split.
///
/// Initialization draws from stream 0 of `ChaCha8(seed)` and batch order from
/// stream 1, so a run is fully determined by the dataset and `cfg`.
pub fn train(ds: &Dataset, cfg: &TrainConfig) -> Result<Trained> {
    train_with(ds, cfg, |_, _| {})
}

/// Like [`train`], calling `on_epoch(epoch, loss)` after every epoch.
pub fn train_with(
    ds: &Dataset,
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(usize, f64),
) -> Result<Trained> {
    cfg.validate()?;
    if ds.train.is_empty() {
        return Err(Error::invalid("dataset", "training split is empty"));
    }
    let traces: Vec<&TemperatureTrace> = ds.train.iter().collect();
    let norm = Normalization::fit(&traces)?;

    let mut init_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = LstmModel::new(cfg.hidden_size, ds.class_names.clone(), norm, &mut init_rng)?;
    let all = model.batch(&traces)?;

    let mut order_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    order_rng.set_stream(1);
    let mut order: Vec<usize> = (0..traces.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut ws = Workspace::default();
    for epoch in 0..cfg.epochs {
        shuffle(&mut order, &mut order_rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch = Batch {
                inputs: all.inputs.select(ndarray::Axis(0), chunk),
                labels: chunk.iter().map(|&i| all.labels[i]).collect(),
            };
            let (loss, mut grad) = loss_and_gradient_in(&model.params, &batch, 1.0, &mut ws);
            if !loss.is_finite() {
                return Err(Error::Numerical(format!(
                    "training loss became {loss} in epoch {}",
                    epoch + 1
                )));
            }
            epoch_loss += loss * chunk.len() as f64;
            let norm = grad.norm();
            let step = if norm > cfg.grad_clip {
                cfg.learning_rate * cfg.grad_clip / norm
            } else {
                cfg.learning_rate
            };
            for (k, (p, g)) in model
                .params
                .blocks_mut()
                .into_iter()
                .zip(grad.blocks_mut())
                .enumerate()
            {
                let decay = if WEIGHT_BLOCKS.contains(&k) {
                    1.0 - cfg.learning_rate * cfg.weight_decay
                } else {
                    1.0
                };
                for (pv, gv) in p.iter_mut().zip(g.iter()) {
                    *pv = decay * *pv - step * gv;
                }
            }
        }
        if !model.params.all_finite() {
            return Err(Error::Numerical(format!(
                "non-finite parameter after epoch {}",
                epoch + 1
            )));
        }
        let mean = epoch_loss / traces.len() as f64;
        on_epoch(epoch, mean);
        history.push(mean);
    }
    Ok(Trained {
        model,
        loss_history: history,
    })
}
