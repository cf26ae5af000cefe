//! LSTM sequence classifier trained with backpropagation through time, plus
//! a nearest-centroid baseline.

pub mod checkpoint;
mod lstm;
mod metrics;
mod train;

pub use checkpoint::{load_model, save_model};
pub use lstm::{
    gradient_check, loss, loss_and_gradient, Batch, LstmModel, LstmParams, Normalization,
    GRADIENT_CHECK_STEP,
};
pub use metrics::{
    evaluate, evaluate_dataset, nearest_centroid_classify, nearest_centroid_dataset,
    ConfusionMatrix,
};
pub use train::{
    train, train_with, TrainConfig, Trained, DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, DEFAULT_GRAD_CLIP,
    DEFAULT_HIDDEN_SIZE, DEFAULT_LEARNING_RATE, DEFAULT_WEIGHT_DECAY,
};
