use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::lstm::LstmModel;
use crate::episodes::{Dataset, TemperatureTrace};
use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub class_names: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(class_names: Vec<String>) -> Self {
        let n = class_names.len();
        Self {
            class_names,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn from_predictions(
        class_names: Vec<String>,
        truth: &[usize],
        predicted: &[usize],
    ) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::invalid(
                "predictions",
                "truth and prediction lengths differ",
            ));
        }
        let mut m = Self::new(class_names);
        for (&t, &p) in truth.iter().zip(predicted) {
            m.record(t, p)?;
        }
        Ok(m)
    }

    pub fn record(&mut self, truth: usize, predicted: usize) -> Result<()> {
        let n = self.class_names.len();
        if truth >= n || predicted >= n {
            return Err(Error::ClassMismatch(format!(
                "class index out of range for {n} classes"
            )));
        }
        self.counts[truth][predicted] += 1;
        Ok(())
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.num_classes()).map(|k| self.counts[k][k]).sum()
    }

    /// Fraction in [0, 1]; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.correct() as f64 / n as f64,
        }
    }

    pub fn accuracy_pct(&self) -> f64 {
        100.0 * self.accuracy()
    }

    pub fn row_total(&self, k: usize) -> u64 {
        self.counts[k].iter().sum()
    }

    /// `true\predicted,<class>...` header, then one row per true class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for c in &self.class_names {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (c, row) in self.class_names.iter().zip(&self.counts) {
            out.push_str(c);
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn truth_indices(class_names: &[String], traces: &[TemperatureTrace]) -> Result<Vec<usize>> {
    traces
        .iter()
        .map(|t| {
            class_names
                .iter()
                .position(|c| c == &t.label)
                .ok_or_else(|| {
                    Error::ClassMismatch(format!(
                        "trace label {:?} is not one of {class_names:?}",
                        t.label
                    ))
                })
        })
        .collect()
}

/// Confusion matrix of `model` on `traces`.
pub fn evaluate(model: &LstmModel, traces: &[TemperatureTrace]) -> Result<ConfusionMatrix> {
    let truth = truth_indices(&model.class_names, traces)?;
    let refs: Vec<&TemperatureTrace> = traces.iter().collect();
    let predicted = if refs.is_empty() {
        Vec::new()
    } else {
        model.predict(&refs)?
    };
    ConfusionMatrix::from_predictions(model.class_names.clone(), &truth, &predicted)
}

/// [`evaluate`] on the test split, after checking the dataset's classes match the model's.
pub fn evaluate_dataset(model: &LstmModel, ds: &Dataset) -> Result<ConfusionMatrix> {
    if model.class_names != ds.class_names {
        return Err(Error::ClassMismatch(format!(
            "model classes {:?} differ from dataset classes {:?}",
            model.class_names, ds.class_names
        )));
    }
    evaluate(model, &ds.test)
}

/// Assigns each test trace the class whose mean training trace is nearest in
/// Euclidean distance.
pub fn nearest_centroid_classify(
    class_names: &[String],
    train: &[TemperatureTrace],
    test: &[TemperatureTrace],
) -> Result<ConfusionMatrix> {
    let len = train.first().map_or(0, |t| t.len());
    if train.iter().chain(test).any(|t| t.len() != len) {
        return Err(Error::invalid(
            "traces",
            "all traces must have equal length",
        ));
    }
    let train_truth = truth_indices(class_names, train)?;
    let mut centroids = vec![vec![0.0; len]; class_names.len()];
    let mut counts = vec![0usize; class_names.len()];
    for (t, &k) in train.iter().zip(&train_truth) {
        counts[k] += 1;
        for (c, v) in centroids[k].iter_mut().zip(&t.samples) {
            *c += v;
        }
    }
    for (c, &n) in centroids.iter_mut().zip(&counts) {
        if n > 0 {
            c.iter_mut().for_each(|v| *v /= n as f64);
        }
    }
    let present: Vec<usize> = (0..class_names.len()).filter(|&k| counts[k] > 0).collect();
    let truth = truth_indices(class_names, test)?;
    let predicted: Vec<usize> = test
        .iter()
        .map(|t| {
            let dist = |k: usize| -> f64 {
                centroids[k]
                    .iter()
                    .zip(&t.samples)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum()
            };
            let mut best = present[0];
            for &k in &present[1..] {
                if dist(k) < dist(best) {
                    best = k;
                }
            }
            best
        })
        .collect();
    ConfusionMatrix::from_predictions(class_names.to_vec(), &truth, &predicted)
}

pub fn nearest_centroid_dataset(ds: &Dataset) -> Result<ConfusionMatrix> {
    nearest_centroid_classify(&ds.class_names, &ds.train, &ds.test)
}
