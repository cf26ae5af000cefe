use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::episodes::TemperatureTrace;
use crate::error::{Error, Result};

/// Scalar z-normalization applied to every temperature before it enters the network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub mean: f64,
    pub std: f64,
}

impl Normalization {
    pub const IDENTITY: Self = Self {
        mean: 0.0,
        std: 1.0,
    };

    /// Population mean and standard deviation over every sample of every trace.
    /// A constant input gets unit scale.
    pub fn fit(traces: &[&TemperatureTrace]) -> Result<Self> {
        let n: usize = traces.iter().map(|t| t.len()).sum();
        if n == 0 {
            return Err(Error::invalid("dataset", "no samples to normalize"));
        }
        let samples = || traces.iter().flat_map(|t| t.samples.iter().copied());
        let mean = samples().sum::<f64>() / n as f64;
        let var = samples().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let std = if var > 0.0 { var.sqrt() } else { 1.0 };
        Ok(Self { mean, std })
    }

    pub fn apply(&self, v: f64) -> f64 {
        (v - self.mean) / self.std
    }
}

/// All trainable weights. Gate blocks are laid out `[input, forget, cell, output]`
/// along the `4·hidden` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    /// Input-to-gate weights, `4H` (the input is one temperature channel).
    pub w_x: Array1<f64>,
    /// Hidden-to-gate weights, `H × 4H`.
    pub w_h: Array2<f64>,
    /// Gate biases, `4H`.
    pub b: Array1<f64>,
    /// Readout weights, `H × C`.
    pub w_y: Array2<f64>,
    /// Readout bias, `C`.
    pub b_y: Array1<f64>,
}

impl LstmParams {
    pub fn zeros(hidden: usize, classes: usize) -> Self {
        Self {
            w_x: Array1::zeros(4 * hidden),
            w_h: Array2::zeros((hidden, 4 * hidden)),
            b: Array1::zeros(4 * hidden),
            w_y: Array2::zeros((hidden, classes)),
            b_y: Array1::zeros(classes),
        }
    }

    /// Uniform(−k, k) with k = 1/√H everywhere, forget-gate bias 1, readout bias 0.
    pub fn init<R: Rng>(hidden: usize, classes: usize, rng: &mut R) -> Self {
        let k = 1.0 / (hidden as f64).sqrt();
        let mut p = Self::zeros(hidden, classes);
        for v in p
            .w_x
            .iter_mut()
            .chain(p.w_h.iter_mut())
            .chain(p.b.iter_mut())
            .chain(p.w_y.iter_mut())
        {
            *v = rng.random_range(-k..k);
        }
        p.b.slice_mut(ndarray::s![hidden..2 * hidden]).fill(1.0);
        p
    }

    pub fn hidden_size(&self) -> usize {
        self.w_h.nrows()
    }

    pub fn num_classes(&self) -> usize {
        self.b_y.len()
    }

    pub fn len(&self) -> usize {
        self.blocks().iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameter blocks in checkpoint order.
    pub fn blocks(&self) -> [&[f64]; 5] {
        [
            self.w_x.as_slice().expect("standard layout"),
            self.w_h.as_slice().expect("standard layout"),
            self.b.as_slice().expect("standard layout"),
            self.w_y.as_slice().expect("standard layout"),
            self.b_y.as_slice().expect("standard layout"),
        ]
    }

    pub fn blocks_mut(&mut self) -> [&mut [f64]; 5] {
        [
            self.w_x.as_slice_mut().expect("standard layout"),
            self.w_h.as_slice_mut().expect("standard layout"),
            self.b.as_slice_mut().expect("standard layout"),
            self.w_y.as_slice_mut().expect("standard layout"),
            self.b_y.as_slice_mut().expect("standard layout"),
        ]
    }

    pub fn norm(&self) -> f64 {
        self.blocks()
            .iter()
            .flat_map(|b| b.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.blocks()
            .iter()
            .all(|b| b.iter().all(|v| v.is_finite()))
    }

    pub(crate) fn get(&self, mut idx: usize) -> f64 {
        for b in self.blocks() {
            if idx < b.len() {
                return b[idx];
            }
            idx -= b.len();
        }
        panic!("parameter index out of range")
    }

    pub(crate) fn set(&mut self, mut idx: usize, v: f64) {
        for b in self.blocks_mut() {
            if idx < b.len() {
                b[idx] = v;
                return;
            }
            idx -= b.len();
        }
        panic!("parameter index out of range")
    }
}

/// Single-layer LSTM with a linear softmax readout on the last hidden state.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub params: LstmParams,
    pub class_names: Vec<String>,
    pub normalization: Normalization,
}

impl LstmModel {
    pub fn new<R: Rng>(
        hidden: usize,
        class_names: Vec<String>,
        normalization: Normalization,
        rng: &mut R,
    ) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::invalid("hidden_size", "must be >= 1"));
        }
        if class_names.is_empty() {
            return Err(Error::invalid("class_names", "need at least one class"));
        }
        let params = LstmParams::init(hidden, class_names.len(), rng);
        Ok(Self {
            params,
            class_names,
            normalization,
        })
    }

    pub fn hidden_size(&self) -> usize {
        self.params.hidden_size()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == label)
    }

    /// Normalized inputs and class indices for a set of equal-length traces.
    pub fn batch(&self, traces: &[&TemperatureTrace]) -> Result<Batch> {
        let first = traces
            .first()
            .ok_or_else(|| Error::invalid("batch", "no traces"))?;
        let steps = first.len();
        if steps == 0 {
            return Err(Error::invalid("trace", "empty trace"));
        }
        let mut inputs = Array2::zeros((traces.len(), steps));
        let mut labels = Vec::with_capacity(traces.len());
        for (r, t) in traces.iter().enumerate() {
            if t.len() != steps {
                return Err(Error::invalid(
                    "trace",
                    format!("length {} differs from {steps}", t.len()),
                ));
            }
            let k = self.class_index(&t.label).ok_or_else(|| {
                Error::ClassMismatch(format!("label {:?} not known to the model", t.label))
            })?;
            labels.push(k);
            for (dst, &v) in inputs.row_mut(r).iter_mut().zip(&t.samples) {
                *dst = self.normalization.apply(v);
            }
        }
        Ok(Batch { inputs, labels })
    }

    /// Class probabilities for one trace.
    pub fn forward(&self, trace: &TemperatureTrace) -> Result<Vec<f64>> {
        if trace.is_empty() {
            return Err(Error::invalid("trace", "empty trace"));
        }
        let row: Vec<f64> = trace
            .samples
            .iter()
            .map(|&v| self.normalization.apply(v))
            .collect();
        let inputs = Array2::from_shape_vec((1, row.len()), row).expect("shape");
        Ok(self.probabilities(inputs.view()).row(0).to_vec())
    }

    /// Row-wise class probabilities for already normalized inputs (`B × T`).
    pub fn probabilities(&self, inputs: ArrayView2<f64>) -> Array2<f64> {
        let mut logits = unroll(&self.params, inputs, &mut Workspace::default());
        softmax_rows(&mut logits);
        logits
    }

    pub fn predict(&self, traces: &[&TemperatureTrace]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(traces.len());
        for chunk in traces.chunks(256) {
            let steps = chunk[0].len();
            if steps == 0 {
                return Err(Error::invalid("trace", "empty trace"));
            }
            let mut inputs = Array2::zeros((chunk.len(), steps));
            for (r, t) in chunk.iter().enumerate() {
                if t.len() != steps {
                    return Err(Error::invalid(
                        "trace",
                        format!("length {} differs from {steps}", t.len()),
                    ));
                }
                for (dst, &v) in inputs.row_mut(r).iter_mut().zip(&t.samples) {
                    *dst = self.normalization.apply(v);
                }
            }
            let probs = self.probabilities(inputs.view());
            out.extend(
                probs
                    .rows()
                    .into_iter()
                    .map(|r| argmax(r.as_slice().expect("row"))),
            );
        }
        Ok(out)
    }
}

/// Normalized inputs `B × T` with one class index per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub inputs: Array2<f64>,
    pub labels: Vec<usize>,
}

impl Batch {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn softmax_rows(m: &mut Array2<f64>) {
    for mut row in m.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let s = row.sum();
        row.mapv_inplace(|v| v / s);
    }
}

/// Forward-pass activations kept for BPTT. Buffers are reused between calls
/// with the same batch shape.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    /// `h[t]`, `c[t]` are the states before step `t`; index `T` is the final state.
    h: Vec<Array2<f64>>,
    c: Vec<Array2<f64>>,
    /// `tanh(c[t])`.
    tc: Vec<Array2<f64>>,
    /// Activated gates of step `t`, `B × 4H`.
    gates: Vec<Array2<f64>>,
}

impl Workspace {
    fn prepare(&mut self, batch: usize, hidden: usize, steps: usize) {
        if self.h.len() == steps + 1 && self.h[0].dim() == (batch, hidden) {
            self.h[0].fill(0.0);
            self.c[0].fill(0.0);
            return;
        }
        let states = || {
            (0..=steps)
                .map(|_| Array2::zeros((batch, hidden)))
                .collect::<Vec<_>>()
        };
        self.h = states();
        self.c = states();
        self.tc = states();
        self.gates = (0..steps)
            .map(|_| Array2::zeros((batch, 4 * hidden)))
            .collect();
    }
}

/// Runs the recurrence over `inputs` (`B × T`) and returns the readout logits.
fn unroll(p: &LstmParams, inputs: ArrayView2<f64>, ws: &mut Workspace) -> Array2<f64> {
    let (batch, steps) = inputs.dim();
    let hs = p.hidden_size();
    ws.prepare(batch, hs, steps);
    let w_x = p.w_x.as_slice().expect("layout");
    let bias = p.b.as_slice().expect("layout");
    for t in 0..steps {
        let z = &mut ws.gates[t];
        for (r, mut row) in z.rows_mut().into_iter().enumerate() {
            let x = inputs[[r, t]];
            for ((zv, &bv), &wv) in row.iter_mut().zip(bias).zip(w_x) {
                *zv = bv + x * wv;
            }
        }
        general_mat_mul(1.0, &ws.h[t], &p.w_h, 1.0, z);
        let zs = z.as_slice_mut().expect("layout");
        let (c_done, c_next) = ws.c.split_at_mut(t + 1);
        let cs = c_done[t].as_slice().expect("layout");
        let cn = c_next[0].as_slice_mut().expect("layout");
        let hn = ws.h[t + 1].as_slice_mut().expect("layout");
        let tn = ws.tc[t + 1].as_slice_mut().expect("layout");
        for r in 0..batch {
            let g = &mut zs[r * 4 * hs..(r + 1) * 4 * hs];
            for v in &mut g[..2 * hs] {
                *v = sigmoid(*v);
            }
            for v in &mut g[2 * hs..3 * hs] {
                *v = v.tanh();
            }
            for v in &mut g[3 * hs..] {
                *v = sigmoid(*v);
            }
            for j in 0..hs {
                let idx = r * hs + j;
                let cv = g[hs + j] * cs[idx] + g[j] * g[2 * hs + j];
                let tc = cv.tanh();
                cn[idx] = cv;
                tn[idx] = tc;
                hn[idx] = g[3 * hs + j] * tc;
            }
        }
    }
    let mut logits = Array2::<f64>::zeros((batch, p.num_classes()));
    general_mat_mul(1.0, &ws.h[steps], &p.w_y, 0.0, &mut logits);
    logits += &p.b_y;
    logits
}

/// Mean softmax cross-entropy of `batch` times `scale`, and its gradient.
pub fn loss_and_gradient(p: &LstmParams, batch: &Batch, scale: f64) -> (f64, LstmParams) {
    loss_and_gradient_in(p, batch, scale, &mut Workspace::default())
}

pub(crate) fn loss_and_gradient_in(
    p: &LstmParams,
    batch: &Batch,
    scale: f64,
    ws: &mut Workspace,
) -> (f64, LstmParams) {
    let (b, steps) = batch.inputs.dim();
    let hs = p.hidden_size();
    let mut probs = unroll(p, batch.inputs.view(), ws);
    softmax_rows(&mut probs);

    let mut loss = 0.0;
    for (r, &k) in batch.labels.iter().enumerate() {
        loss -= probs[[r, k]].max(f64::MIN_POSITIVE).ln();
    }
    loss *= scale / b as f64;

    let mut dlogits = probs;
    for (r, &k) in batch.labels.iter().enumerate() {
        dlogits[[r, k]] -= 1.0;
    }
    dlogits *= scale / b as f64;

    let mut g = LstmParams::zeros(hs, p.num_classes());
    general_mat_mul(1.0, &ws.h[steps].t(), &dlogits, 0.0, &mut g.w_y);
    g.b_y = dlogits.sum_axis(Axis(0));
    let mut dh = Array2::<f64>::zeros((b, hs));
    general_mat_mul(1.0, &dlogits, &p.w_y.t(), 0.0, &mut dh);
    let mut dc = Array2::<f64>::zeros((b, hs));
    let mut dz = Array2::<f64>::zeros((b, 4 * hs));
    for t in (0..steps).rev() {
        {
            let gates = ws.gates[t].as_slice().expect("layout");
            let c_prev = ws.c[t].as_slice().expect("layout");
            let tanh_c = ws.tc[t + 1].as_slice().expect("layout");
            let dhs = dh.as_slice().expect("layout");
            let dcs = dc.as_slice_mut().expect("layout");
            let dzs = dz.as_slice_mut().expect("layout");
            for r in 0..b {
                let gr = &gates[r * 4 * hs..(r + 1) * 4 * hs];
                let dzr = &mut dzs[r * 4 * hs..(r + 1) * 4 * hs];
                for j in 0..hs {
                    let (i, f, gg, o) = (gr[j], gr[hs + j], gr[2 * hs + j], gr[3 * hs + j]);
                    let idx = r * hs + j;
                    let tc = tanh_c[idx];
                    let dhv = dhs[idx];
                    let dct = dcs[idx] + dhv * o * (1.0 - tc * tc);
                    dzr[j] = dct * gg * i * (1.0 - i);
                    dzr[hs + j] = dct * c_prev[idx] * f * (1.0 - f);
                    dzr[2 * hs + j] = dct * i * (1.0 - gg * gg);
                    dzr[3 * hs + j] = dhv * tc * o * (1.0 - o);
                    dcs[idx] = dct * f;
                }
            }
        }
        general_mat_mul(1.0, &ws.h[t].t(), &dz, 1.0, &mut g.w_h);
        {
            let gx = g.w_x.as_slice_mut().expect("layout");
            let gb = g.b.as_slice_mut().expect("layout");
            for (r, row) in dz.rows().into_iter().enumerate() {
                let x = batch.inputs[[r, t]];
                for ((gxv, gbv), &d) in gx.iter_mut().zip(gb.iter_mut()).zip(row.iter()) {
                    *gxv += x * d;
                    *gbv += d;
                }
            }
        }
        if t > 0 {
            general_mat_mul(1.0, &dz, &p.w_h.t(), 0.0, &mut dh);
        }
    }
    (loss, g)
}

/// Mean softmax cross-entropy of `batch`.
pub fn loss(p: &LstmParams, batch: &Batch) -> f64 {
    let mut probs = unroll(p, batch.inputs.view(), &mut Workspace::default());
    softmax_rows(&mut probs);
    let mut loss = 0.0;
    for (r, &k) in batch.labels.iter().enumerate() {
        loss -= probs[[r, k]].max(f64::MIN_POSITIVE).ln();
    }
    loss / batch.len() as f64
}

pub const GRADIENT_CHECK_STEP: f64 = 1e-5;
const GRADIENT_CHECK_FLOOR: f64 = 1e-6;

/// Largest relative disagreement between the BPTT gradient and central
/// differences, `|a − fd| / (|a| + |fd| + 1e-6)`, over every parameter.
pub fn gradient_check(model: &LstmModel, batch: &Batch) -> f64 {
    let (_, analytic) = loss_and_gradient(&model.params, batch, 1.0);
    let mut p = model.params.clone();
    let mut worst: f64 = 0.0;
    for idx in 0..p.len() {
        let orig = p.get(idx);
        p.set(idx, orig + GRADIENT_CHECK_STEP);
        let up = loss(&p, batch);
        p.set(idx, orig - GRADIENT_CHECK_STEP);
        let down = loss(&p, batch);
        p.set(idx, orig);
        let fd = (up - down) / (2.0 * GRADIENT_CHECK_STEP);
        let a = analytic.get(idx);
        worst = worst.max((a - fd).abs() / (a.abs() + fd.abs() + GRADIENT_CHECK_FLOOR));
    }
    worst
}
