//! Linear softmax classifier trained by gradient descent under the gated
//! composite loss.

use super::loss::{fagc_loss, gate, LossConfig};
use crate::dataset::LabeledDataset;
use crate::error::{FagcError, Result};
use crate::preshape::PreShape;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Real examples per step; `None` trains full-batch.
    pub batch_size: Option<usize>,
    /// Augmented examples per gated step; `None` matches the real batch.
    pub augmented_batch_size: Option<usize>,
    /// Seed for real-batch shuffling and augmented-batch selection.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            epochs: 200,
            batch_size: None,
            augmented_batch_size: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxModel {
    labels: Vec<String>,
    dim: usize,
    /// Row-major `labels.len() x dim`.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

/// Per-step record of a training run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainTrace {
    /// Composite loss per step.
    pub loss: Vec<f64>,
    /// Real-batch cross-entropy per step.
    pub real_loss: Vec<f64>,
    pub gates: Vec<u8>,
}

impl SoftmaxModel {
    pub fn zeros(labels: Vec<String>, dim: usize) -> Self {
        let c = labels.len();
        Self {
            labels,
            dim,
            weights: vec![0.0; c * dim],
            bias: vec![0.0; c],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut [f64] {
        &mut self.bias
    }

    /// Class probabilities for one input.
    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        let mut logits: Vec<f64> = self
            .weights
            .chunks_exact(self.dim)
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + b)
            .collect();
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        logits.iter_mut().for_each(|l| *l = (*l - max).exp());
        let total: f64 = logits.iter().sum();
        logits.iter_mut().for_each(|l| *l /= total);
        logits
    }

    pub fn predict(&self, x: &PreShape) -> &str {
        let p = self.probabilities(x.coords());
        let best = p
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > p[best] { i } else { best });
        &self.labels[best]
    }

    /// Mean cross-entropy over `(input, class index)` pairs and its gradient
    /// with respect to `(weights, bias)`.
    pub fn cross_entropy(&self, batch: &[(&[f64], usize)]) -> (f64, Vec<f64>, Vec<f64>) {
        let mut grad_w = vec![0.0; self.weights.len()];
        let mut grad_b = vec![0.0; self.bias.len()];
        if batch.is_empty() {
            return (0.0, grad_w, grad_b);
        }
        let scale = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        for &(x, y) in batch {
            let p = self.probabilities(x);
            loss -= p[y].max(f64::MIN_POSITIVE).ln();
            for (c, pc) in p.iter().enumerate() {
                let delta = (pc - f64::from(u8::from(c == y))) * scale;
                grad_b[c] += delta;
                grad_w[c * self.dim..(c + 1) * self.dim]
                    .iter_mut()
                    .zip(x)
                    .for_each(|(g, xi)| *g += delta * xi);
            }
        }
        (loss * scale, grad_w, grad_b)
    }

    fn step(&mut self, lr: f64, grad_w: &[f64], grad_b: &[f64]) {
        self.weights
            .iter_mut()
            .zip(grad_w)
            .for_each(|(w, g)| *w -= lr * g);
        self.bias
            .iter_mut()
            .zip(grad_b)
            .for_each(|(b, g)| *b -= lr * g);
    }
}

/// Trains on `real`, adding the augmented term on steps whose gate fires.
/// Weights start at zero. One σ is drawn per step whether or not
/// `augmented` is empty, so the gate sequence depends only on the seed.
pub fn train_softmax(
    real: &LabeledDataset,
    augmented: &LabeledDataset,
    loss_cfg: &LossConfig,
    train_cfg: &TrainConfig,
) -> Result<(SoftmaxModel, TrainTrace)> {
    loss_cfg.validate()?;
    if real.is_empty() {
        return Err(FagcError::EmptyTrainingSet);
    }
    real.check_compatible(augmented)?;
    let labels: Vec<String> = real.labels().iter().map(|l| l.to_string()).collect();
    let dim = real.dim().expect("non-empty");
    let index_of = |label: &str| {
        labels
            .iter()
            .position(|l| l == label)
            .expect("checked labels")
    };

    let real_rows: Vec<(&[f64], usize)> = real
        .iter()
        .map(|(l, m)| (m.shape.coords(), index_of(l)))
        .collect();
    let aug_rows: Vec<(&[f64], usize)> = augmented
        .iter()
        .map(|(l, m)| (m.shape.coords(), index_of(l)))
        .collect();

    let batch_size = train_cfg
        .batch_size
        .unwrap_or(real_rows.len())
        .clamp(1, real_rows.len());
    let aug_batch = train_cfg
        .augmented_batch_size
        .unwrap_or(batch_size)
        .min(aug_rows.len());

    let mut model = SoftmaxModel::zeros(labels.clone(), dim);
    let mut trace = TrainTrace::default();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(train_cfg.seed);
    let mut aug_rng = ChaCha8Rng::seed_from_u64(train_cfg.seed ^ 0x5851_f42d_4c95_7f2d);
    let mut gate_rng = ChaCha8Rng::seed_from_u64(loss_cfg.seed);
    let mut order: Vec<usize> = (0..real_rows.len()).collect();

    for _ in 0..train_cfg.epochs {
        if batch_size < real_rows.len() {
            order.shuffle(&mut shuffle_rng);
        }
        for chunk in order.chunks(batch_size) {
            let batch: Vec<_> = chunk.iter().map(|&i| real_rows[i]).collect();
            let (real_loss, mut grad_w, mut grad_b) = model.cross_entropy(&batch);

            let p_g = gate(gate_rng.random::<f64>());
            let mut aug_loss = 0.0;
            if p_g == 1 && loss_cfg.lambda > 0.0 && aug_batch > 0 {
                let picked: Vec<_> = sample(&mut aug_rng, aug_rows.len(), aug_batch)
                    .into_iter()
                    .map(|i| aug_rows[i])
                    .collect();
                let (l, gw, gb) = model.cross_entropy(&picked);
                aug_loss = l;
                let lambda = loss_cfg.lambda;
                grad_w
                    .iter_mut()
                    .zip(&gw)
                    .for_each(|(g, a)| *g += lambda * a);
                grad_b
                    .iter_mut()
                    .zip(&gb)
                    .for_each(|(g, a)| *g += lambda * a);
            }

            model.step(train_cfg.learning_rate, &grad_w, &grad_b);
            trace
                .loss
                .push(fagc_loss(real_loss, aug_loss, p_g, loss_cfg.lambda));
            trace.real_loss.push(real_loss);
            trace.gates.push(p_g);
        }
    }
    Ok((model, trace))
}
