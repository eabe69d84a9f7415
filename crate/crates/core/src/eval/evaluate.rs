use super::knn::knn_predict;
use super::loss::LossConfig;
use super::softmax::{train_softmax, TrainConfig};
use crate::dataset::LabeledDataset;
use crate::error::{FagcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    /// Geodesic k-nearest neighbors over the pooled real and augmented set.
    Knn { k: usize },
    /// Linear softmax trained under the gated composite loss.
    Softmax,
}

impl Classifier {
    pub fn name(&self) -> &'static str {
        match self {
            Classifier::Knn { .. } => "knn",
            Classifier::Softmax => "softmax",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalConfig {
    pub loss: LossConfig,
    pub train: TrainConfig,
}

/// Test accuracy of `classifier` trained on `train_real` plus `augmented`.
pub fn evaluate(
    train_real: &LabeledDataset,
    augmented: &LabeledDataset,
    test: &LabeledDataset,
    classifier: Classifier,
    cfg: &EvalConfig,
) -> Result<f64> {
    train_real.check_compatible(augmented)?;
    train_real.check_compatible(test)?;
    if test.is_empty() {
        return Err(FagcError::InvalidConfig("test set is empty".into()));
    }
    let correct = match classifier {
        Classifier::Knn { k } => {
            let pooled = train_real.merged(augmented)?;
            let mut correct = 0;
            for (label, m) in test.iter() {
                if knn_predict(&pooled, &m.shape, k)? == label {
                    correct += 1;
                }
            }
            correct
        }
        Classifier::Softmax => {
            let (model, _) = train_softmax(train_real, augmented, &cfg.loss, &cfg.train)?;
            test.iter()
                .filter(|(label, m)| model.predict(&m.shape) == *label)
                .count()
        }
    };
    Ok(correct as f64 / test.len() as f64)
}

/// Accuracy without and with augmentation under the same seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub baseline: f64,
    pub augmented: f64,
}

impl Comparison {
    pub fn gain(&self) -> f64 {
        self.augmented - self.baseline
    }
}

pub fn compare(
    train_real: &LabeledDataset,
    augmented: &LabeledDataset,
    test: &LabeledDataset,
    classifier: Classifier,
    cfg: &EvalConfig,
) -> Result<Comparison> {
    Ok(Comparison {
        baseline: evaluate(train_real, &LabeledDataset::new(), test, classifier, cfg)?,
        augmented: evaluate(train_real, augmented, test, classifier, cfg)?,
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
