//! Synthetic labeled features: well-separated category prototypes with
//! tangential Gaussian spread, standing in for extracted image features.

use crate::dataset::{LabeledDataset, Provenance};
use crate::error::{FagcError, Result};
use crate::preshape::{angle_between, project, RawFeature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const MAX_PROTOTYPE_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub categories: usize,
    /// Real samples per category.
    pub samples: usize,
    /// Raw feature dimension.
    pub dim: usize,
    /// Within-category dispersion in radians.
    pub kappa: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(FagcError::InvalidConfig(msg));
        if self.categories < 2 {
            return fail(format!(
                "need at least 2 categories, got {}",
                self.categories
            ));
        }
        if self.samples < 3 {
            return fail(format!(
                "need at least 3 samples per category, got {}",
                self.samples
            ));
        }
        if self.dim < 2 {
            return fail(format!(
                "raw dimension must be at least 2, got {}",
                self.dim
            ));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return fail(format!("kappa must be positive, got {}", self.kappa));
        }
        Ok(())
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.categories).map(|i| format!("c{i}")).collect()
    }
}

/// Category prototypes plus the generator state for drawing members.
#[derive(Debug, Clone)]
pub struct SynthTask {
    spec: SynthSpec,
    /// Unit vectors in the zero-mean subspace of raw space.
    prototypes: Vec<Vec<f64>>,
}

impl SynthTask {
    pub fn new(spec: SynthSpec) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let min_angle = 4.0 * spec.kappa;
        let mut prototypes: Vec<Vec<f64>> = Vec::with_capacity(spec.categories);
        let mut attempts = 0;
        while prototypes.len() < spec.categories {
            attempts += 1;
            if attempts > MAX_PROTOTYPE_ATTEMPTS {
                return Err(FagcError::SeparationUnreachable {
                    categories: spec.categories,
                    min_angle,
                    attempts: MAX_PROTOTYPE_ATTEMPTS,
                });
            }
            let Some(candidate) = centered_unit(gaussian(&mut rng, spec.dim)) else {
                continue;
            };
            if prototypes
                .iter()
                .all(|p| angle_between(p, &candidate) >= min_angle)
            {
                prototypes.push(candidate);
            }
        }
        Ok(Self { spec, prototypes })
    }

    pub fn spec(&self) -> &SynthSpec {
        &self.spec
    }

    pub fn prototypes(&self) -> &[Vec<f64>] {
        &self.prototypes
    }

    /// `per_category` raw features for every category, drawn from the
    /// stream identified by `stream`. Each feature is a random affine
    /// image of a point scattered around its prototype.
    pub fn raw(&self, per_category: usize, stream: u64) -> Vec<(String, RawFeature)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(stream + 1);
        let labels = self.spec.labels();
        let mut out = Vec::with_capacity(per_category * self.prototypes.len());
        for (label, proto) in labels.iter().zip(&self.prototypes) {
            for _ in 0..per_category {
                let point = self.scatter(&mut rng, proto);
                let scale = rng.random_range(0.5..2.0);
                let offset: f64 = rng.sample(StandardNormal);
                let values = point.iter().map(|p| offset + scale * p).collect();
                let raw = RawFeature::new(values).expect("finite by construction");
                out.push((label.clone(), raw));
            }
        }
        out
    }

    /// Projected members tagged [`Provenance::Real`].
    pub fn dataset(&self, per_category: usize, stream: u64) -> Result<LabeledDataset> {
        let mut ds = LabeledDataset::new();
        for (label, raw) in self.raw(per_category, stream) {
            ds.push(&label, project(&raw)?, Provenance::Real)?;
        }
        Ok(ds)
    }

    /// Exponential map of a tangential Gaussian step of scale κ.
    fn scatter(&self, rng: &mut ChaCha8Rng, proto: &[f64]) -> Vec<f64> {
        let mut step: Vec<f64> = gaussian(rng, proto.len())
            .into_iter()
            .map(|g| g * self.spec.kappa)
            .collect();
        remove_mean(&mut step);
        let along: f64 = step.iter().zip(proto).map(|(s, p)| s * p).sum();
        step.iter_mut()
            .zip(proto)
            .for_each(|(s, p)| *s -= along * p);
        let len = step.iter().map(|s| s * s).sum::<f64>().sqrt();
        if len == 0.0 {
            return proto.to_vec();
        }
        let (sin, cos) = len.sin_cos();
        proto
            .iter()
            .zip(&step)
            .map(|(p, s)| cos * p + sin * s / len)
            .collect()
    }
}

/// Training set of `spec.samples` per category.
pub fn synth_dataset(spec: &SynthSpec) -> Result<LabeledDataset> {
    SynthTask::new(spec.clone())?.dataset(spec.samples, 0)
}

/// Training set plus an independent test set drawn around the same
/// prototypes.
pub fn synth_split(
    spec: &SynthSpec,
    test_per_category: usize,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let task = SynthTask::new(spec.clone())?;
    Ok((
        task.dataset(spec.samples, 0)?,
        task.dataset(test_per_category, 1)?,
    ))
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn centered_unit(mut v: Vec<f64>) -> Option<Vec<f64>> {
    remove_mean(&mut v);
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len < 1e-9 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= len);
    Some(v)
}
