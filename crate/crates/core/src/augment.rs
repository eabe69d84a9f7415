//! Per-category curve fitting and sampling of augmented feature vectors.

use crate::dataset::{LabeledDataset, Provenance};
use crate::error::{FagcError, Result};
use crate::fit::{fit_curve, FitConfig, FitReport};
use crate::geodesic::GeodesicCurve;
use crate::preshape::PreShape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentConfig {
    /// Augmented vectors drawn per category.
    pub k: usize,
    pub fit: FitConfig,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            k: 100,
            fit: FitConfig::default(),
            seed: 0,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(FagcError::InvalidConfig("k must be at least 1".into()));
        }
        self.fit.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryAugmentation {
    pub label: String,
    pub curve: GeodesicCurve,
    pub report: FitReport,
    pub samples: Vec<PreShape>,
}

/// Fitted curves, fit reports and samples for every category, in the
/// category order of the input dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentResult {
    pub categories: Vec<CategoryAugmentation>,
}

impl AugmentResult {
    pub fn get(&self, label: &str) -> Option<&CategoryAugmentation> {
        self.categories.iter().find(|c| c.label == label)
    }

    pub fn curve(&self, label: &str) -> Option<&GeodesicCurve> {
        self.get(label).map(|c| &c.curve)
    }

    pub fn report(&self, label: &str) -> Option<&FitReport> {
        self.get(label).map(|c| &c.report)
    }

    /// The sampled vectors as a dataset tagged [`Provenance::Augmented`].
    pub fn augmented(&self) -> LabeledDataset {
        let mut ds = LabeledDataset::new();
        for c in &self.categories {
            for s in &c.samples {
                ds.push(&c.label, s.clone(), Provenance::Augmented)
                    .expect("samples share the curve dimension");
            }
        }
        ds
    }
}

/// Draws `k` arc parameters uniformly from `[0, θ]` and returns the curve
/// points at those parameters.
pub fn sample_curve(curve: &GeodesicCurve, k: usize, seed: u64) -> Vec<PreShape> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = curve.theta();
    (0..k)
        .map(|_| curve.point_unchecked(rng.random_range(0.0..=theta)))
        .collect()
}

/// Sampling seed for one category: the global seed mixed with a stable
/// hash of the label, so each category's draws are independent of the
/// others and of iteration order.
pub fn category_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a
    let label_hash = label.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    });
    splitmix64(seed ^ splitmix64(label_hash))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fits one curve per category over its real members and samples `k`
/// augmented vectors from each. Fails as a whole if any category fails;
/// the error names the first failing label in category order.
pub fn augment_dataset(data: &LabeledDataset, config: &AugmentConfig) -> Result<AugmentResult> {
    config.validate()?;
    let results: Vec<Result<CategoryAugmentation>> = data
        .categories()
        .par_iter()
        .map(|category| {
            let label = category.label.as_str();
            let real = category.real();
            let (curve, report) =
                fit_curve(&real, &config.fit).map_err(|e| e.in_category(label))?;
            let samples = sample_curve(&curve, config.k, category_seed(config.seed, label));
            Ok(CategoryAugmentation {
                label: label.to_string(),
                curve,
                report,
                samples,
            })
        })
        .collect();
    let categories = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(AugmentResult { categories })
}
