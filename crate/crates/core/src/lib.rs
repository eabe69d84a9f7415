//! Feature augmentation along geodesic curves in Kendall pre-shape space.
//!
//! Raw feature vectors are projected onto the pre-shape hypersphere
//! ([`preshape`]), one geodesic curve is fitted per category ([`fit`]), and
//! new feature vectors are sampled along each curve ([`augment`]). The
//! [`eval`] module measures the effect with small classifiers trained under
//! a gated composite loss.

pub mod augment;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod fit;
pub mod geodesic;
pub mod preshape;

pub use augment::{augment_dataset, category_seed, sample_curve, AugmentConfig, AugmentResult};
pub use dataset::{LabeledDataset, Provenance};
pub use error::{FagcError, Result};
pub use fit::{farthest_pair, fit_curve, init_v_star, FitConfig, FitReport};
pub use geodesic::{curve_point, point_to_curve_distance, GeodesicCurve};
pub use preshape::{geodesic_distance, procrustes_distance, project, PreShape, RawFeature};

/// Augmented-vector counts swept by the K ablation.
pub const K_GRID: [usize; 5] = [10, 100, 400, 1000, 2000];
