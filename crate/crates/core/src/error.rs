use thiserror::Error;

pub type Result<T> = std::result::Result<T, FagcError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FagcError {
    #[error("feature has {0} entries, need at least 2")]
    TooShort(usize),

    #[error("entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("feature is constant: centered norm {0:e} has no shape")]
    DegenerateFeature(f64),

    #[error("vector norm {0} is not 1 within tolerance")]
    NotUnitNorm(f64),

    #[error("coordinate count {0} is odd, complex pairing needs an even length")]
    OddDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arc parameter {s} outside [0, {theta}]")]
    ParamOutOfRange { s: f64, theta: f64 },

    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("degenerate geodesic: endpoint angle {0:e} rad is too close to 0 or pi")]
    DegenerateGeodesic(f64),

    #[error("every candidate endpoint produced a degenerate curve")]
    NoValidCandidate,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("category {label:?}: {source}")]
    Category {
        label: String,
        #[source]
        source: Box<FagcError>,
    },

    #[error("label sets differ: {0}")]
    LabelMismatch(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error(
        "could not place {categories} prototypes {min_angle} rad apart within {attempts} attempts"
    )]
    SeparationUnreachable {
        categories: usize,
        min_angle: f64,
        attempts: usize,
    },
}

impl FagcError {
    pub(crate) fn in_category(self, label: &str) -> Self {
        FagcError::Category {
            label: label.to_string(),
            source: Box::new(self),
        }
    }

    /// Strips any category tags and returns the underlying error.
    pub fn root(&self) -> &FagcError {
        match self {
            FagcError::Category { source, .. } => source.root(),
            other => other,
        }
    }
}
