use crate::error::{FagcError, Result};
use crate::preshape::{check_same_dim, PreShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Real,
    Augmented,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Real => "real",
            Provenance::Augmented => "augmented",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" => Ok(Provenance::Real),
            "augmented" => Ok(Provenance::Augmented),
            other => Err(format!(
                "unknown source {other:?}, expected real or augmented"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub shape: PreShape,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Category {
    pub label: String,
    pub members: Vec<Member>,
}

impl Category {
    /// Shapes of the real members, in insertion order.
    pub fn real(&self) -> Vec<PreShape> {
        self.shapes(Provenance::Real)
    }

    pub fn shapes(&self, provenance: Provenance) -> Vec<PreShape> {
        self.members
            .iter()
            .filter(|m| m.provenance == provenance)
            .map(|m| m.shape.clone())
            .collect()
    }
}

/// Pre-shapes grouped by category label. Categories keep their first-seen
/// order; labels are unique and every category has at least one member.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledDataset {
    categories: Vec<Category>,
    dim: Option<usize>,
}

impl LabeledDataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: &str, shape: PreShape, provenance: Provenance) -> Result<()> {
        match self.dim {
            Some(d) => check_same_dim(d, shape.dim())?,
            None => self.dim = Some(shape.dim()),
        }
        let member = Member { shape, provenance };
        match self.categories.iter_mut().find(|c| c.label == label) {
            Some(c) => c.members.push(member),
            None => self.categories.push(Category {
                label: label.to_string(),
                members: vec![member],
            }),
        }
        Ok(())
    }

    pub fn from_members<I, S>(members: I, provenance: Provenance) -> Result<Self>
    where
        I: IntoIterator<Item = (S, PreShape)>,
        S: AsRef<str>,
    {
        let mut ds = Self::new();
        for (label, shape) in members {
            ds.push(label.as_ref(), shape, provenance)?;
        }
        Ok(ds)
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, label: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.label == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.categories.iter().map(|c| c.label.as_str()).collect()
    }

    /// Ambient pre-shape dimension, `None` while empty.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.categories.iter().map(|c| c.members.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    /// `(label, member)` pairs in category order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Member)> {
        self.categories
            .iter()
            .flat_map(|c| c.members.iter().map(move |m| (c.label.as_str(), m)))
    }

    /// Union of two datasets; categories of `other` are appended or merged.
    pub fn merged(&self, other: &LabeledDataset) -> Result<LabeledDataset> {
        let mut out = self.clone();
        for (label, m) in other.iter() {
            out.push(label, m.shape.clone(), m.provenance)?;
        }
        Ok(out)
    }

    /// Checks that `other` uses the same dimension and a subset of labels.
    pub fn check_compatible(&self, other: &LabeledDataset) -> Result<()> {
        if let (Some(a), Some(b)) = (self.dim, other.dim) {
            check_same_dim(a, b)?;
        }
        if let Some(c) = other
            .categories
            .iter()
            .find(|c| self.category(&c.label).is_none())
        {
            return Err(FagcError::LabelMismatch(format!(
                "unknown label {:?}",
                c.label
            )));
        }
        Ok(())
    }
}
