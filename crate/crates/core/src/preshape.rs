//! Projection of raw feature vectors onto the pre-shape hypersphere and the
//! two distances defined there.
//!
//! A raw feature `(x1, ..., xn)` is lifted to planar landmarks by duplicating
//! every coordinate, giving the interleaved vector `(x1, y1, ..., xn, yn)` with
//! `yi = xi`. Both coordinate families are centered and the result is scaled
//! to unit Euclidean norm.

use crate::error::{FagcError, Result};

/// Tolerance used when validating unit norm and zero means.
pub const NORM_TOL: f64 = 1e-9;

/// Centered norms at or below this value are treated as a constant feature.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// An ingested feature vector before projection.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFeature {
    values: Vec<f64>,
}

impl RawFeature {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(FagcError::TooShort(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(FagcError::NonFinite { index, value });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// A point on the pre-shape hypersphere, stored as interleaved planar
/// coordinates `(x'1, y'1, ..., x'n, y'n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreShape {
    coords: Vec<f64>,
}

impl PreShape {
    /// Wraps coordinates after checking the unit-norm invariant.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_unit(&coords)?;
        Ok(Self { coords })
    }

    /// Wraps coordinates that are unit norm by construction.
    pub(crate) fn from_unit(coords: Vec<f64>) -> Self {
        debug_assert!((norm(&coords) - 1.0).abs() <= 1e-6);
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    /// Means of the even-indexed (x') and odd-indexed (y') coordinates.
    pub fn planar_means(&self) -> (f64, f64) {
        let n = (self.coords.len() / 2).max(1) as f64;
        let (sx, sy) = self.coords.chunks(2).fold((0.0, 0.0), |(sx, sy), p| {
            (sx + p[0], sy + p.get(1).copied().unwrap_or(0.0))
        });
        (sx / n, sy / n)
    }

    /// Largest |x'i - y'i| over all landmark pairs.
    pub fn pair_asymmetry(&self) -> f64 {
        self.coords
            .chunks(2)
            .map(|p| (p[0] - p.get(1).copied().unwrap_or(p[0])).abs())
            .fold(0.0, f64::max)
    }

    pub fn dot(&self, other: &PreShape) -> f64 {
        dot(&self.coords, &other.coords)
    }
}

/// Duplicates, centers and normalizes a raw feature.
pub fn project(raw: &RawFeature) -> Result<PreShape> {
    let values = raw.values();
    let n = values.len() as f64;
    // x and y copies share the same mean, so one pass suffices
    let mean = values.iter().sum::<f64>() / n;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let centered_norm = (2.0 * centered.iter().map(|c| c * c).sum::<f64>()).sqrt();
    if centered_norm <= DEGENERACY_TOL {
        return Err(FagcError::DegenerateFeature(centered_norm));
    }
    let coords = centered
        .iter()
        .flat_map(|&c| {
            let v = c / centered_norm;
            [v, v]
        })
        .collect();
    Ok(PreShape { coords })
}

/// Arc length between two unit vectors, `acos(<v1, v2>)`.
///
/// Evaluated as `2 atan2(|v1 - v2|, |v1 + v2|)`, which equals the clamped
/// arccosine on the sphere but keeps full precision near 0 and pi.
pub fn geodesic_distance(v1: &PreShape, v2: &PreShape) -> Result<f64> {
    check_unit(&v1.coords)?;
    check_unit(&v2.coords)?;
    check_same_dim(v1.dim(), v2.dim())?;
    Ok(angle_between(&v1.coords, &v2.coords))
}

/// Rotation-minimized distance between two pre-shapes, reading consecutive
/// coordinate pairs as complex numbers: `acos(|sum_j v1_j conj(v2_j)|)`.
pub fn procrustes_distance(v1: &PreShape, v2: &PreShape) -> Result<f64> {
    for v in [v1, v2] {
        if v.dim() % 2 != 0 {
            return Err(FagcError::OddDimension(v.dim()));
        }
        check_unit(&v.coords)?;
    }
    check_same_dim(v1.dim(), v2.dim())?;
    // c = sum_j v2_j conj(v1_j); with (a + ib)(c - id) = (ac + bd) + i(bc - ad)
    let (re, im) = v2
        .coords
        .chunks_exact(2)
        .zip(v1.coords.chunks_exact(2))
        .fold((0.0, 0.0), |(re, im), (p, q)| {
            (
                re + p[0] * q[0] + p[1] * q[1],
                im + p[1] * q[0] - p[0] * q[1],
            )
        });
    let modulus = re.hypot(im);
    // |v2 - c v1| is the sine of the angle; atan2 keeps precision near 0
    let off_orbit = v2
        .coords
        .chunks_exact(2)
        .zip(v1.coords.chunks_exact(2))
        .map(|(p, q)| {
            let dr = p[0] - (re * q[0] - im * q[1]);
            let di = p[1] - (re * q[1] + im * q[0]);
            dr * dr + di * di
        })
        .sum::<f64>()
        .sqrt();
    Ok(off_orbit.atan2(modulus).min(std::f64::consts::FRAC_PI_2))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Angle between two (near) unit vectors.
pub(crate) fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let (diff, sum) = a.iter().zip(b).fold((0.0, 0.0), |(d, s), (x, y)| {
        (d + (x - y) * (x - y), s + (x + y) * (x + y))
    });
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

fn check_unit(coords: &[f64]) -> Result<()> {
    let n = norm(coords);
    if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
        return Err(FagcError::NotUnitNorm(n));
    }
    Ok(())
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(FagcError::DimensionMismatch { expected, found });
    }
    Ok(())
}
