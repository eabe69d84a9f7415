//! Great-circle arcs between two pre-shapes.

use crate::error::{FagcError, Result};
use crate::preshape::{angle_between, check_same_dim, dot, PreShape};
use std::f64::consts::PI;

/// Endpoint angles at or below this value (or within it of pi) cannot
/// define a unique arc.
pub const THETA_TOL: f64 = 1e-9;

/// The arc `Γ(s) = cos(s) v* + sin(s) u` for `s` in `[0, θ]`, where
/// `u = (w* - v* cos θ) / sin θ` is the unit tangent at `v*`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicCurve {
    v_star: PreShape,
    w_star: PreShape,
    theta: f64,
    tangent: Vec<f64>,
}

impl GeodesicCurve {
    pub fn new(v_star: PreShape, w_star: PreShape) -> Result<Self> {
        check_same_dim(v_star.dim(), w_star.dim())?;
        let theta = angle_between(v_star.coords(), w_star.coords());
        if theta <= THETA_TOL || theta >= PI - THETA_TOL {
            return Err(FagcError::DegenerateGeodesic(theta));
        }
        let tangent = tangent(v_star.coords(), w_star.coords(), theta);
        Ok(Self {
            v_star,
            w_star,
            theta,
            tangent,
        })
    }

    pub fn v_star(&self) -> &PreShape {
        &self.v_star
    }

    pub fn w_star(&self) -> &PreShape {
        &self.w_star
    }

    /// Arc length between the endpoints.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tangent(&self) -> &[f64] {
        &self.tangent
    }

    pub fn dim(&self) -> usize {
        self.v_star.dim()
    }

    /// Point at arc length `s` from `v*`.
    pub fn point(&self, s: f64) -> Result<PreShape> {
        if !(0.0..=self.theta).contains(&s) {
            return Err(FagcError::ParamOutOfRange {
                s,
                theta: self.theta,
            });
        }
        Ok(self.point_unchecked(s))
    }

    pub(crate) fn point_unchecked(&self, s: f64) -> PreShape {
        if s == self.theta {
            return self.w_star.clone();
        }
        let (sin, cos) = s.sin_cos();
        let coords = self
            .v_star
            .coords()
            .iter()
            .zip(&self.tangent)
            .map(|(v, u)| cos * v + sin * u)
            .collect();
        PreShape::from_unit(coords)
    }

    /// Smallest arc length from `z` to any point of the curve.
    pub fn distance_to(&self, z: &PreShape) -> Result<f64> {
        // re-validate through the public distance to surface norm errors
        crate::preshape::geodesic_distance(z, &self.v_star)?;
        Ok(self.distance_unchecked(z.coords()))
    }

    /// Closed-form point-to-arc distance. Projects `z` onto the plane of the
    /// great circle; if the foot lies inside the arc the distance is the
    /// angle to that plane, otherwise the nearer endpoint wins.
    pub(crate) fn distance_unchecked(&self, z: &[f64]) -> f64 {
        let a = dot(z, self.v_star.coords());
        let b = dot(z, &self.tangent);
        let foot = b.atan2(a);
        if (0.0..=self.theta).contains(&foot) {
            let off_plane = z
                .iter()
                .zip(self.v_star.coords())
                .zip(&self.tangent)
                .map(|((zi, vi), ui)| {
                    let r = zi - a * vi - b * ui;
                    r * r
                })
                .sum::<f64>()
                .sqrt();
            off_plane.atan2(a.hypot(b))
        } else {
            angle_between(z, self.v_star.coords()).min(angle_between(z, self.w_star.coords()))
        }
    }

    /// Sum of squared point-to-curve distances over `points`.
    pub fn residual(&self, points: &[PreShape]) -> f64 {
        points
            .iter()
            .map(|z| {
                let d = self.distance_unchecked(z.coords());
                d * d
            })
            .sum()
    }
}

/// Free-function form of [`GeodesicCurve::point`].
pub fn curve_point(curve: &GeodesicCurve, s: f64) -> Result<PreShape> {
    curve.point(s)
}

/// Free-function form of [`GeodesicCurve::distance_to`].
pub fn point_to_curve_distance(z: &PreShape, curve: &GeodesicCurve) -> Result<f64> {
    curve.distance_to(z)
}

fn tangent(v: &[f64], w: &[f64], theta: f64) -> Vec<f64> {
    let (sin, cos) = theta.sin_cos();
    let mut u: Vec<f64> = v
        .iter()
        .zip(w)
        .map(|(vi, wi)| (wi - vi * cos) / sin)
        .collect();
    // one Gram-Schmidt pass removes the rounding drift in <v, u> and |u|
    let along = dot(&u, v);
    u.iter_mut().zip(v).for_each(|(ui, vi)| *ui -= along * vi);
    let len = dot(&u, &u).sqrt();
    u.iter_mut().for_each(|ui| *ui /= len);
    u
}
