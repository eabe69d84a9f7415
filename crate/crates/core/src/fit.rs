//! Iterative fitting of one geodesic curve to a set of pre-shapes.
//!
//! The start endpoint is initialized at the member with the largest total
//! arc distance to the others. Each iteration then
//!
//! 1. finds the two members farthest from the current start endpoint,
//! 2. places `S` candidate end points evenly along the arc joining them,
//! 3. keeps the candidate whose curve from the start endpoint has the
//!    smallest sum of squared point-to-curve distances,
//! 4. moves the start endpoint to that candidate.
//!
//! The loop stops once the endpoint pair stops changing or the iteration
//! budget is spent. The best curve seen over all iterations is returned.
//!
//! The loop can settle on a worse curve than the best arc joining two
//! members, so by default the best-so-far tracking is seeded with that arc
//! (recorded as iteration 0). Set [`FitConfig::pair_seed`] to `false` for
//! the bare loop.

use crate::error::{FagcError, Result};
use crate::geodesic::{GeodesicCurve, THETA_TOL};
use crate::preshape::{angle_between, check_same_dim, PreShape};

/// Two sums or distances closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Number of candidate end points placed on the farthest-pair arc.
    pub num_candidates: usize,
    /// Endpoint-motion threshold in radians.
    pub tol: f64,
    pub max_iters: usize,
    /// Seed the best-so-far curve with the best member-to-member arc.
    pub pair_seed: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            num_candidates: 100,
            tol: 1e-6,
            max_iters: 50,
            pair_seed: true,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_candidates < 2 {
            return Err(FagcError::InvalidConfig(format!(
                "num_candidates must be at least 2, got {}",
                self.num_candidates
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(FagcError::InvalidConfig(format!(
                "tol must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(FagcError::InvalidConfig(
                "max_iters must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Loop iterations run, not counting the member-pair seed.
    pub iterations: usize,
    /// `(iteration, residual of the selected candidate)`. Loop iterations
    /// count from 1; iteration 0 is the member-pair seed when enabled.
    pub residual_trace: Vec<(usize, f64)>,
    pub converged: bool,
    pub best_residual: f64,
    pub best_iteration: usize,
}

/// Index of the point with the largest sum of geodesic distances to all
/// points. Ties go to the lowest index.
pub fn init_v_star(points: &[PreShape]) -> Result<usize> {
    check_points(points)?;
    let sums = points.iter().map(|p| {
        points
            .iter()
            .map(|q| angle_between(p.coords(), q.coords()))
            .sum::<f64>()
    });
    Ok(argmax_first(sums).expect("non-empty"))
}

/// Indices `(w0, w1)` of the two points farthest from `v_star`.
///
/// If `v_star` coincides with a member (within [`THETA_TOL`]), the lowest
/// such index is excluded from the candidates; otherwise all members are
/// candidates. Ties go to the lowest index.
pub fn farthest_pair(points: &[PreShape], v_star: &PreShape) -> Result<(usize, usize)> {
    check_points(points)?;
    check_same_dim(points[0].dim(), v_star.dim())?;
    let dist: Vec<f64> = points
        .iter()
        .map(|p| angle_between(p.coords(), v_star.coords()))
        .collect();
    let own = dist.iter().position(|&d| d <= THETA_TOL);
    let masked = |skip: [Option<usize>; 2]| {
        dist.iter().enumerate().map(move |(i, &d)| {
            if skip.contains(&Some(i)) {
                f64::NEG_INFINITY
            } else {
                d
            }
        })
    };
    let w0 = argmax_first(masked([own, None])).expect("non-empty");
    let w1 = argmax_first(masked([own, Some(w0)])).expect("non-empty");
    Ok((w0, w1))
}

/// Candidate end points at arc parameters `θ k / (S - 1)`, `k = 0..S`,
/// along the arc from `w0` to `w1`. Both endpoints are included.
pub fn candidate_endpoints(w0: &PreShape, w1: &PreShape, count: usize) -> Result<Vec<PreShape>> {
    if count < 2 {
        return Err(FagcError::InvalidConfig(format!(
            "need at least 2 candidates, got {count}"
        )));
    }
    let arc = GeodesicCurve::new(w0.clone(), w1.clone())?;
    let step = arc.theta() / (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            if k == count - 1 {
                arc.point_unchecked(arc.theta())
            } else {
                arc.point_unchecked(step * k as f64)
            }
        })
        .collect())
}

/// Fits the curve that minimizes the sum of squared point-to-curve
/// distances over the discrete candidate sweep.
pub fn fit_curve(points: &[PreShape], config: &FitConfig) -> Result<(GeodesicCurve, FitReport)> {
    config.validate()?;
    check_points(points)?;

    let mut v_star = points[init_v_star(points)?].clone();
    let mut previous_start: Option<PreShape> = None;
    let mut best: Option<(GeodesicCurve, f64, usize)> = None;
    let mut trace = Vec::new();
    let mut converged = false;

    if config.pair_seed {
        if let Some((curve, residual)) = best_member_arc(points) {
            trace.push((0, residual));
            best = Some((curve, residual, 0));
        }
    }

    for iteration in 1..=config.max_iters {
        let (i0, i1) = farthest_pair(points, &v_star)?;
        let candidates = candidate_endpoints(&points[i0], &points[i1], config.num_candidates)?;

        let mut selected: Option<(GeodesicCurve, f64)> = None;
        for w_hat in candidates {
            let Ok(curve) = GeodesicCurve::new(v_star.clone(), w_hat) else {
                continue;
            };
            let residual = curve.residual(points);
            if selected.as_ref().is_none_or(|(_, r)| residual < *r) {
                selected = Some((curve, residual));
            }
        }
        let (curve, residual) = selected.ok_or(FagcError::NoValidCandidate)?;
        trace.push((iteration, residual));

        if best.as_ref().is_none_or(|(_, r, _)| residual < *r) {
            best = Some((curve.clone(), residual, iteration));
        }

        // the pair is unchanged when the new end point returns to the start
        // endpoint of the previous iteration (same arc, reversed)
        let w_star = curve.w_star().clone();
        if let Some(prev) = &previous_start {
            if angle_between(prev.coords(), w_star.coords()) < config.tol {
                converged = true;
                break;
            }
        }
        previous_start = Some(std::mem::replace(&mut v_star, w_star));
    }

    let (curve, best_residual, best_iteration) = best.expect("at least one iteration");
    let report = FitReport {
        iterations: trace.iter().filter(|(i, _)| *i > 0).count(),
        residual_trace: trace,
        converged,
        best_residual,
        best_iteration,
    };
    Ok((curve, report))
}

/// Lowest-residual arc `(z_i, z_j)`, `i < j`, skipping degenerate pairs.
/// The residual is symmetric in the endpoints, so unordered pairs suffice.
fn best_member_arc(points: &[PreShape]) -> Option<(GeodesicCurve, f64)> {
    let mut best: Option<(GeodesicCurve, f64)> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let Ok(curve) = GeodesicCurve::new(a.clone(), b.clone()) else {
                continue;
            };
            let residual = curve.residual(points);
            if best.as_ref().is_none_or(|(_, r)| residual < *r) {
                best = Some((curve, residual));
            }
        }
    }
    best
}

fn check_points(points: &[PreShape]) -> Result<()> {
    if points.len() < 3 {
        return Err(FagcError::TooFewPoints(points.len()));
    }
    let dim = points[0].dim();
    for p in &points[1..] {
        check_same_dim(dim, p.dim())?;
    }
    Ok(())
}

fn argmax_first(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if best.is_none_or(|(_, b)| v > b + TIE_TOL) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

    fn on_circle(angle: f64) -> PreShape {
        PreShape::new(vec![angle.cos(), angle.sin(), 0.0, 0.0]).unwrap()
    }

    #[test]
    fn init_picks_largest_distance_sum() {
        // sums: 100, 90, 170 degrees
        let pts = [on_circle(0.0), on_circle(PI / 18.0), on_circle(FRAC_PI_2)];
        assert_eq!(init_v_star(&pts).unwrap(), 2);
    }

    #[test]
    fn init_ties_go_to_lowest_index() {
        let pts = vec![on_circle(0.3); 4];
        assert_eq!(init_v_star(&pts).unwrap(), 0);
    }

    #[test]
    fn too_few_points() {
        let pts = [on_circle(0.0), on_circle(1.0)];
        assert_eq!(init_v_star(&pts), Err(FagcError::TooFewPoints(2)));
        assert_eq!(
            farthest_pair(&pts, &pts[0]),
            Err(FagcError::TooFewPoints(2))
        );
        assert!(matches!(
            fit_curve(&pts, &FitConfig::default()),
            Err(FagcError::TooFewPoints(2))
        ));
    }

    #[test]
    fn farthest_pair_orders_by_arc_length() {
        let pts = [on_circle(0.0), on_circle(FRAC_PI_6), on_circle(FRAC_PI_3)];
        assert_eq!(farthest_pair(&pts, &pts[0]).unwrap(), (2, 1));
    }

    #[test]
    fn farthest_pair_tie_goes_to_lowest_index() {
        let pts = [
            on_circle(0.0),
            on_circle(-0.5),
            on_circle(0.5),
            on_circle(0.2),
        ];
        assert_eq!(farthest_pair(&pts, &pts[0]).unwrap(), (1, 2));
    }

    #[test]
    fn farthest_pair_with_non_member_start() {
        let pts = [on_circle(0.1), on_circle(0.2), on_circle(0.3)];
        assert_eq!(farthest_pair(&pts, &on_circle(1.0)).unwrap(), (0, 1));
    }

    #[test]
    fn config_validation() {
        let bad = [
            FitConfig {
                num_candidates: 1,
                ..FitConfig::default()
            },
            FitConfig {
                tol: 0.0,
                ..FitConfig::default()
            },
            FitConfig {
                max_iters: 0,
                ..FitConfig::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(FagcError::InvalidConfig(_))));
        }
    }

    #[test]
    fn duplicate_farthest_pair_is_degenerate() {
        let far = on_circle(1.0);
        let pts = [on_circle(0.0), far.clone(), far, on_circle(0.1)];
        let err = fit_curve(&pts, &FitConfig::default()).unwrap_err();
        assert!(matches!(err, FagcError::DegenerateGeodesic(_)));
    }

    #[test]
    fn exact_arc_is_recovered() {
        let pts: Vec<_> = [0.0, 0.2, 0.7, 1.1, FRAC_PI_2]
            .into_iter()
            .map(on_circle)
            .collect();
        let (curve, report) = fit_curve(&pts, &FitConfig::default()).unwrap();
        assert!(report.best_residual < 1e-8);
        for p in &pts {
            assert!(curve.distance_to(p).unwrap() < 1e-4);
        }
        let min = report
            .residual_trace
            .iter()
            .map(|t| t.1)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(report.best_residual, min);
        assert!(report.converged);
    }

    #[test]
    fn bare_loop_has_no_seed_entry() {
        let pts: Vec<_> = [0.0, 0.2, 0.7, 1.1].into_iter().map(on_circle).collect();
        let cfg = FitConfig {
            pair_seed: false,
            ..FitConfig::default()
        };
        let (_, report) = fit_curve(&pts, &cfg).unwrap();
        assert_eq!(report.residual_trace[0].0, 1);
        assert_eq!(report.iterations, report.residual_trace.len());
        let (_, seeded) = fit_curve(&pts, &FitConfig::default()).unwrap();
        assert_eq!(seeded.residual_trace[0].0, 0);
        assert_eq!(seeded.iterations, seeded.residual_trace.len() - 1);
    }

    #[test]
    fn candidates_include_both_endpoints() {
        let (a, b) = (on_circle(0.0), on_circle(1.0));
        let c = candidate_endpoints(&a, &b, 5).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c[0], a);
        assert_eq!(c[4], b);
    }
}
