#![allow(dead_code)]

use fagc::{GeodesicCurve, PreShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction in `dim` dimensions via normalized Gaussian-ish draws.
pub fn unit_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.random_range(f64::EPSILON..1.0);
                let u2: f64 = rng.random();
                (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            })
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

pub fn unit(rng: &mut ChaCha8Rng, dim: usize) -> PreShape {
    PreShape::new(unit_vec(rng, dim)).unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Plain clamped arccosine, the textbook form.
pub fn acos_dist(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Random curve with endpoint angle in `[lo, hi]`, built by rotating a
/// start point towards an orthogonal direction.
pub fn random_curve(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> GeodesicCurve {
    let v = unit_vec(rng, dim);
    let mut u = unit_vec(rng, dim);
    let along = dot(&u, &v);
    u.iter_mut().zip(&v).for_each(|(ui, vi)| *ui -= along * vi);
    let n = dot(&u, &u).sqrt();
    u.iter_mut().for_each(|ui| *ui /= n);
    let theta = rng.random_range(lo..hi);
    let w: Vec<f64> = v
        .iter()
        .zip(&u)
        .map(|(a, b)| theta.cos() * a + theta.sin() * b)
        .collect();
    GeodesicCurve::new(PreShape::new(v).unwrap(), PreShape::new(w).unwrap()).unwrap()
}

/// Point at arc length `s` along the great circle from `v` towards `w`,
/// computed from scratch (no library curve code).
pub fn slerp(v: &[f64], w: &[f64], s: f64) -> Vec<f64> {
    let theta = acos_dist(v, w);
    let (st, ct) = theta.sin_cos();
    v.iter()
        .zip(w)
        .map(|(a, b)| s.cos() * a + s.sin() * (b - a * ct) / st)
        .collect()
}

/// Minimum over a uniform grid of `n` arc parameters of the arccos distance.
pub fn grid_distance(z: &[f64], v: &[f64], w: &[f64], n: usize) -> f64 {
    let theta = acos_dist(v, w);
    (0..n)
        .map(|i| {
            let s = theta * i as f64 / (n - 1) as f64;
            acos_dist(z, &slerp(v, w, s))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Point-to-arc distance by golden-section search on the (unimodal)
/// distance along the arc, then the endpoints.
pub fn golden_distance(z: &[f64], v: &[f64], w: &[f64]) -> f64 {
    let theta = acos_dist(v, w);
    let f = |s: f64| {
        let p = slerp(v, w, s);
        // chord length is monotone in arc length and well conditioned near 0
        let chord = z
            .iter()
            .zip(&p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        2.0 * (chord / 2.0).min(1.0).asin()
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, theta);
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f((a + b) / 2.0).min(f(0.0)).min(f(theta))
}

/// Sum of squared point-to-arc distances via golden-section search.
pub fn oracle_residual(points: &[PreShape], v: &[f64], w: &[f64]) -> f64 {
    points
        .iter()
        .map(|z| golden_distance(z.coords(), v, w).powi(2))
        .sum()
}

/// Noisy points scattered around a random arc: curve points plus a
/// Gaussian perturbation of scale `noise`, renormalized.
pub fn noisy_arc(rng: &mut ChaCha8Rng, dim: usize, m: usize, noise: f64) -> Vec<PreShape> {
    let curve = random_curve(rng, dim, 0.3, 1.5);
    (0..m)
        .map(|_| {
            let s = rng.random_range(0.0..curve.theta());
            let p = curve.point(s).unwrap();
            let e = unit_vec(rng, dim);
            let scale = noise * rng.random_range(0.0..2.0);
            let q: Vec<f64> = p
                .coords()
                .iter()
                .zip(&e)
                .map(|(a, b)| a + scale * b)
                .collect();
            let n = dot(&q, &q).sqrt();
            PreShape::new(q.iter().map(|x| x / n).collect()).unwrap()
        })
        .collect()
}

/// Points exactly on a random arc, at random arc parameters.
pub fn exact_arc(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Vec<PreShape> {
    let curve = random_curve(rng, dim, 0.2, 2.5);
    (0..m)
        .map(|_| curve.point(rng.random_range(0.0..=curve.theta())).unwrap())
        .collect()
}
