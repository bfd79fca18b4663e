//! Seeded generators of test polygons and transforms.
//!
//! All generators draw from a [`ChaCha8Rng`] and use rejection sampling with
//! at most [`RETRY_CAP`] attempts.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convexity::convexity_check;
use crate::error::CurveError;
use crate::invariants::{compute_signature, denominator};
use crate::polygon::{Dim, Polygon};

pub const RETRY_CAP: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn retry<T>(mut f: impl FnMut() -> Option<T>) -> Result<T, CurveError> {
    (0..RETRY_CAP).find_map(|_| f()).ok_or(CurveError::SamplingFailed { attempts: RETRY_CAP })
}

/// Smallest denominator magnitude relative to `scale^d`.
fn min_relative_denominator(polygon: &Polygon) -> f64 {
    let norm = polygon.scale().powi(polygon.dim().as_usize() as i32);
    (0..polygon.len() as isize).map(|k| denominator(polygon, k).abs() / norm).fold(f64::INFINITY, f64::min)
}

/// Closed polygon with coordinates uniform in `[-1, 1]`, every relative
/// denominator at least `min_denominator` and every invariant bounded by
/// `max_invariant` in magnitude.
pub fn random_admissible_polygon(
    rng: &mut ChaCha8Rng,
    p: usize,
    dim: Dim,
    min_denominator: f64,
    max_invariant: f64,
) -> Result<Polygon, CurveError> {
    retry(|| {
        let verts = (0..p)
            .map(|_| {
                let z = if dim == Dim::Three { rng.random_range(-1.0..1.0) } else { 0.0 };
                Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), z)
            })
            .collect();
        let poly = Polygon::new(dim, verts, true).ok()?;
        if min_relative_denominator(&poly) < min_denominator {
            return None;
        }
        let s = compute_signature(&poly).ok()?;
        s.entries.iter().all(|e| e.kappa.abs().max(e.kappa_bar.abs()).max(e.tau.abs()) < max_invariant).then_some(poly)
    })
}

/// Default well-conditioned random polygon.
pub fn random_polygon(rng: &mut ChaCha8Rng, p: usize, dim: Dim) -> Result<Polygon, CurveError> {
    random_admissible_polygon(rng, p, dim, 1e-2, 1e3)
}

/// Convex polygon: sorted angles on the unit circle with gaps at least a
/// third of the mean gap, then a random affine map.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, p: usize) -> Result<Polygon, CurveError> {
    let mean_gap = std::f64::consts::TAU / p as f64;
    retry(|| {
        let mut angles: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let ok = (0..p).all(|i| {
            let next = if i + 1 < p { angles[i + 1] } else { angles[0] + std::f64::consts::TAU };
            next - angles[i] > mean_gap / 3.0
        });
        if !ok {
            return None;
        }
        let pts: Vec<[f64; 2]> = angles.iter().map(|a| [a.cos(), a.sin()]).collect();
        let poly = Polygon::planar(&pts).ok()?;
        let (a, b) = (random_matrix2(rng).ok()?, Vector2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let poly = poly.affine_map2(&a, &b);
        convexity_check(&poly).ok()?.is_convex.then_some(poly)
    })
}

/// Planar closed polygon placed on a random plane in space that misses the origin.
pub fn random_planar_in_space(rng: &mut ChaCha8Rng, p: usize) -> Result<Polygon, CurveError> {
    retry(|| {
        let flat = random_polygon(rng, p, Dim::Two).ok()?;
        let a = random_matrix3(rng).ok()?;
        let lifted = flat.lifted(1.0).linear_map3(&a);
        (min_relative_denominator(&lifted) > 1e-3).then_some(lifted)
    })
}

/// Convex polygon with `2m` vertices whose opposite sides are parallel and
/// of equal length (edge `k + m` is minus edge `k`).
pub fn random_parallel_polygon(rng: &mut ChaCha8Rng, m: usize) -> Result<Polygon, CurveError> {
    let mean_gap = std::f64::consts::PI / m as f64;
    retry(|| {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..std::f64::consts::PI)).collect();
        angles.sort_by(f64::total_cmp);
        let spread_ok = (0..m).all(|i| {
            let next = if i + 1 < m { angles[i + 1] } else { angles[0] + std::f64::consts::PI };
            next - angles[i] > mean_gap / 3.0
        });
        if !spread_ok {
            return None;
        }
        let edges: Vec<Vector3<f64>> = angles.iter().map(|a| Vector3::new(a.cos(), a.sin(), 0.0) * rng.random_range(0.5..1.5)).collect();
        let mut verts = vec![Vector3::zeros()];
        for k in 0..2 * m - 1 {
            let e = if k < m { edges[k] } else { -edges[k - m] };
            verts.push(verts[k] + e);
        }
        let poly = Polygon::new(Dim::Two, verts, true).ok()?;
        convexity_check(&poly).ok()?.is_convex.then_some(poly)
    })
}

/// 3×3 matrix with entries in `[-2, 2]`, condition number below 100.
pub fn random_matrix3(rng: &mut ChaCha8Rng) -> Result<Matrix3<f64>, CurveError> {
    retry(|| {
        let m = Matrix3::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let sv = m.singular_values();
        (sv.min() > 0.0 && sv.max() / sv.min() < 100.0).then_some(m)
    })
}

/// 2×2 matrix with entries in `[-2, 2]`, condition number below 100.
pub fn random_matrix2(rng: &mut ChaCha8Rng) -> Result<Matrix2<f64>, CurveError> {
    retry(|| {
        let m = Matrix2::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let sv = m.singular_values();
        (sv.min() > 0.0 && sv.max() / sv.min() < 100.0).then_some(m)
    })
}
