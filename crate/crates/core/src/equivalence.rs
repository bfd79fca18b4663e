//! Detecting affine (plane) and centroaffine (space) equivalence of polygons
//! from their signatures, and recovering the map.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::CurveError;
use crate::invariants::{compute_signature, Signature};
use crate::polygon::{Dim, Polygon};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// `x -> A x + b` with `A` 2×2.
    Affine2,
    /// `x -> A x` with `A` 3×3.
    Centroaffine3,
}

impl MatchMode {
    pub fn dim(self) -> Dim {
        match self {
            MatchMode::Affine2 => Dim::Two,
            MatchMode::Centroaffine3 => Dim::Three,
        }
    }
}

impl std::str::FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "affine2" => Ok(MatchMode::Affine2),
            "centroaffine3" => Ok(MatchMode::Centroaffine3),
            _ => Err(format!("unknown match mode `{s}`")),
        }
    }
}

/// `x -> A x + b`; rows of `linear` and the length of `translation` equal the dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub mode: MatchMode,
    pub linear: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl AffineMap {
    fn from_parts(mode: MatchMode, a: &Matrix3<f64>, b: &Vector3<f64>) -> Self {
        let d = mode.dim().as_usize();
        Self { mode, linear: (0..d).map(|i| (0..d).map(|j| a[(i, j)]).collect()).collect(), translation: (0..d).map(|i| b[i]).collect() }
    }

    /// The linear part embedded in a 3×3 matrix (identity padding in the plane).
    pub fn matrix3(&self) -> Matrix3<f64> {
        let mut m = Matrix3::identity();
        for (i, row) in self.linear.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        if self.linear.len() == 2 {
            m[(2, 2)] = 0.0;
        }
        m
    }

    pub fn translation3(&self) -> Vector3<f64> {
        let mut b = Vector3::zeros();
        for (i, x) in self.translation.iter().enumerate() {
            b[i] = *x;
        }
        b
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix3() * v + self.translation3()
    }

    pub fn determinant(&self) -> f64 {
        let m = self.matrix3();
        if self.linear.len() == 2 {
            m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        } else {
            m.determinant()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub matched: bool,
    /// `Q_i` corresponds to `P_{i + shift}` (of the reversed `P` when `reversed`).
    pub shift: usize,
    pub reversed: bool,
    pub transform: Option<AffineMap>,
    pub signature_residual: f64,
    pub geometric_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error("polygons have {0} and {1} vertices")]
    SizeMismatch(usize, usize),
    #[error("signatures have {0} and {1} entries")]
    SignatureSizeMismatch(usize, usize),
    #[error("mode {mode:?} needs {expected}D polygons, got {found}D")]
    ModeMismatch { mode: MatchMode, expected: usize, found: usize },
    #[error("inadmissible input polygon {which}: {source}")]
    Inadmissible { which: char, source: CurveError },
    #[error("matching requires closed polygons")]
    NotClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchOptions {
    pub signature_tolerance: f64,
    /// Geometric tolerance as a fraction of the diameter of `Q`.
    pub geometric_relative: f64,
    pub allow_reversal: bool,
    /// Windows with a worse condition number are not used for the exact solve.
    pub condition_limit: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self { signature_tolerance: tolerance::SIGNATURE, geometric_relative: 1e-6, allow_reversal: false, condition_limit: 1e8 }
    }
}

/// `d[s] = max_i ‖s1[i + s] − s2[i]‖∞` for every cyclic shift `s`.
/// `None` when lengths differ.
pub fn cyclic_distances(s1: &Signature, s2: &Signature) -> Option<Vec<f64>> {
    let n = s1.len();
    if n != s2.len() {
        return None;
    }
    Some((0..n).map(|s| (0..n).fold(0.0_f64, |m, i| m.max(s1.entries[(i + s) % n].distance(&s2.entries[i])))).collect())
}

/// Max-norm distance, minimized over cyclic shifts when `cyclic`. Ties go
/// to the smallest shift.
pub fn signature_distance(s1: &Signature, s2: &Signature, cyclic: bool) -> Result<(f64, usize), MatchError> {
    if s1.len() != s2.len() {
        return Err(MatchError::SignatureSizeMismatch(s1.len(), s2.len()));
    }
    if !cyclic {
        return Ok((s1.strict_distance(s2).unwrap_or(f64::INFINITY), 0));
    }
    let d = cyclic_distances(s1, s2).unwrap_or_default();
    Ok(d.iter().enumerate().fold((f64::INFINITY, 0), |best, (s, &x)| if x < best.0 { (x, s) } else { best }))
}

/// Design rows: `(x, y, 1)` for affine plane maps, `(x, y, z)` for linear space maps.
fn design_row(mode: MatchMode, v: &Vector3<f64>) -> [f64; 3] {
    match mode {
        MatchMode::Affine2 => [v.x, v.y, 1.0],
        MatchMode::Centroaffine3 => [v.x, v.y, v.z],
    }
}

fn unpack(mode: MatchMode, w: &DMatrix<f64>) -> AffineMap {
    // w is 3 × d with Q_i^T = row_i(X) · w
    match mode {
        MatchMode::Affine2 => {
            let a = Matrix3::new(w[(0, 0)], w[(1, 0)], 0.0, w[(0, 1)], w[(1, 1)], 0.0, 0.0, 0.0, 0.0);
            AffineMap::from_parts(mode, &a, &Vector3::new(w[(2, 0)], w[(2, 1)], 0.0))
        }
        MatchMode::Centroaffine3 => {
            let a = Matrix3::from_fn(|i, j| w[(j, i)]);
            AffineMap::from_parts(mode, &a, &Vector3::zeros())
        }
    }
}

/// Solve `Q_i = A P_i (+ b)` from the best-conditioned window of three
/// consecutive vertices, then refine by least squares over all vertices.
pub fn solve_transform(p: &Polygon, q: &Polygon, mode: MatchMode, condition_limit: f64) -> Option<AffineMap> {
    let n = p.len();
    let d = mode.dim().as_usize();
    let x = DMatrix::from_fn(n, 3, |i, j| design_row(mode, &p.vertices()[i])[j]);
    let y = DMatrix::from_fn(n, d, |i, j| q.vertices()[i][j]);

    let window = |s: usize| -> (DMatrix<f64>, DMatrix<f64>) {
        let rows: Vec<usize> = (0..3).map(|k| (s + k) % n).collect();
        (x.select_rows(&rows), y.select_rows(&rows))
    };
    let cond = |m: &DMatrix<f64>| {
        let sv = m.singular_values();
        let lo = sv.min();
        if lo > 0.0 {
            sv.max() / lo
        } else {
            f64::INFINITY
        }
    };
    let best = (0..n).map(|s| (s, cond(&window(s).0))).min_by(|a, b| a.1.total_cmp(&b.1))?;
    let exact = if best.1 < condition_limit {
        let (xw, yw) = window(best.0);
        xw.lu().solve(&yw)
    } else {
        None
    };
    let refined = x.clone().svd(true, true).solve(&y, f64::EPSILON * n as f64).ok();
    let residual = |w: &DMatrix<f64>| (&x * w - &y).amax();
    let w = match (exact, refined) {
        (Some(e), Some(r)) => {
            if residual(&r) <= residual(&e) {
                r
            } else {
                e
            }
        }
        (Some(e), None) => e,
        (None, Some(r)) => r,
        (None, None) => return None,
    };
    Some(unpack(mode, &w))
}

fn geometric_residual(map: &AffineMap, p: &Polygon, q: &Polygon) -> f64 {
    p.vertices().iter().zip(q.vertices()).fold(0.0_f64, |m, (a, b)| m.max((map.apply(a) - b).norm()))
}

/// Search cyclic shifts (and optionally reversal) for a signature match,
/// then recover and validate the witnessing map.
pub fn match_polygons(p: &Polygon, q: &Polygon, mode: MatchMode, options: &MatchOptions) -> Result<MatchReport, MatchError> {
    let expected = mode.dim().as_usize();
    for poly in [p, q] {
        if poly.dim() != mode.dim() {
            return Err(MatchError::ModeMismatch { mode, expected, found: poly.dim().as_usize() });
        }
        if !poly.is_closed() {
            return Err(MatchError::NotClosed);
        }
    }
    if p.len() != q.len() {
        return Err(MatchError::SizeMismatch(p.len(), q.len()));
    }
    let sq = compute_signature(q).map_err(|source| MatchError::Inadmissible { which: 'Q', source })?;
    let mut orientations = vec![(false, p.clone())];
    if options.allow_reversal {
        orientations.push((true, p.reversed()));
    }
    let geo_tol = options.geometric_relative * q.diameter();

    let mut best: Option<MatchReport> = None;
    for (reversed, candidate) in orientations {
        let sp = compute_signature(&candidate).map_err(|source| MatchError::Inadmissible { which: 'P', source })?;
        let distances = cyclic_distances(&sp, &sq).expect("equal lengths");
        let mut order: Vec<usize> = (0..distances.len()).collect();
        order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]).then(a.cmp(&b)));
        for &shift in &order {
            let sig_res = distances[shift];
            let aligned = candidate.rotated(shift as isize);
            let transform = solve_transform(&aligned, q, mode, options.condition_limit);
            let geo_res = transform.as_ref().map_or(f64::INFINITY, |t| geometric_residual(t, &aligned, q));
            let invertible = transform.as_ref().is_some_and(|t| t.determinant().abs() > tolerance::DEGENERACY_RELATIVE);
            let report = MatchReport {
                matched: sig_res < options.signature_tolerance && geo_res < geo_tol && invertible,
                shift,
                reversed,
                transform,
                signature_residual: sig_res,
                geometric_residual: geo_res,
            };
            if report.matched {
                return Ok(report);
            }
            let better = best.as_ref().is_none_or(|b| report.signature_residual < b.signature_residual);
            if better {
                best = Some(report);
            }
            if sig_res >= options.signature_tolerance {
                break;
            }
        }
    }
    Ok(best.expect("at least one orientation and shift"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Vector2};

    fn hexagon() -> Polygon {
        Polygon::planar(&[[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [2.0, 4.0], [-1.0, 2.0], [-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn distance_and_shift() {
        let s = compute_signature(&hexagon()).unwrap();
        assert_eq!(signature_distance(&s, &s, true).unwrap(), (0.0, 0));
        let (d, shift) = signature_distance(&s, &s.rotated(2), true).unwrap();
        assert_eq!((d, shift), (0.0, 2));
        assert!(signature_distance(&s, &s.rotated(2), false).unwrap().0 > 0.1);
    }

    #[test]
    fn affine_copy_with_shift() {
        let p = hexagon();
        let a = Matrix2::new(1.5, 0.3, -0.2, 0.8);
        let b = Vector2::new(3.0, -1.0);
        let q = p.rotated(3).affine_map2(&a, &b);
        let r = match_polygons(&p, &q, MatchMode::Affine2, &MatchOptions::default()).unwrap();
        assert!(r.matched);
        assert_eq!(r.shift, 3);
        let t = r.transform.unwrap();
        assert!((t.linear[0][1] - 0.3).abs() < 1e-9 && (t.translation[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn reversal_only_when_enabled() {
        let p = hexagon();
        let q = p.reversed().rotated(1).affine_map2(&Matrix2::new(0.0, 1.0, 1.0, 0.0), &Vector2::zeros());
        assert!(!match_polygons(&p, &q, MatchMode::Affine2, &MatchOptions::default()).unwrap().matched);
        let opts = MatchOptions { allow_reversal: true, ..Default::default() };
        let r = match_polygons(&p, &q, MatchMode::Affine2, &opts).unwrap();
        assert!(r.matched && r.reversed && r.shift == 1);
    }

    #[test]
    fn errors() {
        let p = hexagon();
        let small = Polygon::planar(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(match_polygons(&p, &small, MatchMode::Affine2, &MatchOptions::default()), Err(MatchError::SizeMismatch(6, 3)));
        assert!(matches!(match_polygons(&p, &p, MatchMode::Centroaffine3, &MatchOptions::default()), Err(MatchError::ModeMismatch { .. })));
    }
}
