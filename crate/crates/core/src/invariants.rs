use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::polygon::{det2, det3, Dim, Polygon};
use crate::tolerance;

/// The two curvatures and the torsion at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VertexInvariants {
    pub kappa: f64,
    pub kappa_bar: f64,
    pub tau: f64,
}

impl VertexInvariants {
    pub const fn new(kappa: f64, kappa_bar: f64, tau: f64) -> Self {
        Self { kappa, kappa_bar, tau }
    }

    pub const fn planar(kappa: f64, kappa_bar: f64) -> Self {
        Self { kappa, kappa_bar, tau: 0.0 }
    }

    /// Max-norm distance over the three components.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.kappa - other.kappa).abs().max((self.kappa_bar - other.kappa_bar).abs()).max((self.tau - other.tau).abs())
    }

    pub fn is_finite(&self) -> bool {
        self.kappa.is_finite() && self.kappa_bar.is_finite() && self.tau.is_finite()
    }
}

/// Per-vertex invariants of a polygon.
///
/// For a closed polygon entry `i` belongs to vertex `i` and is computed
/// from the window `r_{i-1}, r_i, r_{i+1}, r_{i+2}`. For an open polygon
/// with `n` vertices there are `n - 3` entries and entry `j` belongs to
/// vertex `j + offset` with `offset = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    pub entries: Vec<VertexInvariants>,
    pub cyclic: bool,
    pub offset: isize,
}

impl Signature {
    /// A cyclic signature with the given entries.
    pub fn cyclic(entries: Vec<VertexInvariants>) -> Self {
        Self { entries, cyclic: true, offset: 0 }
    }

    /// Constant invariants repeated `p` times, cyclic.
    pub fn constant(inv: VertexInvariants, p: usize) -> Self {
        Self::cyclic(vec![inv; p])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Invariants at `vertex` (wrapping for cyclic signatures).
    pub fn at(&self, vertex: isize) -> Result<VertexInvariants, CurveError> {
        let n = self.entries.len() as isize;
        if n == 0 {
            return Err(CurveError::SignatureTooShort { vertex });
        }
        let j = vertex - self.offset;
        if self.cyclic {
            Ok(self.entries[j.rem_euclid(n) as usize])
        } else if (0..n).contains(&j) {
            Ok(self.entries[j as usize])
        } else {
            Err(CurveError::SignatureTooShort { vertex })
        }
    }

    /// Cyclic relabelling: new entry `i` is old entry `i + k`.
    pub fn rotated(&self, k: isize) -> Self {
        let n = self.entries.len() as isize;
        let entries = (0..n).map(|i| self.entries[(i + k).rem_euclid(n) as usize]).collect();
        Self { entries, ..self.clone() }
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.kappa).collect()
    }

    pub fn kappa_bars(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.kappa_bar).collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.tau).collect()
    }

    pub fn kappa_product(&self) -> f64 {
        self.entries.iter().map(|e| e.kappa).product()
    }

    pub fn mean_kappa(&self) -> f64 {
        mean(self.entries.iter().map(|e| e.kappa))
    }

    pub fn mean_kappa_bar(&self) -> f64 {
        mean(self.entries.iter().map(|e| e.kappa_bar))
    }

    pub fn max_abs_tau(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, e| m.max(e.tau.abs()))
    }

    /// Entrywise max-norm distance without any shift. `None` on length mismatch.
    pub fn strict_distance(&self, other: &Self) -> Option<f64> {
        (self.len() == other.len()).then(|| self.entries.iter().zip(&other.entries).fold(0.0_f64, |m, (a, b)| m.max(a.distance(b))))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(VertexInvariants::is_finite)
    }
}

fn mean(it: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = it.len().max(1) as f64;
    it.sum::<f64>() / n
}

/// Denominator determinant at vertex `k`: `[t_{k-1}, t_k]` in the plane and
/// `[r_{k-1}, r_k, r_{k+1}]` in space.
pub fn denominator(polygon: &Polygon, k: isize) -> f64 {
    match polygon.dim() {
        Dim::Two => det2(&polygon.edge(k - 1), &polygon.edge(k)),
        Dim::Three => det3(&polygon.vertex(k - 1), &polygon.vertex(k), &polygon.vertex(k + 1)),
    }
}

/// Invariants at vertex `k`, or `None` when the denominator is below `eps`.
pub fn invariants_at(polygon: &Polygon, k: isize, eps: f64) -> Option<VertexInvariants> {
    let d = denominator(polygon, k);
    if !(d.abs() > eps) {
        return None;
    }
    let tm = polygon.edge(k - 1);
    let t0 = polygon.edge(k);
    let t1 = polygon.edge(k + 1);
    Some(match polygon.dim() {
        Dim::Two => VertexInvariants::planar(det2(&t0, &t1) / d, det2(&tm, &t1) / d),
        Dim::Three => {
            let r0: Vector3<f64> = polygon.vertex(k);
            let r1 = polygon.vertex(k + 1);
            let r2 = polygon.vertex(k + 2);
            VertexInvariants::new(det3(&r0, &r1, &r2) / d, det3(&r1, &tm, &t1) / d, det3(&tm, &t0, &t1) / d)
        }
    })
}

/// Signature with the default degeneracy threshold.
pub fn compute_signature(polygon: &Polygon) -> Result<Signature, CurveError> {
    compute_signature_with(polygon, tolerance::DEGENERACY_RELATIVE)
}

/// Signature with a relative degeneracy threshold (scaled by `scale^dim`).
pub fn compute_signature_with(polygon: &Polygon, relative: f64) -> Result<Signature, CurveError> {
    let eps = polygon.degeneracy_tolerance(relative);
    let n = polygon.len();
    let (vertices, offset) = if polygon.is_closed() {
        (0..n as isize, 0)
    } else {
        if n < 4 {
            return Err(CurveError::TooFewVertices { required: 4, actual: n });
        }
        (1..n as isize - 2, 1)
    };
    let entries = vertices
        .map(|k| invariants_at(polygon, k, eps).ok_or(CurveError::DegenerateDeterminant(k as usize)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Signature { entries, cyclic: polygon.is_closed(), offset })
}

/// True when every torsion is below `tol` in magnitude.
pub fn is_planar(signature: &Signature, tol: f64) -> bool {
    signature.max_abs_tau() < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn triangle_and_square() {
        let tri = Polygon::planar(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let s = compute_signature(&tri).unwrap();
        for e in &s.entries {
            assert_eq!(*e, VertexInvariants::planar(1.0, -1.0));
        }
        let sq = Polygon::planar(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        for e in &compute_signature(&sq).unwrap().entries {
            assert_eq!(*e, VertexInvariants::planar(1.0, 0.0));
        }
    }

    #[test]
    fn pentagon_in_plane_z1() {
        let p = Polygon::spatial(&[[10.0, 22.0, 1.0], [8.0, 2.0, 1.0], [21.0, 0.0, 1.0], [37.0, 2.0, 1.0], [48.0, 28.0, 1.0]]).unwrap();
        let s = compute_signature(&p).unwrap();
        let want = [0.3529, 0.2197, 6.7931, 2.3401, 0.8113];
        for (e, w) in s.entries.iter().zip(want) {
            assert_abs_diff_eq!(e.kappa, w, epsilon = 1e-4);
            assert_abs_diff_eq!(e.tau, 0.0, epsilon = 1e-12);
        }
        // the lifted planar signature agrees with the planar one
        let flat = compute_signature(&p.flattened()).unwrap();
        assert!(s.strict_distance(&flat).unwrap() < 1e-12);
    }

    #[test]
    fn open_polygon_offset() {
        let closed = Polygon::planar(&[[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [2.0, 4.0], [-1.0, 2.0], [-1.0, 1.0]]).unwrap();
        let open = Polygon::new(Dim::Two, closed.vertices().to_vec(), false).unwrap();
        let so = compute_signature(&open).unwrap();
        let sc = compute_signature(&closed).unwrap();
        assert_eq!(so.len(), 3);
        assert_eq!(so.offset, 1);
        for v in 1..4 {
            assert_eq!(so.at(v).unwrap(), sc.at(v).unwrap());
        }
        assert!(so.at(0).is_err());
        assert!(so.at(4).is_err());
    }

    #[test]
    fn degenerate_vertex_reported() {
        let p = Polygon::planar(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_eq!(compute_signature(&p), Err(CurveError::DegenerateDeterminant(1)));
    }

    #[test]
    fn rotation_matches_relabelled_polygon() {
        let p = Polygon::spatial(&[[1.0, 0.2, 0.3], [0.1, 1.0, 0.4], [0.2, 0.1, 1.2], [-1.0, 0.3, 0.5], [0.4, -0.9, 0.8]]).unwrap();
        let s = compute_signature(&p).unwrap();
        let r = compute_signature(&p.rotated(2)).unwrap();
        assert!(s.rotated(2).strict_distance(&r).unwrap() < 1e-12);
    }
}
