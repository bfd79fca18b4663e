//! Frame chain: the 3×3 transition matrices and reconstruction of a
//! polygon from its invariants.
//!
//! With the frame `F_k = (r_{k+1}, r_k, r_{k-1})` (columns) the chain reads
//! `F_{k+1} = F_k L_k`, i.e.
//! `r_{k+2} = κ_k r_{k-1} − (κ_k + κ̄_k) r_k + (1 + κ̄_k + τ_k) r_{k+1}`.
//! The coefficients sum to `1 + τ_k`, so for `τ = 0` the recurrence is an
//! affine combination and applies unchanged to planar polygons.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::invariants::{Signature, VertexInvariants};
use crate::polygon::{det2, det3, Dim, Polygon};
use crate::tolerance;

/// `|κ|` below this makes a transition matrix non-invertible.
pub const SINGULAR_KAPPA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix(pub Matrix3<f64>);

impl TransitionMatrix {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// `L = [[1+κ̄+τ, 1, 0], [−κ−κ̄, 0, 1], [κ, 0, 0]]`.
pub fn transition_matrix(inv: &VertexInvariants) -> TransitionMatrix {
    let VertexInvariants { kappa: k, kappa_bar: kb, tau: t } = *inv;
    TransitionMatrix(Matrix3::new(1.0 + kb + t, 1.0, 0.0, -k - kb, 0.0, 1.0, k, 0.0, 0.0))
}

/// Closed-form inverse of [`transition_matrix`]. `vertex` only labels the error.
pub fn inverse_transition_matrix(inv: &VertexInvariants, vertex: usize) -> Result<TransitionMatrix, CurveError> {
    let VertexInvariants { kappa: k, kappa_bar: kb, tau: t } = *inv;
    if !(k.abs() >= SINGULAR_KAPPA) {
        return Err(CurveError::SingularChain(vertex));
    }
    Ok(TransitionMatrix(Matrix3::new(0.0, 0.0, 1.0 / k, 1.0, 0.0, -(1.0 + kb + t) / k, 0.0, 1.0, (k + kb) / k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// Three consecutive vertices `r_f, r_{f+1}, r_{f+2}` with `f = first_vertex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    pub vertices: [Vector3<f64>; 3],
    pub first_vertex: isize,
    pub dim: Dim,
}

impl Seed {
    /// Take `r_f, r_{f+1}, r_{f+2}` from a polygon.
    pub fn from_polygon(polygon: &Polygon, first_vertex: isize) -> Self {
        let f = first_vertex;
        Self { vertices: [polygon.vertex(f), polygon.vertex(f + 1), polygon.vertex(f + 2)], first_vertex, dim: polygon.dim() }
    }

    /// Independence measure: edge determinant in the plane, position determinant in space.
    pub fn determinant(&self) -> f64 {
        let [a, b, c] = &self.vertices;
        match self.dim {
            Dim::Two => det2(&(b - a), &(c - b)),
            Dim::Three => det3(a, b, c),
        }
    }

    fn check(&self) -> Result<(), CurveError> {
        let scale = self.vertices.iter().flat_map(|v| v.iter().copied()).fold(0.0_f64, |m, c| m.max(c.abs()));
        let eps = tolerance::DEGENERACY_RELATIVE * scale.powi(self.dim.as_usize() as i32);
        let determinant = self.determinant();
        if determinant.abs() > eps && determinant.is_finite() {
            Ok(())
        } else {
            Err(CurveError::DegenerateSeed { determinant })
        }
    }
}

/// Extend a seed by `steps` vertices using the signature.
///
/// Forward appends `r_{f+3}, r_{f+4}, …`; backward prepends `r_{f-1}, r_{f-2}, …`.
/// The result is an open polygon in ascending vertex order with `steps + 3`
/// vertices.
pub fn reconstruct(seed: &Seed, signature: &Signature, steps: usize, direction: Direction) -> Result<Polygon, CurveError> {
    seed.check()?;
    let mut verts: Vec<Vector3<f64>> = seed.vertices.to_vec();
    let f = seed.first_vertex;
    match direction {
        Direction::Forward => {
            for s in 0..steps as isize {
                // r_{k+2} with k = f + 1 + s
                let k = f + 1 + s;
                let inv = signature.at(k)?;
                let n = verts.len();
                let (rm, r0, r1) = (verts[n - 3], verts[n - 2], verts[n - 1]);
                verts.push(rm * inv.kappa - r0 * (inv.kappa + inv.kappa_bar) + r1 * (1.0 + inv.kappa_bar + inv.tau));
            }
        }
        Direction::Backward => {
            let mut front: Vec<Vector3<f64>> = Vec::with_capacity(steps);
            for s in 0..steps as isize {
                // r_{k-1} with k = f - s
                let k = f - s;
                let inv = signature.at(k)?;
                if !(inv.kappa.abs() >= SINGULAR_KAPPA) {
                    return Err(CurveError::SingularChain(k.rem_euclid(signature.len().max(1) as isize) as usize));
                }
                let (r0, r1, r2) = match front.len() {
                    0 => (verts[0], verts[1], verts[2]),
                    1 => (front[0], verts[0], verts[1]),
                    2 => (front[1], front[0], verts[0]),
                    m => (front[m - 1], front[m - 2], front[m - 3]),
                };
                front.push((r2 + r0 * (inv.kappa + inv.kappa_bar) - r1 * (1.0 + inv.kappa_bar + inv.tau)) / inv.kappa);
            }
            front.reverse();
            front.extend(verts);
            verts = front;
        }
    }
    let verts = match seed.dim {
        Dim::Two => verts.into_iter().map(|v| Vector3::new(v.x, v.y, 0.0)).collect(),
        Dim::Three => verts,
    };
    Polygon::new(seed.dim, verts, false)
}

/// Rebuild a closed polygon with `p = signature.len()` vertices, seeded with
/// vertices `0, 1, 2`. Returns the polygon and the closure gap: the largest
/// distance between the three extra vertices `r_p, r_{p+1}, r_{p+2}` and the seed.
pub fn reconstruct_closed(seed: &[Vector3<f64>; 3], dim: Dim, signature: &Signature) -> Result<(Polygon, f64), CurveError> {
    let p = signature.len();
    let seed = Seed { vertices: *seed, first_vertex: 0, dim };
    let open = reconstruct(&seed, &Signature { cyclic: true, ..signature.clone() }, p, Direction::Forward)?;
    let v = open.vertices();
    let gap = (0..3).fold(0.0_f64, |m, i| m.max((v[p + i] - v[i]).norm()));
    Ok((Polygon::new(dim, v[..p].to_vec(), true)?, gap))
}

/// Closure diagnostics of a cyclic signature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub is_closed: bool,
    /// Frobenius norm of `L_0 L_1 … L_{p-1} − E`.
    pub matrix_product_defect: f64,
    pub kappa_product: f64,
    /// For even `p`: whether `L_0 … L_{p/2-1} = −E`, i.e. `r_{k+p/2} = −r_k`.
    pub centrosymmetric: Option<bool>,
    pub half_turn_defect: Option<f64>,
}

/// Product `L_0 L_1 … L_{m-1}`.
pub fn chain_product(signature: &Signature, m: usize) -> Matrix3<f64> {
    let mut acc = Matrix3::identity();
    for e in signature.entries.iter().cycle().take(m) {
        acc *= transition_matrix(e).0;
    }
    acc
}

pub fn closure_check(signature: &Signature) -> ClosureReport {
    closure_check_with(signature, tolerance::CLOSURE)
}

pub fn closure_check_with(signature: &Signature, tol: f64) -> ClosureReport {
    let p = signature.len();
    let defect = (chain_product(signature, p) - Matrix3::identity()).norm();
    let half = (p.is_multiple_of(2) && p > 0).then(|| (chain_product(signature, p / 2) + Matrix3::identity()).norm());
    ClosureReport {
        is_closed: defect < tol,
        matrix_product_defect: defect,
        kappa_product: signature.kappa_product(),
        centrosymmetric: half.map(|h| h < tol),
        half_turn_defect: half,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::compute_signature;

    #[test]
    fn determinant_and_columns() {
        let l = transition_matrix(&VertexInvariants::planar(1.0, 0.0));
        assert_eq!(l.determinant(), 1.0);
        for c in 0..3 {
            assert_eq!(l.0.column(c).sum(), 1.0);
        }
    }

    #[test]
    fn triangle_chain_closes_in_three() {
        let l = transition_matrix(&VertexInvariants::planar(1.0, -1.0)).0;
        assert!((l * l * l - Matrix3::identity()).norm() < 1e-15);
    }

    #[test]
    fn inverse_contract() {
        let inv = VertexInvariants::new(2.0, 0.5, 0.1);
        let l = transition_matrix(&inv).0;
        let li = inverse_transition_matrix(&inv, 0).unwrap().0;
        assert!((l * li - Matrix3::identity()).norm() < 1e-12);
        assert!((li * l - Matrix3::identity()).norm() < 1e-12);
        assert_eq!(inverse_transition_matrix(&VertexInvariants::planar(0.0, 1.0), 4), Err(CurveError::SingularChain(4)));
    }

    #[test]
    fn frame_relation_holds() {
        let p = Polygon::spatial(&[[1.0, 0.2, 0.3], [0.1, 1.0, 0.4], [0.2, 0.1, 1.2], [-1.0, 0.3, 0.5], [0.4, -0.9, 0.8]]).unwrap();
        let s = compute_signature(&p).unwrap();
        for k in 0..5isize {
            let frame = |j: isize| Matrix3::from_columns(&[p.vertex(j + 1), p.vertex(j), p.vertex(j - 1)]);
            let lhs = frame(k) * transition_matrix(&s.at(k).unwrap()).0;
            assert!((lhs - frame(k + 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn backward_and_forward_agree() {
        let p = Polygon::planar(&[[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [2.0, 4.0], [-1.0, 2.0], [-1.0, 1.0]]).unwrap();
        let s = compute_signature(&p).unwrap();
        let fwd = reconstruct(&Seed::from_polygon(&p, 0), &s, 3, Direction::Forward).unwrap();
        let bwd = reconstruct(&Seed::from_polygon(&p, 3), &s, 3, Direction::Backward).unwrap();
        for i in 0..6 {
            assert!((fwd.vertices()[i] - p.vertex(i as isize)).norm() < 1e-12);
            assert!((bwd.vertices()[i] - p.vertex(i as isize)).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_seed() {
        let seed = Seed { vertices: [Vector3::zeros(), Vector3::x(), Vector3::x() * 2.0], first_vertex: 0, dim: Dim::Two };
        let s = Signature::constant(VertexInvariants::planar(1.0, 1.0), 6);
        assert!(matches!(reconstruct(&seed, &s, 3, Direction::Forward), Err(CurveError::DegenerateSeed { .. })));
    }

    #[test]
    fn planar_minus_one_does_not_close() {
        let s = Signature::constant(VertexInvariants::planar(-1.0, 1.0), 6);
        assert!(!closure_check(&s).is_closed);
    }
}
