//! Transversal flow `r_k -> β_k r_k` and the planarity-preserving choice of `β`.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::{observe, require_closed, wrap, FlowCoefficients, FlowError, StepOutcome};
use crate::error::CurveError;
use crate::invariants::{compute_signature, Signature, VertexInvariants};
use crate::polygon::{Dim, Polygon};
use crate::tolerance;

/// Upper-triangular update acting on `(τ, κ̄, κ, 1)` at vertex `n`, given
/// `β_{n-1}, β_n, β_{n+1}, β_{n+2}`.
pub fn transversal_update_matrix(b_prev: f64, b: f64, b_next: f64, b_next2: f64) -> Matrix4<f64> {
    let (q1, q0, qm) = (b_next2 / b_next, b_next2 / b, b_next2 / b_prev);
    Matrix4::new(
        q1,
        q1 - q0,
        qm - q0,
        q1 - 1.0, //
        0.0,
        q0,
        q0 - qm,
        0.0, //
        0.0,
        0.0,
        qm,
        0.0, //
        0.0,
        0.0,
        0.0,
        1.0,
    )
}

/// Predicted signature after scaling vertex `k` by `betas[k]`.
pub fn predict_transversal(signature: &Signature, betas: &[f64]) -> Signature {
    let p = signature.len();
    let entries = (0..p as isize)
        .map(|n| {
            let b = |j: isize| betas[wrap(j, p)];
            let e = signature.entries[n as usize];
            let v = transversal_update_matrix(b(n - 1), b(n), b(n + 1), b(n + 2)) * Vector4::new(e.tau, e.kappa_bar, e.kappa, 1.0);
            VertexInvariants::new(v[2], v[1], v[0])
        })
        .collect();
    Signature { entries, ..signature.clone() }
}

/// Scale every vertex of a closed space polygon by its `β`.
pub fn transversal_step(polygon: &Polygon, betas: &[f64]) -> Result<StepOutcome, FlowError> {
    require_closed(polygon)?;
    if polygon.dim() != Dim::Three {
        return Err(CurveError::WrongDimension { expected: 3, found: 2 }.into());
    }
    let p = polygon.len();
    if betas.len() != p {
        return Err(FlowError::CoefficientCount { expected: p, found: betas.len() });
    }
    if let Some(i) = betas.iter().position(|b| !(b.abs() > 0.0) || !b.is_finite()) {
        return Err(FlowError::ZeroBeta(i));
    }
    let signature = compute_signature(polygon)?;
    let verts = polygon.vertices().iter().zip(betas).map(|(v, b)| v * *b).collect();
    let next = polygon.with_vertices(verts);
    let observed = observe(&next)?;
    Ok(StepOutcome {
        polygon: next,
        predicted: Some(predict_transversal(&signature, betas)),
        observed,
        coefficients: Some(FlowCoefficients { alphas: Vec::new(), betas: betas.to_vec() }),
        warnings: Vec::new(),
    })
}

/// How the three centroaffine-invariant weights of `1/β` are chosen each generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransversalRecipe {
    /// `a1 = mean κ`, `a2 = mean κ̄`, `a3 = (a1 + a2) / 2`.
    MeanCurvatures,
    /// `a1 = a2 = a3 = c`.
    Constant(f64),
    Explicit([f64; 3]),
}

impl TransversalRecipe {
    pub fn weights(&self, signature: &Signature) -> [f64; 3] {
        match *self {
            TransversalRecipe::MeanCurvatures => {
                let a1 = signature.mean_kappa();
                let a2 = signature.mean_kappa_bar();
                [a1, a2, 0.5 * (a1 + a2)]
            }
            TransversalRecipe::Constant(c) => [c; 3],
            TransversalRecipe::Explicit(a) => a,
        }
    }
}

/// Linear constraint `S x = 0` on `x = 1/β` that keeps a planar polygon
/// planar, together with a basis of its kernel built from standardized
/// vertex positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarityConstraintMatrix {
    pub s: DMatrix<f64>,
    pub rank: usize,
    /// Kernel basis: component `j` of `A r_i` for `j = 0, 1, 2`, where `A`
    /// maps the three standard vertices to the unit vectors.
    pub nullspace_basis: [DVector<f64>; 3],
    /// Index of the first of the three standard vertices.
    pub standard_start: usize,
}

/// Row `n`: `κ_n` at `n-1`, `−κ_n−κ̄_n` at `n`, `1+κ̄_n` at `n+1`, `−1` at `n+2`.
pub fn constraint_matrix(signature: &Signature) -> DMatrix<f64> {
    let p = signature.len();
    let mut s = DMatrix::zeros(p, p);
    for n in 0..p as isize {
        let e = signature.entries[n as usize];
        let row = n as usize;
        s[(row, wrap(n - 1, p))] += e.kappa;
        s[(row, wrap(n, p))] += -e.kappa - e.kappa_bar;
        s[(row, wrap(n + 1, p))] += 1.0 + e.kappa_bar;
        s[(row, wrap(n + 2, p))] += -1.0;
    }
    s
}

/// Numerical rank with threshold `p · ε · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thresh = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * smax;
    sv.iter().filter(|&&s| s > thresh).count()
}

fn triple(polygon: &Polygon, start: usize) -> Matrix3<f64> {
    let s = start as isize;
    Matrix3::from_columns(&[polygon.vertex(s), polygon.vertex(s + 1), polygon.vertex(s + 2)])
}

fn condition(m: &Matrix3<f64>) -> f64 {
    let sv = m.singular_values();
    let (lo, hi) = (sv.min(), sv.max());
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Limit on the condition number of the standard triple before another
/// consecutive triple is tried.
pub const STANDARD_CONDITION_LIMIT: f64 = 1e8;

impl PlanarityConstraintMatrix {
    pub fn build(signature: &Signature, polygon: &Polygon) -> Result<Self, FlowError> {
        let p = signature.len();
        let s = constraint_matrix(signature);
        let rank = numerical_rank(&s);
        if rank != p - 3 {
            return Err(FlowError::RankMismatch { expected: p - 3, found: rank });
        }
        let mut standard_start = 0;
        if condition(&triple(polygon, 0)) > STANDARD_CONDITION_LIMIT {
            standard_start = (0..p).min_by(|&a, &b| condition(&triple(polygon, a)).total_cmp(&condition(&triple(polygon, b)))).unwrap_or(0);
        }
        let a = triple(polygon, standard_start).try_inverse().ok_or(CurveError::DegenerateSeed { determinant: 0.0 })?;
        let standardized: Vec<_> = polygon.vertices().iter().map(|v| a * v).collect();
        let nullspace_basis = [0, 1, 2].map(|j| DVector::from_iterator(p, standardized.iter().map(|v| v[j])));
        Ok(Self { s, rank, nullspace_basis, standard_start })
    }

    /// Max-norm of `S x`.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        (&self.s * x).amax()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarityBetas {
    pub betas: Vec<f64>,
    pub weights: [f64; 3],
    pub constraint: PlanarityConstraintMatrix,
    /// Max-norm of `S · (1/β)`.
    pub residual: f64,
}

/// `β` with `1/β = a1 V̄1 + a2 V̄2 + a3 V̄3`, so that the transversal step keeps
/// the closed planar polygon planar.
pub fn planarity_betas(signature: &Signature, polygon: &Polygon, recipe: &TransversalRecipe) -> Result<PlanarityBetas, FlowError> {
    require_closed(polygon)?;
    if polygon.dim() != Dim::Three {
        return Err(CurveError::WrongDimension { expected: 3, found: 2 }.into());
    }
    let p = polygon.len();
    if p < 4 {
        return Err(CurveError::TooFewVertices { required: 4, actual: p }.into());
    }
    if signature.len() != p {
        return Err(FlowError::CoefficientCount { expected: p, found: signature.len() });
    }
    let max_tau = signature.max_abs_tau();
    if !(max_tau < tolerance::PLANARITY) {
        return Err(FlowError::NotPlanar { max_tau });
    }
    let constraint = PlanarityConstraintMatrix::build(signature, polygon)?;
    let weights = recipe.weights(signature);
    let [v1, v2, v3] = &constraint.nullspace_basis;
    let inv_beta = v1 * weights[0] + v2 * weights[1] + v3 * weights[2];
    let floor = tolerance::DEGENERACY_RELATIVE * inv_beta.amax().max(f64::MIN_POSITIVE);
    if let Some(i) = inv_beta.iter().position(|x| !(x.abs() > floor)) {
        return Err(FlowError::ZeroDenominator(i));
    }
    let residual = constraint.residual(&inv_beta);
    Ok(PlanarityBetas { betas: inv_beta.iter().map(|x| 1.0 / x).collect(), weights, constraint, residual })
}
