//! Polygon flows: each step moves the vertices geometrically and, where a
//! closed form exists, predicts the next signature from the current one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::CurveError;
use crate::invariants::{compute_signature, Signature};
use crate::polygon::Polygon;

pub mod endpoint;
pub mod pentagram;
pub mod probe;
pub mod tangent;
pub mod transversal;

pub use endpoint::{endpoint_flow_step, EndpointRule};
pub use pentagram::{
    inverse_pentagram_coefficients, inverse_pentagram_ratios, inverse_pentagram_step, pentagram_coefficients, pentagram_ratios,
    pentagram_step, PentagramRatios,
};
pub use probe::{
    stability_probe, FlowKind, FlowSpec, FlowTrace, GenerationRecord, PeriodicStability, ProbeOptions, Renormalization, StabilityReport,
    StopReason,
};
pub use tangent::{proportional_step, tangent_step};
pub use transversal::{planarity_betas, transversal_step, PlanarityBetas, PlanarityConstraintMatrix, TransversalRecipe};

/// Per-vertex motion coefficients.
///
/// Tangent flows move `r_k` by `α_k t_k + β_k t_{k-1}`; the transversal
/// flow scales `r_k` by `β_k` and leaves `alphas` empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FlowCoefficients {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl FlowCoefficients {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Self {
        Self { alphas, betas }
    }

    pub fn constant(p: usize, alpha: f64, beta: f64) -> Self {
        Self { alphas: vec![alpha; p], betas: vec![beta; p] }
    }
}

/// Result of one flow step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub polygon: Polygon,
    /// Closed-form prediction of the new signature, when the flow has one.
    pub predicted: Option<Signature>,
    /// Signature recomputed from the new vertices.
    pub observed: Signature,
    pub coefficients: Option<FlowCoefficients>,
    pub warnings: Vec<String>,
}

impl StepOutcome {
    /// Max-norm gap between prediction and recomputation.
    pub fn cross_check(&self) -> Option<f64> {
        self.predicted.as_ref().and_then(|p| p.strict_distance(&self.observed))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Curve(#[from] CurveError),

    #[error("flow output is not admissible: {0}")]
    DegenerateResult(CurveError),

    #[error("beta vanishes at vertex {0}")]
    ZeroBeta(usize),

    #[error("transfer matrix is singular at vertex {0}")]
    SingularTransfer(usize),

    #[error("polygon is not convex")]
    NotConvex,

    #[error("denominator vanishes at vertex {0}")]
    DenominatorVanishes(usize),

    #[error("second curvature vanishes at vertex {0}")]
    ZeroKappaBar(usize),

    #[error("constraint matrix has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("recipe makes 1/beta vanish at vertex {0}")]
    ZeroDenominator(usize),

    #[error("polygon is not planar (max |tau| = {max_tau:e})")]
    NotPlanar { max_tau: f64 },

    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },

    #[error("invalid flow parameter: {0}")]
    InvalidParameter(String),
}

pub(crate) fn require_closed(polygon: &Polygon) -> Result<(), FlowError> {
    if polygon.is_closed() {
        Ok(())
    } else {
        Err(CurveError::NotClosed.into())
    }
}

pub(crate) fn observe(polygon: &Polygon) -> Result<Signature, FlowError> {
    compute_signature(polygon).map_err(FlowError::DegenerateResult)
}

/// Cyclic index helper.
#[inline]
pub(crate) fn wrap(i: isize, p: usize) -> usize {
    i.rem_euclid(p as isize) as usize
}
