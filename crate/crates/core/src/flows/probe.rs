//! Iterating a flow and detecting stable or periodically stable signatures.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use super::{
    endpoint_flow_step, inverse_pentagram_step, pentagram_step, planarity_betas, proportional_step, tangent_step, transversal_step,
    EndpointRule, FlowCoefficients, FlowError, StepOutcome, TransversalRecipe,
};
use crate::equivalence::cyclic_distances;
use crate::invariants::{compute_signature, Signature};
use crate::polygon::{Dim, Polygon};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    Transversal,
    Tangent,
    Proportional,
    Pentagram,
    InversePentagram,
    Endpoint,
}

impl FlowKind {
    pub const ALL: [FlowKind; 6] = [
        FlowKind::Transversal,
        FlowKind::Tangent,
        FlowKind::Proportional,
        FlowKind::Pentagram,
        FlowKind::InversePentagram,
        FlowKind::Endpoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlowKind::Transversal => "transversal",
            FlowKind::Tangent => "tangent",
            FlowKind::Proportional => "proportional",
            FlowKind::Pentagram => "pentagram",
            FlowKind::InversePentagram => "inverse-pentagram",
            FlowKind::Endpoint => "endpoint",
        }
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlowKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FlowKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown flow kind `{s}`"))
    }
}

/// A flow together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FlowSpec {
    /// Transversal flow with `β` chosen each generation to keep the polygon planar.
    Transversal {
        recipe: TransversalRecipe,
    },
    /// Tangent flow with fixed per-vertex coefficients.
    Tangent {
        coefficients: FlowCoefficients,
    },
    Proportional {
        alpha: f64,
    },
    Pentagram,
    InversePentagram,
    Endpoint {
        c: f64,
        rule: EndpointRule,
    },
}

impl FlowSpec {
    pub fn kind(&self) -> FlowKind {
        match self {
            FlowSpec::Transversal { .. } => FlowKind::Transversal,
            FlowSpec::Tangent { .. } => FlowKind::Tangent,
            FlowSpec::Proportional { .. } => FlowKind::Proportional,
            FlowSpec::Pentagram => FlowKind::Pentagram,
            FlowSpec::InversePentagram => FlowKind::InversePentagram,
            FlowSpec::Endpoint { .. } => FlowKind::Endpoint,
        }
    }

    pub fn step(&self, polygon: &Polygon) -> Result<StepOutcome, FlowError> {
        match self {
            FlowSpec::Transversal { recipe } => {
                let signature = compute_signature(polygon)?;
                let pb = planarity_betas(&signature, polygon, recipe)?;
                transversal_step(polygon, &pb.betas)
            }
            FlowSpec::Tangent { coefficients } => tangent_step(polygon, coefficients),
            FlowSpec::Proportional { alpha } => proportional_step(polygon, *alpha),
            FlowSpec::Pentagram => pentagram_step(polygon),
            FlowSpec::InversePentagram => inverse_pentagram_step(polygon),
            FlowSpec::Endpoint { c, rule } => endpoint_flow_step(polygon, *c, *rule),
        }
    }
}

/// Coordinate normalization applied after every generation. All variants
/// leave the signature unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Renormalization {
    None,
    /// Divide by the largest absolute coordinate.
    Scalar,
    /// Replace the coordinate matrix by the orthonormal factor of its QR
    /// decomposition (a linear map; planar polygons are centred first).
    #[default]
    Frame,
}

impl FromStr for Renormalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Renormalization::None),
            "scalar" => Ok(Renormalization::Scalar),
            "frame" => Ok(Renormalization::Frame),
            _ => Err(format!("unknown renormalization `{s}`")),
        }
    }
}

impl Renormalization {
    /// Returns the normalized polygon and the volume scale factor applied.
    pub fn apply(self, polygon: &Polygon) -> (Polygon, f64) {
        match self {
            Renormalization::None => (polygon.clone(), 1.0),
            Renormalization::Scalar => {
                let s = 1.0 / polygon.scale();
                (polygon.scaled(s), s)
            }
            Renormalization::Frame => frame_normalize(polygon).unwrap_or_else(|| Renormalization::Scalar.apply(polygon)),
        }
    }
}

fn frame_normalize(polygon: &Polygon) -> Option<(Polygon, f64)> {
    let d = polygon.dim().as_usize();
    let shift = match polygon.dim() {
        Dim::Two => polygon.centroid(),
        Dim::Three => Vector3::zeros(),
    };
    let n = polygon.len();
    let x = DMatrix::from_fn(n, d, |i, j| polygon.vertices()[i][j] - shift[j]);
    let qr = x.qr();
    let r = qr.r();
    let det = r.determinant();
    if !(det.abs() > f64::MIN_POSITIVE) || !det.is_finite() {
        return None;
    }
    let q = qr.q();
    let verts = (0..n)
        .map(|i| {
            let mut v = Vector3::zeros();
            for j in 0..d {
                v[j] = q[(i, j)];
            }
            v
        })
        .collect();
    Some((polygon.with_vertices(verts), det.abs().powf(-1.0 / d as f64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub max_generations: usize,
    /// Largest lag `q` tested for periodic stability.
    pub max_period: usize,
    /// Max-norm signature difference treated as equality.
    pub tolerance: f64,
    pub renormalization: Renormalization,
    /// Stop at the first stable generation instead of running to the cap.
    pub stop_on_stable: bool,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            max_generations: 500,
            max_period: 8,
            tolerance: tolerance::STABILITY,
            renormalization: Renormalization::Frame,
            stop_on_stable: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub polygon: Polygon,
    pub signature: Signature,
    /// Coefficients that produced this generation from the previous one.
    pub coefficients: Option<FlowCoefficients>,
    pub rescale_factor: f64,
    /// Gap between the closed-form prediction and the recomputed signature.
    pub cross_check: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Stable,
    Periodic,
    /// Generation cap reached without stability.
    NoConvergence,
    /// The flow could not be applied at some generation.
    Failed {
        generation: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub kind: FlowKind,
    pub generations: Vec<GenerationRecord>,
    pub stop_reason: StopReason,
}

impl FlowTrace {
    pub fn last(&self) -> &GenerationRecord {
        self.generations.last().expect("trace always holds generation 0")
    }

    pub fn max_cross_check(&self) -> Option<f64> {
        self.generations.iter().filter_map(|g| g.cross_check).reduce(f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicStability {
    pub period: usize,
    /// `s_{m+q}[i] = s_m[i + cyclic_shift]`.
    pub cyclic_shift: usize,
    /// More than one shift matched.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub periodic: Option<PeriodicStability>,
    /// First generation whose next descendant has the same signature.
    pub first_stable_generation: Option<usize>,
    /// Last consecutive-generation signature difference.
    pub residual: f64,
}

/// Iterate `flow` from `polygon` and report stability.
///
/// Generation `g` is stable when generation `g + 1` has the same signature
/// within `options.tolerance`; it is periodically stable with period `q`
/// when generation `g + q` has the same signature up to a cyclic shift.
pub fn stability_probe(flow: &FlowSpec, polygon: &Polygon, options: &ProbeOptions) -> Result<(StabilityReport, FlowTrace), FlowError> {
    let signature = compute_signature(polygon)?;
    let mut generations = vec![GenerationRecord {
        generation: 0,
        polygon: polygon.clone(),
        signature,
        coefficients: None,
        rescale_factor: 1.0,
        cross_check: None,
        warnings: Vec::new(),
    }];
    let mut report = StabilityReport { stable: false, periodic: None, first_stable_generation: None, residual: f64::INFINITY };
    let mut stop_reason = StopReason::NoConvergence;

    for g in 1..=options.max_generations {
        let prev = generations.last().expect("non-empty");
        let outcome = match flow.step(&prev.polygon) {
            Ok(o) => o,
            Err(e) => {
                stop_reason = StopReason::Failed { generation: g, message: e.to_string() };
                break;
            }
        };
        let cross_check = outcome.cross_check();
        let (polygon, rescale_factor) = options.renormalization.apply(&outcome.polygon);
        let signature = match compute_signature(&polygon) {
            Ok(s) => s,
            Err(e) => {
                stop_reason = StopReason::Failed { generation: g, message: e.to_string() };
                break;
            }
        };
        let diff = signature.strict_distance(&prev.signature).unwrap_or(f64::INFINITY);
        report.residual = diff;
        generations.push(GenerationRecord {
            generation: g,
            polygon,
            signature,
            coefficients: outcome.coefficients,
            rescale_factor,
            cross_check,
            warnings: outcome.warnings,
        });

        if diff < options.tolerance {
            report.stable = true;
            report.first_stable_generation.get_or_insert(g - 1);
            if options.stop_on_stable {
                stop_reason = StopReason::Stable;
                break;
            }
            continue;
        }
        if let Some(periodic) = find_period(&generations, options) {
            report.periodic = Some(periodic);
            stop_reason = StopReason::Periodic;
            break;
        }
    }
    if report.stable && stop_reason == StopReason::NoConvergence {
        stop_reason = StopReason::Stable;
    }
    Ok((report, FlowTrace { kind: flow.kind(), generations, stop_reason }))
}

fn find_period(generations: &[GenerationRecord], options: &ProbeOptions) -> Option<PeriodicStability> {
    let g = generations.len() - 1;
    let current = &generations[g].signature;
    for q in 1..=options.max_period.min(g) {
        let earlier = &generations[g - q].signature;
        let distances = cyclic_distances(earlier, current)?;
        let hits: Vec<usize> = (0..distances.len()).filter(|&s| distances[s] < options.tolerance && !(q == 1 && s == 0)).collect();
        if let Some(&best) = hits.iter().min_by(|&&a, &&b| distances[a].total_cmp(&distances[b]).then(a.cmp(&b))) {
            return Some(PeriodicStability { period: q, cyclic_shift: best, ambiguous: hits.len() > 1 });
        }
    }
    None
}
