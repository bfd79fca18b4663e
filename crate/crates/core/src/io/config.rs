use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::PolygonDocument;
use crate::flows::{EndpointRule, FlowCoefficients, FlowKind, FlowSpec, ProbeOptions, Renormalization, TransversalRecipe};
use crate::polygon::{Dim, Polygon};
use crate::random;
use crate::tolerance;

/// Everything needed to run one flow experiment reproducibly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub flow: FlowKind,
    /// Flow parameters: `alpha` (proportional, tangent), `beta` (tangent),
    /// `c` (endpoint, constant transversal recipe), `a1`/`a2`/`a3` (explicit
    /// transversal recipe).
    pub params: BTreeMap<String, f64>,
    pub endpoint_rule: EndpointRule,
    pub max_generations: usize,
    pub max_period: usize,
    pub tolerance: f64,
    pub renormalization: Renormalization,
    pub stop_on_stable: bool,
    pub seed: u64,
    /// Vertex count of the random start polygon when no input is given.
    pub vertices: usize,
    /// Dimension of the random start polygon for flows that accept both.
    pub dimension: usize,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            flow: FlowKind::Proportional,
            params: BTreeMap::new(),
            endpoint_rule: EndpointRule::Verbatim,
            max_generations: 500,
            max_period: 8,
            tolerance: tolerance::STABILITY,
            renormalization: Renormalization::Frame,
            stop_on_stable: true,
            seed: 0,
            vertices: 7,
            dimension: 3,
            input: None,
            out: None,
            svg: false,
        }
    }
}

fn unit_interval(name: &str, v: Option<f64>) -> Result<f64, String> {
    match v {
        Some(x) if x > 0.0 && x < 1.0 => Ok(x),
        Some(x) => Err(format!("{name} = {x} must lie in (0, 1)")),
        None => Err(format!("missing parameter {name}")),
    }
}

impl ExperimentConfig {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    /// Validate the parameters against the flow and build its spec for a
    /// polygon with `p` vertices.
    pub fn flow_spec(&self, p: usize) -> Result<FlowSpec, String> {
        let known: &[&str] = match self.flow {
            FlowKind::Transversal => &["c", "a1", "a2", "a3"],
            FlowKind::Tangent => &["alpha", "beta"],
            FlowKind::Proportional => &["alpha"],
            FlowKind::Pentagram | FlowKind::InversePentagram => &[],
            FlowKind::Endpoint => &["c"],
        };
        if let Some(k) = self.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(format!("parameter `{k}` does not apply to the {} flow", self.flow));
        }
        if let Some((k, v)) = self.params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(format!("parameter {k} = {v} is not finite"));
        }
        if !(self.tolerance > 0.0) {
            return Err("tolerance must be positive".into());
        }
        Ok(match self.flow {
            FlowKind::Transversal => {
                let recipe = match (self.param("c"), self.param("a1"), self.param("a2"), self.param("a3")) {
                    (Some(c), None, None, None) => TransversalRecipe::Constant(c),
                    (None, Some(a1), Some(a2), Some(a3)) => TransversalRecipe::Explicit([a1, a2, a3]),
                    (None, None, None, None) => TransversalRecipe::MeanCurvatures,
                    _ => return Err("transversal flow takes either c or all of a1, a2, a3".into()),
                };
                FlowSpec::Transversal { recipe }
            }
            FlowKind::Tangent => FlowSpec::Tangent {
                coefficients: FlowCoefficients::constant(p, self.param("alpha").unwrap_or(0.0), self.param("beta").unwrap_or(0.0)),
            },
            FlowKind::Proportional => FlowSpec::Proportional { alpha: unit_interval("alpha", self.param("alpha"))? },
            FlowKind::Pentagram => FlowSpec::Pentagram,
            FlowKind::InversePentagram => FlowSpec::InversePentagram,
            FlowKind::Endpoint => FlowSpec::Endpoint { c: unit_interval("c", self.param("c"))?, rule: self.endpoint_rule },
        })
    }

    /// Start polygon: the input document when given, otherwise a seeded
    /// random polygon suited to the flow (convex for the pentagram maps,
    /// planar in space for the transversal flow).
    pub fn start_polygon(&self) -> Result<Polygon, String> {
        if let Some(path) = &self.input {
            return PolygonDocument::read(path).and_then(|d| d.to_polygon()).map_err(|e| e.to_string());
        }
        let mut rng = random::rng(self.seed);
        let p = self.vertices;
        let poly = match self.flow {
            FlowKind::Pentagram | FlowKind::InversePentagram => random::random_convex_polygon(&mut rng, p),
            FlowKind::Transversal => random::random_planar_in_space(&mut rng, p),
            _ => {
                let dim = Dim::from_usize(self.dimension).ok_or_else(|| format!("dimension must be 2 or 3, got {}", self.dimension))?;
                random::random_polygon(&mut rng, p, dim)
            }
        };
        poly.map_err(|e| e.to_string())
    }

    pub fn probe_options(&self) -> ProbeOptions {
        ProbeOptions {
            max_generations: self.max_generations,
            max_period: self.max_period,
            tolerance: self.tolerance,
            renormalization: self.renormalization,
            stop_on_stable: self.stop_on_stable,
        }
    }
}
