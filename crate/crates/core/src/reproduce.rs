//! Reference experiments recomputed and compared cell by cell with their
//! expected four-decimal values. `reproduce_table` numbers them 1 to 5.

use serde::{Deserialize, Serialize};

use crate::equivalence::signature_distance;
use crate::flows::{stability_probe, EndpointRule, FlowSpec, FlowTrace, ProbeOptions, Renormalization, StopReason, TransversalRecipe};
use crate::invariants::Signature;
use crate::polygon::{Dim, Polygon};
use crate::random;
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    pub label: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: u8,
    pub title: String,
    pub cells: Vec<CellCheck>,
    pub notes: Vec<String>,
}

impl TableReport {
    fn new(table: u8, title: &str) -> Self {
        Self { table, title: title.into(), cells: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        !self.cells.is_empty() && self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.pass)
    }

    fn check(&mut self, label: impl Into<String>, expected: f64, actual: f64, tol: f64) {
        let pass = (expected - actual).abs() <= tol;
        self.cells.push(CellCheck { label: label.into(), expected, actual, tolerance: tol, pass });
    }

    /// Passes when `|actual| <= bound`.
    fn check_below(&mut self, label: impl Into<String>, bound: f64, actual: f64) {
        let pass = actual.abs() <= bound;
        self.cells.push(CellCheck { label: label.into(), expected: 0.0, actual, tolerance: bound, pass });
    }

    fn row(&mut self, name: &str, generation: usize, expected: &[f64], actual: &[f64], tol: f64) {
        for (i, (e, a)) in expected.iter().zip(actual).enumerate() {
            self.check(format!("{name}[{generation}] vertex {i}"), *e, *a, tol);
        }
    }

    fn flow_failure(&mut self, trace: &FlowTrace) {
        if let StopReason::Failed { generation, message } = &trace.stop_reason {
            self.notes.push(format!("flow failed at generation {generation}: {message}"));
            self.cells.push(CellCheck { label: "flow completed".into(), expected: 1.0, actual: 0.0, tolerance: 0.0, pass: false });
        }
    }
}

pub const TRANSVERSAL_PENTAGON: [[f64; 3]; 5] = [[10.0, 22.0, 1.0], [8.0, 2.0, 1.0], [21.0, 0.0, 1.0], [37.0, 2.0, 1.0], [48.0, 28.0, 1.0]];

/// `(generation, κ row, κ̄ row, mean κ, mean κ̄)`.
const TRANSVERSAL_ROWS: [(usize, [f64; 5], [f64; 5], f64, f64); 4] = [
    (0, [0.3529, 0.2197, 6.7931, 2.3401, 0.8113], [0.2059, 1.1970, 6.2069, -0.0508, -0.1822], 2.1034, 1.4754),
    (1, [0.6626, 0.2006, 2.9832, 1.9907, 1.2665], [-0.0057, 0.7068, 3.9409, 0.516, 0.1659], 1.4207, 1.0648),
    (2, [0.8991, 0.1980, 1.8838, 1.7414, 1.7128], [-0.1481, 0.4731, 3.2194, 0.7994, 0.5557], 1.2870, 0.9799),
    (38, [2.7020, 0.2964, 0.2123, 0.6569, 8.9517], [-0.7114, -0.1680, 1.4857, 1.0401, 11.1729], 2.5639, 2.5639),
];

pub const PLANAR_HEPTAGON: [[f64; 2]; 7] = [[19.0, 14.0], [14.0, 1.0], [15.0, 6.0], [15.0, 1.0], [8.0, 2.0], [13.0, 16.0], [3.0, 14.0]];

const PLANAR_DIVISION_ROWS: [(usize, [f64; 7], [f64; 7]); 3] = [
    (0, [0.0577, 0.4167, 7.0, 2.9429, -1.2621, 0.2462, -6.5], [-0.3846, -2.0833, -7.2, -0.71429, -0.233, -1.7231, 3.75]),
    (1, [-0.1, -52.625, 3.7601, -1.3095, -0.1225, 11.0866, 0.0284], [-1.4, 24.625, -0.5986, 0.1282, -1.4973, -7.25984, -0.1335]),
    (2, [-11.9758, 4.1652, -1.2438, -0.4682, 2.633, 0.0683, -0.1914], [-5.0645, -0.3288, 0.4609, -1.3367, -1.6375, 0.1149, 0.534]),
];

pub const SPACE_HEPTAGON: [[f64; 3]; 7] =
    [[11.0, 11.0, 11.0], [2.0, 9.0, 3.0], [1.0, 0.0, 12.0], [11.0, 7.0, 5.0], [16.0, 3.0, 13.0], [19.0, 16.0, 14.0], [3.0, 6.0, 15.0]];

/// `(generation, τ row, κ row, κ̄ row)`.
const SPACE_DIVISION_ROWS: [(usize, [f64; 7], [f64; 7], [f64; 7]); 3] = [
    (
        0,
        [-0.6633, -0.9674, 0.3333, 1.7041, -2.4104, -0.2373, 0.8788],
        [0.963, 1.1608, -0.8755, 0.7683, -3.9179, -0.088, -3.8571],
        [-0.8923, -0.5198, 0.2209, -3.3165, 3.403, -0.528, 5.381],
    ),
    (
        1,
        [-0.9353, -0.528, 0.6395, -4.0293, -1.4148, -0.5419, -0.1725],
        [1.3269, 1.3226, 0.1845, -2.3033, -3.5754, -0.5521, -0.6792],
        [-1.1188, 0.8732, -0.4358, 11.0184, 0.7806, -1.1093, -0.1472],
    ),
    (
        2,
        [-2.5512, 0.0864, 0.4804, -0.2972, -0.4865, 0.7871, -0.4657],
        [5.5328, 0.7072, 1.006, 0.256, -1.1362, 1.4537, -0.601],
        [-1.8581, 0.8153, -0.1699, 1.3297, -0.1413, 4.3427, -1.4155],
    ),
];

pub const PARALLEL_OCTAGON: [[f64; 2]; 8] =
    [[0.0, 10.0], [1.0, 10.0], [2.0, 8.0], [2.0, 5.0], [1.0, 3.0], [0.0, 3.0], [-1.0, 5.0], [-1.0, 8.0]];

const OCTAGON_ROWS: [([f64; 8], [f64; 8]); 5] = [
    ([1.0, 1.5, 1.0, 0.6667, 1.0, 1.5, 1.0, 0.6667], [2.0, 1.5, 1.3333, 1.0, 2.0, 1.5, 1.3333, 1.0]),
    ([1.5, 1.16667, 0.8571, 0.6667, 1.5, 1.16667, 0.8571, 0.6667], [2.0, 1.3333, 1.1429, 1.3333, 2.0, 1.3333, 1.1429, 1.3333]),
    ([1.5, 1.0, 0.6667, 1.0, 1.5, 1.0, 0.6667, 1.0], [2.0, 1.0, 1.3333, 1.5, 2.0, 1.0, 1.3333, 1.5]),
    ([1.5, 0.6667, 0.8333, 1.2, 1.5, 0.6667, 0.8333, 1.2], [1.5, 1.0, 1.5, 1.8, 1.5, 1.0, 1.5, 1.8]),
    ([1.0, 0.6667, 1.0, 1.5, 1.0, 0.6667, 1.0, 1.5], [1.3333, 1.0, 2.0, 1.5, 1.3333, 1.0, 2.0, 1.5]),
];

/// `(c, κ row, κ̄ row, τ row)` of the limit polygons.
pub const ENDPOINT_LIMITS: [(f64, [f64; 7], [f64; 7], [f64; 7]); 2] = [
    (
        0.1,
        [610.7435, 0.3433, 0.3433, 0.3433, 0.3433, 0.3433, 0.3433],
        [-534.4434, 0.6484, 0.6484, 0.6484, 0.6484, 0.6484, 75.9567],
        [542.8570, -0.2349, -0.2349, -0.2349, -0.2349, 7.7651, -67.5432],
    ),
    (
        0.2,
        [46.4871, 0.5274, 0.5274, 0.5274, 0.5274, 0.5274, 0.5274],
        [-31.1672, 0.8180, 0.8180, 0.8180, 0.8180, 0.8180, 14.7925],
        [34.8254, -0.1598, -0.1598, -0.1598, -0.1598, 2.8402, -11.1344],
    ),
];

/// Successive-signature difference that ends the endpoint-flow iteration.
pub const ENDPOINT_CONVERGENCE: f64 = 1e-10;
pub const ENDPOINT_MAX_GENERATIONS: usize = 20_000;
/// Seeds of the random start heptagons.
pub const ENDPOINT_SEEDS: [u64; 2] = [1, 2];

fn fixed_run(generations: usize) -> ProbeOptions {
    ProbeOptions {
        max_generations: generations,
        max_period: 0,
        tolerance: 0.0,
        renormalization: Renormalization::Frame,
        stop_on_stable: false,
    }
}

fn signature_at(trace: &FlowTrace, g: usize) -> Option<&Signature> {
    trace.generations.get(g).map(|r| &r.signature)
}

/// Transversal flow with the mean-curvature recipe from the planar pentagon.
pub fn transversal_trace(generations: usize) -> FlowTrace {
    let p = Polygon::spatial(&TRANSVERSAL_PENTAGON).expect("valid points");
    let flow = FlowSpec::Transversal { recipe: TransversalRecipe::MeanCurvatures };
    stability_probe(&flow, &p, &fixed_run(generations)).expect("admissible start").1
}

/// First generation whose two mean curvatures round to the same four
/// decimals and lie within `1e-2` of 2.5639.
pub fn mean_meeting_generation(trace: &FlowTrace) -> Option<usize> {
    let round4 = |x: f64| (x * 1e4).round();
    trace
        .generations
        .iter()
        .find(|g| {
            let (a1, a2) = (g.signature.mean_kappa(), g.signature.mean_kappa_bar());
            round4(a1) == round4(a2) && (a1 - 2.5639).abs() < 1e-2 && (a2 - 2.5639).abs() < 1e-2
        })
        .map(|g| g.generation)
}

pub fn transversal_pentagon() -> TableReport {
    let mut r = TableReport::new(1, "transversal flow keeping a planar pentagon planar");
    let trace = transversal_trace(60);
    r.flow_failure(&trace);
    for (g, k, kb, a1, a2) in TRANSVERSAL_ROWS {
        let Some(s) = signature_at(&trace, g) else { continue };
        r.row("kappa", g, &k, &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", g, &kb, &s.kappa_bars(), tolerance::TABLE);
        r.check(format!("a1[{g}]"), a1, s.mean_kappa(), tolerance::TABLE);
        r.check(format!("a2[{g}]"), a2, s.mean_kappa_bar(), tolerance::TABLE);
    }
    let meet = mean_meeting_generation(&trace);
    match meet {
        Some(g) => r.notes.push(format!("mean curvatures agree to four decimals from generation {g}")),
        None => r.notes.push("mean curvatures never meet at 2.5639 within 60 generations".into()),
    }
    r.check("generation where a1 = a2 = 2.5639 (found)", 1.0, meet.map_or(0.0, |_| 1.0), 0.0);
    let max_tau = trace.generations.iter().map(|g| g.signature.max_abs_tau()).fold(0.0, f64::max);
    r.check_below("max |tau| over 60 generations", tolerance::PLANARITY, max_tau);
    r
}

fn proportional_trace(points: Polygon, alpha: f64, generations: usize) -> FlowTrace {
    stability_probe(&FlowSpec::Proportional { alpha }, &points, &fixed_run(generations)).expect("admissible start").1
}

pub fn planar_division() -> TableReport {
    let mut r = TableReport::new(2, "division flow, alpha = 0.8, planar heptagon");
    let trace = proportional_trace(Polygon::planar(&PLANAR_HEPTAGON).expect("valid points"), 0.8, 58);
    r.flow_failure(&trace);
    for (g, k, kb) in PLANAR_DIVISION_ROWS {
        let Some(s) = signature_at(&trace, g) else { continue };
        r.row("kappa", g, &k, &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", g, &kb, &s.kappa_bars(), tolerance::TABLE);
    }
    if let Some(s) = signature_at(&trace, 58) {
        r.row("kappa", 58, &[1.0; 7], &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", 58, &[1.247; 7], &s.kappa_bars(), tolerance::TABLE);
    }
    r
}

pub fn space_division() -> TableReport {
    let mut r = TableReport::new(3, "division flow, alpha = 0.4, space heptagon");
    let trace = proportional_trace(Polygon::spatial(&SPACE_HEPTAGON).expect("valid points"), 0.4, 40);
    r.flow_failure(&trace);
    for (g, t, k, kb) in SPACE_DIVISION_ROWS {
        let Some(s) = signature_at(&trace, g) else { continue };
        r.row("tau", g, &t, &s.taus(), tolerance::TABLE);
        r.row("kappa", g, &k, &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", g, &kb, &s.kappa_bars(), tolerance::TABLE);
    }
    if let Some(s) = signature_at(&trace, 40) {
        for (i, t) in s.taus().iter().enumerate() {
            r.check_below(format!("|tau[40]| vertex {i}"), 1e-6, *t);
        }
        r.row("kappa", 40, &[1.0; 7], &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", 40, &[1.247; 7], &s.kappa_bars(), tolerance::TABLE);
    }
    r
}

pub fn octagon_inverse_pentagram() -> TableReport {
    let mut r = TableReport::new(4, "inverse pentagram map on a parallel octagon");
    let p = Polygon::planar(&PARALLEL_OCTAGON).expect("valid points");
    let trace = stability_probe(&FlowSpec::InversePentagram, &p, &fixed_run(4)).expect("admissible start").1;
    r.flow_failure(&trace);
    for (g, (k, kb)) in OCTAGON_ROWS.iter().enumerate() {
        let Some(s) = signature_at(&trace, g) else { continue };
        r.row("kappa", g, k, &s.kappas(), tolerance::TABLE);
        r.row("kappa_bar", g, kb, &s.kappa_bars(), tolerance::TABLE);
    }
    if let (Some(s0), Some(s4)) = (signature_at(&trace, 0), signature_at(&trace, 4)) {
        let (d, shift) = signature_distance(s0, s4, true).expect("same length");
        r.notes.push(format!("generation 4 equals generation 0 shifted by {shift}"));
        r.check_below("generation 4 vs shifted generation 0", tolerance::STABILITY, d);
    }
    r
}

/// Run the endpoint flow from a seeded random space heptagon to convergence.
pub fn endpoint_trace(c: f64, seed: u64, rule: EndpointRule) -> FlowTrace {
    let start = random::random_polygon(&mut random::rng(seed), 7, Dim::Three).expect("sampler succeeds");
    let options = ProbeOptions {
        max_generations: ENDPOINT_MAX_GENERATIONS,
        max_period: 0,
        tolerance: ENDPOINT_CONVERGENCE,
        renormalization: Renormalization::Frame,
        stop_on_stable: true,
    };
    stability_probe(&FlowSpec::Endpoint { c, rule }, &start, &options).expect("admissible start").1
}

pub fn endpoint_limits() -> TableReport {
    endpoint_limits_with_rule(EndpointRule::Verbatim)
}

pub fn endpoint_limits_with_rule(rule: EndpointRule) -> TableReport {
    let mut r = TableReport::new(5, "endpoint flow limits for a heptagon");
    if rule == EndpointRule::ConvexCombination {
        r.notes.push("last-vertex rule replaced by the convex combination (1-c) r_p + c r_1".into());
    }
    for (c, k, kb, t) in ENDPOINT_LIMITS {
        let traces: Vec<FlowTrace> = ENDPOINT_SEEDS.iter().map(|&seed| endpoint_trace(c, seed, rule)).collect();
        for (trace, seed) in traces.iter().zip(ENDPOINT_SEEDS) {
            r.flow_failure(trace);
            r.notes.push(format!("c = {c}, seed {seed}: {} generations, stop: {:?}", trace.generations.len() - 1, trace.stop_reason));
        }
        let s = &traces[0].last().signature;
        let name = |n: &str| format!("{n}(c={c})");
        r.row(&name("kappa"), 0, &k, &s.kappas(), tolerance::TABLE);
        r.row(&name("kappa_bar"), 0, &kb, &s.kappa_bars(), tolerance::TABLE);
        r.row(&name("tau"), 0, &t, &s.taus(), tolerance::TABLE);
        let gap = s.strict_distance(&traces[1].last().signature).unwrap_or(f64::INFINITY);
        r.check_below(format!("seed agreement (c={c})"), 1e-4, gap);
    }
    if !r.passed() {
        r.notes.push("limit differs from the expected values; the last-vertex rule is the open question to revisit".into());
    }
    r
}

pub fn reproduce_table(table: u8) -> Option<TableReport> {
    Some(match table {
        1 => transversal_pentagon(),
        2 => planar_division(),
        3 => space_division(),
        4 => octagon_inverse_pentagram(),
        5 => endpoint_limits(),
        _ => return None,
    })
}
