use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use centroflow::chain::closure_check_with;
use centroflow::flows::{stability_probe, EndpointRule, FlowKind, Renormalization, StopReason};
use centroflow::io::{format_signature_table, svg_snapshot, write_signature_csv, ExperimentConfig, PolygonDocument};
use centroflow::reproduce::reproduce_table;
use centroflow::tolerance::{self, Tolerances};
use centroflow::{
    classify_constant, compute_signature, convexity_check, generate_constant_space, generate_regular, is_planar, match_polygons, Dim,
    MatchMode, MatchOptions, Polygon, Signature,
};

#[derive(Parser)]
#[command(name = "centroflow", version, about = "Centroaffine polygon invariants, flows and matching")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the per-vertex curvatures and torsion of a polygon.
    Invariants {
        file: PathBuf,
        /// Write the full-precision CSV to this path (`-` for stdout) instead of the table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Iterate a flow and report stability.
    Flow(FlowArgs),
    /// Decide whether Q is an affine (2D) or centroaffine (3D) image of P.
    Match {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        allow_reversal: bool,
    },
    /// Write a constant-invariant polygon.
    Generate {
        #[arg(long, value_enum, default_value = "regular")]
        kind: GenerateKind,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the reference experiments and compare cell by cell.
    Reproduce {
        /// Table number 1 to 5, or `all`.
        #[arg(long, default_value = "all")]
        table: String,
        /// Print every compared cell.
        #[arg(long)]
        verbose: bool,
    },
    /// Closure, convexity and planarity report.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Affine2,
    Centroaffine3,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Regular,
    ConstantSpace,
}

#[derive(Clone, Copy, ValueEnum)]
enum EndpointRuleArg {
    Verbatim,
    ConvexCombination,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenormArg {
    None,
    Scalar,
    Frame,
}

#[derive(Args)]
struct FlowArgs {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<FlowKind>,
    /// Flow parameter as `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Start polygon; a seeded random polygon is used when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Vertex count of the random start polygon.
    #[arg(long)]
    vertices: Option<usize>,
    /// Dimension of the random start polygon (tangent, proportional, endpoint).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    renorm: Option<RenormArg>,
    #[arg(long, value_enum)]
    endpoint_rule: Option<EndpointRuleArg>,
    #[arg(long)]
    max_period: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Also write SVG snapshots.
    #[arg(long)]
    svg: bool,
    /// Write every k-th generation (the last one is always written).
    #[arg(long, default_value_t = 1)]
    every: usize,
    /// Run to the generation cap even after stability is detected.
    #[arg(long)]
    no_stop: bool,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn read_polygon(path: &Path) -> Result<Polygon> {
    Ok(PolygonDocument::read(path)?.to_polygon()?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports hold only serializable data")
}

/// Runs one command and returns the process exit code. Errors map to 2.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Invariants { file, csv } => invariants(&file, csv.as_deref()),
        Command::Flow(args) => flow(args),
        Command::Match { p, q, mode, allow_reversal } => matching(&p, &q, mode, allow_reversal),
        Command::Generate { kind, p, l, out } => generate(kind, p, l, out.as_deref()),
        Command::Reproduce { table, verbose } => reproduce(&table, verbose),
        Command::Check { file } => check(&file),
    }
}

fn invariants(file: &Path, csv: Option<&Path>) -> Result<u8> {
    let sig = compute_signature(&read_polygon(file)?)?;
    match csv {
        Some(path) if path == Path::new("-") => write_signature_csv(std::io::stdout().lock(), &sig)?,
        Some(path) => {
            let f = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_signature_csv(f, &sig)?;
        }
        None => print!("{}", format_signature_table(&sig)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct FlowSummary<'a> {
    config: &'a ExperimentConfig,
    vertices: usize,
    dimension: usize,
    generations: usize,
    stop_reason: &'a StopReason,
    stable: bool,
    first_stable_generation: Option<usize>,
    periodic: Option<centroflow::flows::PeriodicStability>,
    residual: f64,
    max_cross_check: Option<f64>,
    final_signature: &'a Signature,
    warnings: Vec<String>,
}

fn flow_config(args: &FlowArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("malformed config {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    match (args.kind, &args.config) {
        (Some(k), _) => cfg.flow = k,
        (None, None) => bail!("--kind is required without --config"),
        _ => {}
    }
    cfg.params.extend(args.params.iter().cloned());
    cfg.max_generations = args.gens.unwrap_or(cfg.max_generations);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.input = args.input.clone().or(cfg.input);
    cfg.vertices = args.vertices.unwrap_or(cfg.vertices);
    cfg.dimension = args.dim.unwrap_or(cfg.dimension);
    cfg.out = args.out.clone().or(cfg.out);
    cfg.max_period = args.max_period.unwrap_or(cfg.max_period);
    cfg.tolerance = args.tolerance.unwrap_or(cfg.tolerance);
    cfg.svg |= args.svg;
    if args.no_stop {
        cfg.stop_on_stable = false;
    }
    if let Some(r) = args.renorm {
        cfg.renormalization = match r {
            RenormArg::None => Renormalization::None,
            RenormArg::Scalar => Renormalization::Scalar,
            RenormArg::Frame => Renormalization::Frame,
        };
    }
    if let Some(r) = args.endpoint_rule {
        cfg.endpoint_rule = match r {
            EndpointRuleArg::Verbatim => EndpointRule::Verbatim,
            EndpointRuleArg::ConvexCombination => EndpointRule::ConvexCombination,
        };
    }
    if args.every == 0 {
        bail!("--every must be at least 1");
    }
    Ok(cfg)
}

fn flow(args: FlowArgs) -> Result<u8> {
    let cfg = flow_config(&args)?;
    let start = cfg.start_polygon().map_err(|e| anyhow!(e))?;
    let spec = cfg.flow_spec(start.len()).map_err(|e| anyhow!(e))?;
    let (report, trace) = stability_probe(&spec, &start, &cfg.probe_options())?;

    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let last = trace.generations.len() - 1;
        for rec in trace.generations.iter().filter(|r| r.generation % args.every == 0 || r.generation == last) {
            let stem = dir.join(format!("gen_{:04}", rec.generation));
            let label = format!("{} generation {}", cfg.flow, rec.generation);
            PolygonDocument::from_polygon(&rec.polygon, Some(label.clone())).write(&stem.with_extension("json"))?;
            write_signature_csv(fs::File::create(stem.with_extension("csv"))?, &rec.signature)?;
            if cfg.svg {
                fs::write(stem.with_extension("svg"), svg_snapshot(&rec.polygon, &label))?;
            }
        }
    }

    let last = trace.last();
    let summary = FlowSummary {
        config: &cfg,
        vertices: start.len(),
        dimension: start.dim().as_usize(),
        generations: last.generation,
        stop_reason: &trace.stop_reason,
        stable: report.stable,
        first_stable_generation: report.first_stable_generation,
        periodic: report.periodic,
        residual: report.residual,
        max_cross_check: trace.max_cross_check(),
        final_signature: &last.signature,
        warnings: trace
            .generations
            .iter()
            .flat_map(|g| g.warnings.iter().map(move |w| format!("generation {}: {w}", g.generation)))
            .collect(),
    };
    let json = to_json(&summary);
    if let Some(dir) = &cfg.out {
        fs::write(dir.join("summary.json"), json.clone() + "\n")?;
    }
    println!("{json}");
    match &trace.stop_reason {
        StopReason::Failed { generation, message } => bail!("flow failed at generation {generation}: {message}"),
        _ => Ok(0),
    }
}

fn matching(p: &Path, q: &Path, mode: ModeArg, allow_reversal: bool) -> Result<u8> {
    let (p, q) = (read_polygon(p)?, read_polygon(q)?);
    let mode = match mode {
        ModeArg::Affine2 => MatchMode::Affine2,
        ModeArg::Centroaffine3 => MatchMode::Centroaffine3,
    };
    let options = MatchOptions { signature_tolerance: Tolerances::from_env().signature, allow_reversal, ..MatchOptions::default() };
    let report = match_polygons(&p, &q, mode, &options)?;
    println!("{}", to_json(&report));
    Ok(if report.matched { 0 } else { 1 })
}

fn generate(kind: GenerateKind, p: usize, l: usize, out: Option<&Path>) -> Result<u8> {
    let (poly, label) = match kind {
        GenerateKind::Regular => (generate_regular(p, l)?, format!("regular p={p} l={l}")),
        GenerateKind::ConstantSpace => (generate_constant_space(p, l)?, format!("constant space p={p} l={l}")),
    };
    let doc = PolygonDocument::from_polygon(&poly, Some(label));
    match out {
        Some(path) => doc.write(path)?,
        None => println!("{}", doc.to_json()),
    }
    Ok(0)
}

fn reproduce(table: &str, verbose: bool) -> Result<u8> {
    let tables: Vec<u8> = match table {
        "all" => (1..=5).collect(),
        t => vec![t.parse().ok().filter(|n| (1..=5).contains(n)).ok_or_else(|| anyhow!("table must be 1 to 5 or `all`, got `{t}`"))?],
    };
    let reports: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = tables.iter().map(|&t| s.spawn(move || reproduce_table(t))).collect();
        handles.into_iter().map(|h| h.join().expect("table thread panicked")).collect()
    });
    let mut out = std::io::stdout().lock();
    let mut all_pass = true;
    for report in reports.into_iter().flatten() {
        let passed = report.passed();
        all_pass &= passed;
        let total = report.cells.len();
        let failed = report.failures().count();
        writeln!(
            out,
            "table {}: {} ({}/{} cells) {}",
            report.table,
            if passed { "PASS" } else { "FAIL" },
            total - failed,
            total,
            report.title
        )?;
        for cell in report.cells.iter().filter(|c| verbose || !c.pass) {
            writeln!(
                out,
                "  {} {}: expected {:.4}, got {:.6} (tol {:e})",
                if cell.pass { "ok  " } else { "FAIL" },
                cell.label,
                cell.expected,
                cell.actual,
                cell.tolerance
            )?;
        }
        for note in &report.notes {
            writeln!(out, "  note: {note}")?;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct CheckReport {
    dimension: usize,
    closed: bool,
    vertices: usize,
    closure: Option<centroflow::ClosureReport>,
    convexity: Option<centroflow::ConvexityReport>,
    planar: Option<bool>,
    max_abs_tau: Option<f64>,
    constant: Option<centroflow::constant::ConstantClassification>,
}

fn check(file: &Path) -> Result<u8> {
    let poly = read_polygon(file)?;
    let tol = Tolerances::from_env();
    let sig = compute_signature(&poly)?;
    let three = poly.dim() == Dim::Three;
    let constant = sig
        .entries
        .iter()
        .all(|e| e.distance(&sig.entries[0]) < tol.signature)
        .then(|| classify_constant(&sig.entries[0], centroflow::constant::DEFAULT_MAX_PERIOD));
    let report = CheckReport {
        dimension: poly.dim().as_usize(),
        closed: poly.is_closed(),
        vertices: poly.len(),
        closure: poly.is_closed().then(|| closure_check_with(&sig, tol.closure)),
        convexity: (poly.is_closed() && !three).then(|| convexity_check(&poly)).transpose()?,
        planar: three.then(|| is_planar(&sig, tolerance::PLANARITY)),
        max_abs_tau: three.then(|| sig.max_abs_tau()),
        constant,
    };
    println!("{}", to_json(&report));
    Ok(0)
}
