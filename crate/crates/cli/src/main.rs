#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use menger_core::energy::{constants_ledger, energy_brute, energy_mc, voluminous_search};
use menger_core::flatness::{
    beta_number, default_schedule, flatness, gap_ratio_scan, graph_extract, holder_exponent, tangent_plane,
    GraphOptions, GraphPatch, PlaneFit, TangentStop,
};
use menger_core::generators::{generate, GeneratorSpec, Shape};
use menger_core::pointcloud::{ahlfors_scan, load_cloud, sample_centers, PointCloud};
use menger_core::report::{format_number, to_value, Report};
use menger_core::verify::{parse_suite, run_suite};
use menger_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "menger", version, about = "Discrete Menger-curvature and flatness analysis of weighted point clouds")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// key = value config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override any config key, e.g. `--set mc.batch=500`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report path (the cloud path for `generate`); stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// CSV table path for commands that produce one.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic weighted cloud and write it as CSV to --output.
    Generate(GenerateArgs),
    /// Discrete integral Menger curvature energy.
    Energy(EnergyArgs),
    /// Minimax flatness β̄ in a closed ball.
    Beta(BallArgs),
    /// Bilateral flatness θ̄ together with β̄.
    Theta(BallArgs),
    /// θ̄/β̄ over centers and radii.
    GapScan(ScanArgs),
    /// Lower Ahlfors ratio μ(B(x,r))/r^m over centers and radii.
    Ahlfors(ScanArgs),
    /// Tangent plane along a halving radius schedule.
    Tangent(TangentArgs),
    /// Graph patch over the tangent plane.
    Graph(GraphArgs),
    /// Hölder exponent of the derivative of a graph patch.
    Holder(HolderArgs),
    /// Search for a voluminous simplex rooted at a point.
    SearchSimplex(SearchArgs),
    /// Constants chain for an energy bound.
    Constants(ConstantsArgs),
    /// Run the acceptance property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Ambient dimension for kinds that take one.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    jitter: f64,
    /// Full shape as JSON, e.g. '{"kind":"torus","major":3,"minor":1}'.
    #[arg(long, conflicts_with_all = ["kind", "radius", "n"])]
    shape: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum EnergyMethod {
    Brute,
    Mc,
}

#[derive(Args, Serialize)]
struct EnergyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value_t = EnergyMethod::Mc)]
    method: EnergyMethod,
    /// Overrides mc.samples.
    #[arg(long)]
    samples: Option<u64>,
    /// Restrict brute enumeration to tuples inside B(x_i, radius).
    #[arg(long, requires = "radius")]
    point_index: Option<usize>,
    #[arg(long, requires = "point_index")]
    radius: Option<f64>,
}

#[derive(Args, Serialize)]
struct BallArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    point_index: usize,
    #[arg(long)]
    radius: f64,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long)]
    input: PathBuf,
    /// `lo:hi:steps` (geometric) or a comma list.
    #[arg(long)]
    radii: String,
    /// Number of sampled centers.
    #[arg(long, default_value_t = 20)]
    centers: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Fit {
    Bap,
    Minimax,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Stop {
    Smallest,
    Settled,
}

#[derive(Args, Serialize)]
struct TangentArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    point_index: usize,
    /// Largest radius of the schedule.
    #[arg(long)]
    radius: f64,
    #[arg(long, default_value_t = 12)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Fit::Minimax)]
    fit: Fit,
}

#[derive(Args, Serialize)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    point_index: usize,
    /// Patch radius R.
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    resolution: f64,
    #[arg(long, value_enum, default_value_t = Stop::Settled)]
    stop: Stop,
    #[arg(long, default_value_t = 1.0)]
    lip_slack: f64,
}

#[derive(Args, Serialize)]
struct HolderArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    /// Pairs with a smaller derivative difference are dropped.
    #[arg(long, default_value_t = 1e-12)]
    noise_floor: f64,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    point_index: usize,
    /// Overrides search.delta.
    #[arg(long)]
    delta: Option<f64>,
    /// Initial radius of the tangent schedule.
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(Args, Serialize)]
struct ConstantsArgs {
    /// Energy bound E.
    #[arg(long = "E")]
    e: f64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: f64,
    /// Overrides search.delta.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// `all` or a comma list of criterion numbers.
    #[arg(long, default_value = "all")]
    suite: String,
}

/// A finished command: its report plus an optional table.
struct Outcome {
    params: Value,
    results: Value,
    diagnostics: Value,
    table: Option<Table>,
    suite_failed: bool,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn num(x: f64) -> String {
    format_number(x)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_radii(s: &str) -> Result<Vec<f64>> {
    let bad = || invalid(format!("--radii expects lo:hi:steps or a comma list, got {s:?}"));
    let radii: Vec<f64> = if let [lo, hi, steps] = s.split(':').collect::<Vec<_>>()[..] {
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let steps: usize = steps.trim().parse().map_err(|_| bad())?;
        if steps == 0 || !(lo > 0.0 && hi >= lo) {
            return Err(invalid(format!("--radii needs 0 < lo <= hi and steps >= 1, got {s:?}")));
        }
        if steps == 1 {
            vec![lo]
        } else {
            let q = (hi / lo).ln() / (steps - 1) as f64;
            (0..steps).map(|i| lo * (q * i as f64).exp()).collect()
        }
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    match radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        Some(r) => Err(invalid(format!("radius {r} must be positive"))),
        None if radii.is_empty() => Err(bad()),
        None => Ok(radii),
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be positive, got {v}")))
    }
}

fn load(path: &Path) -> Result<PointCloud> {
    let cloud = load_cloud(path).map_err(|e| match e {
        Error::Io(msg) => Error::Io(format!("{}: {msg}", path.display())),
        e => e,
    })?;
    if cloud.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(cloud)
}

fn point_index(cloud: &PointCloud, i: usize) -> Result<usize> {
    if i < cloud.len() {
        Ok(i)
    } else {
        Err(invalid(format!("--point-index {i} out of range: the cloud has {} points", cloud.len())))
    }
}

fn cloud_info(path: &Path, cloud: &PointCloud) -> Value {
    json!({
        "input": path.display().to_string(),
        "points": cloud.len(),
        "ambient_dim": cloud.ambient_dim(),
        "intrinsic_dim": cloud.intrinsic_dim(),
    })
}

fn params<T: Serialize>(args: &T, cfg: &RunConfig) -> Result<Value> {
    Ok(json!({ "args": to_value(args)?, "config": cfg.to_json() }))
}

fn outcome(params: Value, results: Value, diagnostics: Value) -> Outcome {
    Outcome { params, results, diagnostics, table: None, suite_failed: false }
}

fn graph_opts(a: &GraphArgs, cfg: &RunConfig) -> GraphOptions {
    let d = GraphOptions::default();
    GraphOptions {
        lip_slack: a.lip_slack,
        stop: match a.stop {
            Stop::Smallest => TangentStop::Smallest,
            Stop::Settled => TangentStop::Settled,
        },
        flat: menger_core::flatness::FlatnessOptions { seed: cfg.seed, ..d.flat },
        ..d
    }
}

fn graph_table(patch: &GraphPatch) -> Table {
    let m = patch.tangent.dim();
    let n = patch.base.len();
    let mut header: Vec<String> = (0..m).map(|i| format!("w{i}")).collect();
    header.push("point".into());
    header.extend((0..n).map(|i| format!("f{i}")));
    header.push("l_norm".into());
    header.push("has_df".into());
    let rows = patch
        .nodes
        .iter()
        .map(|nd| {
            let mut r: Vec<String> = nd.w.iter().map(|&x| num(x)).collect();
            r.push(nd.point.to_string());
            r.extend(nd.value.iter().map(|&x| num(x)));
            r.push(num(nd.l_norm));
            r.push(nd.df.is_some().to_string());
            r
        })
        .collect();
    Table { header, rows }
}

fn run_graph(a: &GraphArgs, cfg: &RunConfig) -> Result<(PointCloud, GraphPatch)> {
    positive("radius", a.radius)?;
    positive("resolution", a.resolution)?;
    positive("lip-slack", a.lip_slack)?;
    let cloud = load(&a.input)?;
    let i = point_index(&cloud, a.point_index)?;
    let patch = graph_extract(&cloud, i, a.radius, a.resolution, &graph_opts(a, cfg))?;
    Ok((cloud, patch))
}

fn patch_summary(patch: &GraphPatch) -> Value {
    json!({
        "base_index": patch.base_index,
        "tangent": to_value(&patch.tangent).unwrap_or(Value::Null),
        "nodes": patch.nodes.len(),
        "nodes_with_df": patch.nodes.iter().filter(|n| n.df.is_some()).count(),
        "empty_nodes": patch.empty_nodes,
        "empty_fraction": patch.empty_fraction,
    })
}

fn run(cmd: &Command, cfg: &RunConfig, output: Option<&Path>) -> Result<Outcome> {
    let fo = cfg.flatness();
    Ok(match cmd {
        Command::Generate(a) => {
            let out = output.ok_or_else(|| invalid("generate needs --output for the cloud CSV"))?;
            let shape = match (&a.shape, &a.kind) {
                (Some(js), _) => serde_json::from_str::<Shape>(js)
                    .map_err(|e| Error::InvalidSpec(format!("--shape is not a valid shape: {e}")))?,
                (None, Some(kind)) => {
                    let mut s = Shape::default_for(kind, a.m)?;
                    match &mut s {
                        Shape::Sphere { n, radius, .. }
                        | Shape::PlaneDisk { n, radius, .. }
                        | Shape::UnionSpheres { n, radius, .. } => {
                            *n = a.n.unwrap_or(*n);
                            *radius = a.radius.unwrap_or(*radius);
                        }
                        Shape::HalfSegment { n, .. } => *n = a.n.unwrap_or(*n),
                        _ if a.radius.is_some() || a.n.is_some() => {
                            return Err(Error::InvalidSpec(format!(
                                "kind {kind} takes no --radius or --n; use --shape for its parameters"
                            )))
                        }
                        _ => {}
                    }
                    s
                }
                (None, None) => return Err(invalid("generate needs --kind or --shape")),
            };
            let spec = GeneratorSpec { shape, count: a.count, seed: cfg.seed, jitter: a.jitter };
            let cloud = generate(&spec)?;
            cloud.save_csv(out)?;
            outcome(
                params(a, cfg)?,
                json!({ "spec": to_value(&spec)?, "cloud": out.display().to_string(), "total_mass": cloud.weights().iter().sum::<f64>() }),
                json!({ "points": cloud.len(), "ambient_dim": cloud.ambient_dim(), "intrinsic_dim": cloud.intrinsic_dim() }),
            )
        }
        Command::Energy(a) => {
            let cloud = load(&a.input)?;
            let est = match a.method {
                EnergyMethod::Brute => {
                    let ball = match (a.point_index, a.radius) {
                        (Some(i), Some(r)) => {
                            positive("radius", r)?;
                            Some((cloud.point(point_index(&cloud, i)?), r))
                        }
                        _ => None,
                    };
                    energy_brute(&cloud, a.p, ball, cfg.brute_max_tuples)?
                }
                EnergyMethod::Mc => {
                    if a.point_index.is_some() {
                        return Err(invalid("ball restriction is only available with --method brute"));
                    }
                    let samples = a.samples.unwrap_or(cfg.mc_samples);
                    if samples == 0 {
                        return Err(invalid("--samples must be positive"));
                    }
                    energy_mc(&cloud, a.p, samples, cfg.seed, cfg.mc_batch)?
                }
            };
            outcome(params(a, cfg)?, to_value(&est)?, cloud_info(&a.input, &cloud))
        }
        Command::Beta(a) => {
            positive("radius", a.radius)?;
            let cloud = load(&a.input)?;
            let i = point_index(&cloud, a.point_index)?;
            let (beta_bar, plane, diag) = beta_number(&cloud, cloud.point(i), a.radius, &fo)?;
            let mut d = cloud_info(&a.input, &cloud);
            d["solver"] = to_value(&diag)?;
            outcome(params(a, cfg)?, json!({ "beta_bar": beta_bar, "plane": to_value(&plane)? }), d)
        }
        Command::Theta(a) => {
            positive("radius", a.radius)?;
            let cloud = load(&a.input)?;
            let i = point_index(&cloud, a.point_index)?;
            let f = flatness(&cloud, cloud.point(i), a.radius, &fo)?;
            outcome(params(a, cfg)?, to_value(&f)?, cloud_info(&a.input, &cloud))
        }
        Command::GapScan(a) => {
            let radii = parse_radii(&a.radii)?;
            let cloud = load(&a.input)?;
            let centers = sample_centers(&cloud, a.centers, cfg.seed);
            let scan = gap_ratio_scan(&cloud, &radii, &centers, &fo, cfg.tol_geom)?;
            let header = ["center", "radius", "beta_bar", "theta_bar", "ratio", "status"].map(String::from).to_vec();
            let rows = scan
                .rows
                .iter()
                .map(|r| {
                    let status = to_value(&r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                    vec![r.center.to_string(), num(r.radius), num(r.beta_bar), num(r.theta_bar), num(r.ratio), status]
                })
                .collect();
            let mut o = outcome(params(a, cfg)?, to_value(&scan)?, cloud_info(&a.input, &cloud));
            o.table = Some(Table { header, rows });
            o
        }
        Command::Ahlfors(a) => {
            let radii = parse_radii(&a.radii)?;
            let cloud = load(&a.input)?;
            let scan = ahlfors_scan(&cloud, &radii, a.centers, cfg.seed)?;
            let header = ["radius", "min_ratio", "worst_point"].map(String::from).to_vec();
            let rows = (0..scan.radii.len())
                .map(|k| vec![num(scan.radii[k]), num(scan.min_ratio[k]), scan.worst_point[k].to_string()])
                .collect();
            let mut o = outcome(params(a, cfg)?, to_value(&scan)?, cloud_info(&a.input, &cloud));
            o.table = Some(Table { header, rows });
            o
        }
        Command::Tangent(a) => {
            positive("radius", a.radius)?;
            if a.steps == 0 {
                return Err(invalid("--steps must be positive"));
            }
            let cloud = load(&a.input)?;
            let i = point_index(&cloud, a.point_index)?;
            let fit = match a.fit {
                Fit::Bap => PlaneFit::Bap,
                Fit::Minimax => PlaneFit::Minimax,
            };
            let est = tangent_plane(&cloud, cloud.point(i), &default_schedule(a.radius, a.steps), fit, &fo)?;
            let header = ["radius", "points", "beta_bar", "dist_to_prev"].map(String::from).to_vec();
            let rows = est
                .table
                .iter()
                .map(|r| {
                    vec![num(r.radius), r.points.to_string(), num(r.beta_bar), r.dist_to_prev.map(num).unwrap_or_default()]
                })
                .collect();
            let mut o = outcome(params(a, cfg)?, to_value(&est)?, cloud_info(&a.input, &cloud));
            o.table = Some(Table { header, rows });
            o
        }
        Command::Graph(a) => {
            let (cloud, patch) = run_graph(a, cfg)?;
            let mut o = outcome(params(a, cfg)?, patch_summary(&patch), cloud_info(&a.input, &cloud));
            o.table = Some(graph_table(&patch));
            o
        }
        Command::Holder(a) => {
            if !(a.noise_floor >= 0.0) {
                return Err(invalid("--noise-floor must be non-negative"));
            }
            let (cloud, patch) = run_graph(&a.graph, cfg)?;
            let fit = holder_exponent(&patch, a.noise_floor)?;
            let mut d = cloud_info(&a.graph.input, &cloud);
            d["patch"] = patch_summary(&patch);
            let mut o = outcome(params(a, cfg)?, to_value(&fit)?, d);
            o.table = Some(graph_table(&patch));
            o
        }
        Command::SearchSimplex(a) => {
            let cloud = load(&a.input)?;
            let i = point_index(&cloud, a.point_index)?;
            let mut so = cfg.search();
            if let Some(d) = a.delta {
                so.delta = d;
            }
            if let Some(r) = a.radius {
                positive("radius", r)?;
                so.tangent_r0 = Some(r);
            }
            let found = voluminous_search(&cloud, i, &so)?;
            outcome(params(a, cfg)?, to_value(&found)?, cloud_info(&a.input, &cloud))
        }
        Command::Constants(a) => {
            let ledger = constants_ledger(a.e, a.m, a.p, a.delta.unwrap_or(cfg.search_delta))?;
            outcome(params(a, cfg)?, to_value(&ledger)?, json!({}))
        }
        Command::Verify(a) => {
            let ids = parse_suite(&a.suite)?;
            let suite = run_suite(&ids, cfg.seed);
            for c in &suite.criteria {
                eprintln!("{}", c.line());
            }
            let header = ["id", "title", "passed", "checks", "failed_checks"].map(String::from).to_vec();
            let rows = suite
                .criteria
                .iter()
                .map(|c| {
                    let failed = c.checks.iter().filter(|k| !k.passed).count();
                    vec![c.id.to_string(), c.title.to_string(), c.passed.to_string(), c.checks.len().to_string(), failed.to_string()]
                })
                .collect();
            let failed: Vec<u32> = suite.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
            Outcome {
                params: params(a, cfg)?,
                results: to_value(&suite)?,
                diagnostics: json!({ "criteria": ids.len(), "failed": failed }),
                table: Some(Table { header, rows }),
                suite_failed: !suite.passed,
            }
        }
    })
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Generate(_) => "generate",
        Command::Energy(_) => "energy",
        Command::Beta(_) => "beta",
        Command::Theta(_) => "theta",
        Command::GapScan(_) => "gap-scan",
        Command::Ahlfors(_) => "ahlfors",
        Command::Tangent(_) => "tangent",
        Command::Graph(_) => "graph",
        Command::Holder(_) => "holder",
        Command::SearchSimplex(_) => "search-simplex",
        Command::Constants(_) => "constants",
        Command::Verify(_) => "verify",
    }
}

/// Errors caused by the inputs exit with 1, failures inside a computation with 2.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateBasis { .. }
        | Error::AngleTooLarge(_)
        | Error::NotInDomain(_)
        | Error::IntersectionNotWitnessed
        | Error::NotInCone { .. }
        | Error::ConstantUndefined(_) => 2,
        _ => 1,
    }
}

fn resolve(g: &Global) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for kv in &g.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| invalid(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(t) = &g.table {
        cfg.output_table = Some(t.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_table(path: &Path, t: &Table) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("cannot write table {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(&t.header).map_err(io)?;
    for r in &t.rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn main_inner(cli: Cli) -> Result<bool> {
    let mut cfg = resolve(&cli.global)?;
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(invalid("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| invalid(format!("cannot size the thread pool: {e}")))?;
    }
    let is_generate = matches!(cli.command, Command::Generate(_));
    let (cloud_out, report_out) = if is_generate {
        (cli.global.output.clone(), cfg.output_report.clone())
    } else {
        (None, cli.global.output.clone().or_else(|| cfg.output_report.clone()))
    };
    cfg.output_report = report_out.clone();
    let o = run(&cli.command, &cfg, cloud_out.as_deref())?;
    if let (Some(path), Some(t)) = (&cfg.output_table, &o.table) {
        write_table(path, t)?;
    }
    let json = Report::new(name(&cli.command), o.params, o.results, o.diagnostics).to_json();
    match report_out {
        Some(p) => std::fs::write(&p, json).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?,
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{json}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(!o.suite_failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_forms() {
        let r = parse_radii("0.1:0.4:3").unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[1] - 0.2).abs() < 1e-12 && (r[2] - 0.4).abs() < 1e-12);
        assert_eq!(parse_radii("0.05, 0.1").unwrap(), vec![0.05, 0.1]);
        assert_eq!(parse_radii("0.3:0.3:1").unwrap(), vec![0.3]);
        for bad in ["0:1:3", "0.5:0.1:3", "0.1:1:0", "x", "0.1,-1", ""] {
            assert!(parse_radii(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
