//! The `critex` command-line front end.
//!
//! [`run`] takes the argument vector and returns the exit code and the text
//! written to stdout/stderr, so the whole CLI is testable in-process. Every
//! report starts with the command echo and a SHA-256 digest of its inputs;
//! text reports write these as `#` comment lines, so commands that emit a
//! graph (`merge`, `construct`, `dumbbell`) produce a valid graph file.
//!
//! Exit codes: 0 on success (including "no grouping" and "no root" answers),
//! 1 on domain errors, 2 on malformed input.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::graph::{merge, parse_graph, EdgeIndexedGraph, VertexId};
use crate::grouping::{find_vertex_ordering_from, GroupingOutcome};
use crate::growth::{
    construct, estimate_delta, sphere_counts, spectral_delta, target_partition, weighted_cycle_counts, PartitionSpec,
};
use crate::poly::IsolatedRoot;
use crate::series::{ray_series, solve_unit_product, UnitProductOutcome};
use crate::zeta::{dumbbell, enumerate_primes, ihara_zeta, pgt_check};
use crate::Guard;

#[derive(Debug, Parser)]
#[command(name = "critex", version, about = "Critical exponents, Ihara zeta functions and merging series of edge-indexed graphs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a graph file and report sizes, connectivity and cover degrees.
    Validate { file: String },
    /// Find the integral vertex ordering, or a cycle showing none exists.
    Grouping {
        file: String,
        /// Root of the spanning tree.
        #[arg(long)]
        root: Option<String>,
    },
    /// Wedge two graphs at the named vertices.
    Merge { left: String, x: String, right: String, y: String },
    /// Ihara zeta function by both determinant formulas.
    Zeta {
        file: String,
        /// Length of the prime and cycle-count tables.
        #[arg(long, default_value_t = 10)]
        degree: usize,
    },
    /// Weighted non-backtracking cycle counts, and based counts when a base is known.
    Counts {
        file: String,
        #[arg(long, default_value_t = 10)]
        maxlen: usize,
        #[arg(long)]
        base: Option<String>,
    },
    /// Enumerate prime cycles up to a length.
    Primes {
        file: String,
        #[arg(long)]
        maxlen: usize,
    },
    /// Prime geodesic theorem table.
    Pgt {
        file: String,
        #[arg(long)]
        nmax: usize,
    },
    /// Critical exponent from orbit growth (`--depth`) or the spectral radius (default).
    Delta {
        file: String,
        #[arg(long, conflicts_with = "spectral")]
        depth: Option<usize>,
        #[arg(long)]
        spectral: bool,
        #[arg(long)]
        base: Option<String>,
    },
    /// Build a ray quotient with a prescribed critical exponent.
    Construct(ConstructArgs),
    /// Two cycles joined by a path.
    Dumbbell { a: usize, b: usize, n: usize },
    /// Candidate exponent from `F_X(u) F_Y(u) = 1` for two ray series.
    SolveMerge {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        px: String,
        #[arg(long)]
        py: String,
        #[arg(long, default_value_t = 200)]
        degree: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    /// Target exponent in `[0, ½ log q]`.
    #[arg(long, required_unless_present = "partition", allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Explicit partition, e.g. `100(11)` or `beatty:3/5`; overrides `--delta`.
    #[arg(long)]
    partition: Option<String>,
    #[arg(long, default_value_t = 6)]
    depth: usize,
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Malformed(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::DuplicateVertex(_)
            | Error::UnknownVertex(_)
            | Error::InvalidIndex(_)
            | Error::InvalidPartition(_)
            | Error::InvalidArgument(_) => Failure::Malformed(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Body of a report: text lines and the JSON payload.
struct Report {
    lines: Vec<String>,
    json: Value,
    /// Emitted before the `#` report lines in text mode.
    graph: Option<String>,
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: Sha256::new() }
    }

    fn read(&mut self, path: &str) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Malformed(format!("{path}: {e}")))?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        String::from_utf8(bytes).map_err(|_| Failure::Malformed(format!("{path}: not UTF-8")))
    }

    fn graph(&mut self, path: &str) -> Result<EdgeIndexedGraph, Failure> {
        let text = self.read(path)?;
        parse_graph(&text).map_err(|e| match e {
            Error::Parse { line, message } => Failure::Malformed(format!("{path}:{line}: {message}")),
            other => Failure::from(other),
        })
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let echo = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let mut inputs = Inputs::new();
    let report = dispatch(&cli.command, &mut inputs, Guard::from_env());
    let digest = inputs.digest();
    match report {
        Ok(r) => Outcome { code: 0, stdout: render(&echo, &digest, r, cli.json), stderr: String::new() },
        Err(Failure::Malformed(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Domain(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn render(echo: &str, digest: &str, report: Report, json: bool) -> String {
    if json {
        let mut doc = json!({ "command": format!("critex {echo}"), "input_sha256": digest, "result": report.json });
        if let Some(g) = report.graph {
            doc["graph"] = Value::String(g);
        }
        return serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    }
    let mut out = String::new();
    writeln!(out, "# critex {echo}").unwrap();
    writeln!(out, "# input sha256 {digest}").unwrap();
    if let Some(g) = &report.graph {
        out.push_str(g);
        out.push('\n');
        for line in &report.lines {
            writeln!(out, "# {line}").unwrap();
        }
    } else {
        for line in &report.lines {
            writeln!(out, "{line}").unwrap();
        }
    }
    out
}

fn dispatch(command: &Command, inputs: &mut Inputs, guard: Guard) -> Result<Report, Failure> {
    match command {
        Command::Validate { file } => validate(&inputs.graph(file)?),
        Command::Grouping { file, root } => grouping(&inputs.graph(file)?, root.as_deref()),
        Command::Merge { left, x, right, y } => {
            let g1 = inputs.graph(left)?;
            let g2 = inputs.graph(right)?;
            let merged = merge(&g1, x, &g2, y)?;
            let lines = vec![format!("vertices {} edges {}", merged.vertex_count(), merged.edge_count())];
            let json = json!({ "vertices": merged.vertex_count(), "edges": merged.edge_count() });
            Ok(Report { lines, json, graph: Some(merged.to_text()) })
        }
        Command::Zeta { file, degree } => zeta(&inputs.graph(file)?, *degree),
        Command::Counts { file, maxlen, base } => counts(&inputs.graph(file)?, *maxlen, base.as_deref()),
        Command::Primes { file, maxlen } => primes(&inputs.graph(file)?, *maxlen, guard),
        Command::Pgt { file, nmax } => pgt(&inputs.graph(file)?, *nmax),
        Command::Delta { file, depth, base, .. } => delta(&inputs.graph(file)?, *depth, base.as_deref()),
        Command::Construct(args) => construct_cmd(args, guard),
        Command::Dumbbell { a, b, n } => dumbbell_cmd(*a, *b, *n),
        Command::SolveMerge { q, px, py, degree, tol } => solve_merge(*q, px, py, *degree, *tol),
    }
}

fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

fn poly_json(p: &crate::poly::IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

fn root_json(r: &IsolatedRoot) -> Value {
    json!({
        "lo": r.lo.to_string(),
        "hi": r.hi.to_string(),
        "exact": r.exact().map(ToString::to_string),
        "approx": r.approx(),
        "certificate": poly_json(&r.certificate),
    })
}

fn root_line(r: &IsolatedRoot) -> String {
    match r.exact() {
        Some(x) => format!("{x} (exact; root of {})", r.certificate),
        None => format!("{:.15} in [{}, {}] (root of {})", r.approx(), r.lo, r.hi, r.certificate),
    }
}

fn regular_q(graph: &EdgeIndexedGraph) -> Option<u64> {
    let mut degrees = graph.vertices().filter(|&v| !graph.is_truncated(v)).map(|v| graph.cover_degree(v));
    let d = degrees.next()?;
    (d >= 2 && degrees.all(|x| x == d)).then(|| d - 1)
}

fn resolve_base(graph: &EdgeIndexedGraph, base: Option<&str>) -> Result<Option<VertexId>, Failure> {
    match base {
        Some(name) => Ok(Some(graph.require_vertex(name)?)),
        None => Ok(graph.base()),
    }
}

fn validate(graph: &EdgeIndexedGraph) -> Result<Report, Failure> {
    let q = regular_q(graph);
    let mut lines = vec![
        format!("vertices {}", graph.vertex_count()),
        format!("edges {}", graph.edge_count()),
        format!("oriented_edges {}", graph.oriented_edge_count()),
        format!("connected {}", graph.is_connected()),
        format!("unweighted {}", graph.is_unweighted()),
        match q {
            Some(q) => format!("regular_cover q={q}"),
            None => "regular_cover none".into(),
        },
    ];
    let mut degrees = serde_json::Map::new();
    for v in graph.vertices() {
        let flag = if graph.is_truncated(v) { " truncated" } else { "" };
        lines.push(format!("cover_degree {} {}{flag}", graph.name(v), graph.cover_degree(v)));
        degrees.insert(graph.name(v).to_string(), json!(graph.cover_degree(v)));
    }
    let truncated: Vec<&str> = graph.vertices().filter(|&v| graph.is_truncated(v)).map(|v| graph.name(v)).collect();
    let json = json!({
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "oriented_edges": graph.oriented_edge_count(),
        "connected": graph.is_connected(),
        "unweighted": graph.is_unweighted(),
        "regular_cover_q": q,
        "cover_degrees": degrees,
        "truncated": truncated,
    });
    Ok(Report { lines, json, graph: None })
}

fn grouping(graph: &EdgeIndexedGraph, root: Option<&str>) -> Result<Report, Failure> {
    let root = match root {
        Some(name) => graph.require_vertex(name)?,
        None => VertexId(0),
    };
    match find_vertex_ordering_from(graph, root)? {
        GroupingOutcome::Ordering(n) => {
            let mut lines = vec!["status ordering".to_string()];
            let mut values = serde_json::Map::new();
            for v in graph.vertices() {
                lines.push(format!("N {} {}", graph.name(v), n.get(v)));
                values.insert(graph.name(v).to_string(), big(n.get(v)));
            }
            lines.push("flag finite grouping exists => discrete realization exists".into());
            let json = json!({ "status": "ordering", "N": values, "discrete_realization": true });
            Ok(Report { lines, json, graph: None })
        }
        GroupingOutcome::NoGrouping(ng) => {
            let walk = graph.describe_edges(&ng.witness);
            let lines = vec!["status nogrouping".into(), format!("NOGROUPING {walk}"), format!("ratio {}", ng.ratio)];
            let json = json!({
                "status": "nogrouping",
                "witness": ng.witness.iter().map(|e| e.0).collect::<Vec<_>>(),
                "witness_walk": walk,
                "ratio": ng.ratio.to_string(),
            });
            Ok(Report { lines, json, graph: None })
        }
    }
}

fn table(name: &str, values: &[BigUint]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("{name} {}", parts.join(" "))
}

fn zeta(graph: &EdgeIndexedGraph, degree: usize) -> Result<Report, Failure> {
    let r = ihara_zeta(graph, degree)?;
    let lines = vec![
        format!("vertices {}", r.vertex_count),
        format!("edges {}", r.edge_count),
        format!("chi {}", r.chi),
        format!("det_poly {}", r.det_poly),
        format!("w_poly {}", r.w_poly),
        format!("bass_identity {}", r.bass_identity),
        format!("R {}", root_line(&r.radius)),
        format!("lambda_max {:.15}", r.lambda_max),
        format!("log_lambda_max {:.15}", r.lambda_max.ln()),
        format!("Delta {}", r.period),
        table("N", &r.cycle_counts),
        table("pi", &r.prime_counts),
    ];
    let json = json!({
        "vertices": r.vertex_count,
        "edges": r.edge_count,
        "chi": r.chi,
        "det_poly": poly_json(&r.det_poly),
        "w_poly": poly_json(&r.w_poly),
        "bass_identity": r.bass_identity,
        "R": root_json(&r.radius),
        "lambda_max": r.lambda_max,
        "log_lambda_max": r.lambda_max.ln(),
        "Delta": r.period,
        "N": r.cycle_counts.iter().map(big).collect::<Vec<_>>(),
        "pi": r.prime_counts.iter().map(big).collect::<Vec<_>>(),
    });
    Ok(Report { lines, json, graph: None })
}

fn counts(graph: &EdgeIndexedGraph, maxlen: usize, base: Option<&str>) -> Result<Report, Failure> {
    let traces = weighted_cycle_counts(graph, maxlen);
    let mut lines = vec![table("N", &traces)];
    let mut json = json!({ "N": traces.iter().map(big).collect::<Vec<_>>() });
    if let Some(v) = resolve_base(graph, base)? {
        let spheres = sphere_counts(graph, v, maxlen)?;
        let based: Vec<BigUint> = (1..=maxlen).map(|m| spheres.get(m, v)).collect();
        let sizes: Vec<BigUint> = (1..=maxlen).map(|m| spheres.sphere_size(m)).collect();
        lines.push(format!("base {}", graph.name(v)));
        lines.push(table("S_base", &based));
        lines.push(table("sphere", &sizes));
        json["base"] = json!(graph.name(v));
        json["S_base"] = based.iter().map(big).collect();
        json["sphere"] = sizes.iter().map(big).collect();
    }
    Ok(Report { lines, json, graph: None })
}

fn primes(graph: &EdgeIndexedGraph, maxlen: usize, guard: Guard) -> Result<Report, Failure> {
    let t = enumerate_primes(graph, maxlen, guard)?;
    let mut lines = vec![
        format!("Delta {}", t.period),
        format!("pi {}", t.counts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
    ];
    for p in &t.primes {
        lines.push(format!("prime {} {}", p.len(), graph.describe_edges(p)));
    }
    let json = json!({
        "Delta": t.period,
        "pi": t.counts,
        "primes": t.primes.iter().map(|p| p.iter().map(|e| e.0).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Report { lines, json, graph: None })
}

fn pgt(graph: &EdgeIndexedGraph, nmax: usize) -> Result<Report, Failure> {
    let t = pgt_check(graph, nmax)?;
    let mut lines = vec![format!("Delta {}", t.period), format!("R {:.15}", t.radius)];
    for (n, v) in &t.rows {
        lines.push(format!("row {n} {v:.12}"));
    }
    lines.push(format!("limit {}", t.limit));
    lines.push(format!("tail_deviation {:.12}", t.tail_deviation));
    let json = json!({
        "Delta": t.period,
        "R": t.radius,
        "rows": t.rows.iter().map(|(n, v)| json!([n, v])).collect::<Vec<_>>(),
        "limit": t.limit,
        "tail_deviation": t.tail_deviation,
    });
    Ok(Report { lines, json, graph: None })
}

fn delta(graph: &EdgeIndexedGraph, depth: Option<usize>, base: Option<&str>) -> Result<Report, Failure> {
    match depth {
        Some(depth) => {
            let v = resolve_base(graph, base)?.unwrap_or(VertexId(0));
            let spheres = sphere_counts(graph, v, depth)?;
            let cumulative = spheres.cumulative_orbit();
            let est = estimate_delta(&cumulative);
            let mut lines = vec![
                "method orbit".to_string(),
                format!("base {}", graph.name(v)),
                format!("depth {depth}"),
                format!("delta {:.15}", est.value),
                format!("all_zero {}", est.all_zero),
                format!("orbit_within_depth {}", cumulative[depth]),
            ];
            for (n, r) in &est.tail {
                lines.push(format!("tail {n} {r:.12}"));
            }
            let json = json!({
                "method": "orbit",
                "base": graph.name(v),
                "depth": depth,
                "delta": est.value,
                "all_zero": est.all_zero,
                "cumulative": cumulative.iter().map(big).collect::<Vec<_>>(),
                "tail": est.tail.iter().map(|(n, r)| json!([n, r])).collect::<Vec<_>>(),
            });
            Ok(Report { lines, json, graph: None })
        }
        None => {
            let s = spectral_delta(graph)?;
            let lines = vec![
                "method spectral".to_string(),
                format!("delta {:.15}", s.value),
                format!("lambda_max {:.15}", s.lambda_max),
                format!("lambda_exact {}", s.exact_lambda().map(|l| l.to_string()).unwrap_or_else(|| "none".into())),
                format!("radius {}", root_line(&s.radius)),
                format!("certificate {}", s.certificate),
            ];
            let json = json!({
                "method": "spectral",
                "delta": s.value,
                "lambda_max": s.lambda_max,
                "lambda_exact": s.exact_lambda().map(|l| l.to_string()),
                "radius": root_json(&s.radius),
                "certificate": poly_json(&s.certificate),
            });
            Ok(Report { lines, json, graph: None })
        }
    }
}

fn construct_cmd(args: &ConstructArgs, guard: Guard) -> Result<Report, Failure> {
    let partition: PartitionSpec = match (&args.partition, args.delta) {
        (Some(p), _) => p.parse()?,
        (None, Some(d)) => target_partition(d, args.q)?,
        (None, None) => return Err(Failure::Malformed("one of --delta or --partition is required".into())),
    };
    let c = construct(args.q, &partition, args.depth, guard)?;
    let rq = &c.quotient;
    let g = &rq.graph;
    let x0 = rq.ray[0];
    // Exact sphere counts are available up to the truncation radius.
    let radius = g.exact_radius(x0).unwrap_or(rq.depth).min(rq.depth);
    let spheres = sphere_counts(g, x0, radius)?;
    let mut lines = vec![
        format!("q {}", rq.q),
        format!("partition {partition}"),
        format!("density {}", partition.density()),
        format!("delta {}", c.exponent),
        format!("depth {}", rq.depth),
        format!("regular_cover {}", g.is_regular_cover(rq.q)),
        format!("I {}", partition.indicator(rq.depth).iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()),
        format!("s {}", rq.partial_sums.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
        format!("N {}", rq.ray.iter().map(|&v| rq.ordering.get(v).to_string()).collect::<Vec<_>>().join(" ")),
    ];
    let mut rows = Vec::new();
    for (k, predicted) in c.predicted.iter().enumerate() {
        let n = k + 1;
        let observed = (2 * n <= radius).then(|| spheres.get(2 * n, x0));
        let shown = observed.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into());
        lines.push(format!("orbit 2n={} predicted {predicted} sphere {shown}", 2 * n));
        rows.push(json!({ "n": n, "predicted": big(predicted), "sphere": observed.as_ref().map(big) }));
    }
    let json = json!({
        "q": rq.q,
        "partition": partition.to_string(),
        "density": partition.density().to_string(),
        "delta": c.exponent.value(),
        "delta_log_q_multiple": c.exponent.log_q_multiple.to_string(),
        "depth": rq.depth,
        "regular_cover": g.is_regular_cover(rq.q),
        "s": rq.partial_sums,
        "N": rq.ray.iter().map(|&v| big(rq.ordering.get(v))).collect::<Vec<_>>(),
        "orbit": rows,
    });
    Ok(Report { lines, json, graph: Some(g.to_text()) })
}

fn dumbbell_cmd(a: usize, b: usize, n: usize) -> Result<Report, Failure> {
    let g = dumbbell(a, b, n)?;
    let s = spectral_delta(&g)?;
    let lines = vec![
        format!("vertices {} edges {}", g.vertex_count(), g.edge_count()),
        format!("lambda_max {:.15}", s.lambda_max),
        format!("delta {:.15}", s.value),
        format!("radius {}", root_line(&s.radius)),
        format!("certificate {}", s.certificate),
    ];
    let json = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "lambda_max": s.lambda_max,
        "delta": s.value,
        "radius": root_json(&s.radius),
        "certificate": poly_json(&s.certificate),
    });
    Ok(Report { lines, json, graph: Some(g.to_text()) })
}

fn solve_merge(q: u64, px: &str, py: &str, degree: usize, tol: f64) -> Result<Report, Failure> {
    if q < 2 {
        return Err(Failure::Malformed(format!("q must be at least 2, got {q}")));
    }
    let px: PartitionSpec = px.parse()?;
    let py: PartitionSpec = py.parse()?;
    let fx = ray_series(q, &px, degree);
    let fy = ray_series(q, &py, degree);
    let log_q = (q as f64).ln();
    let half_log_q = 0.5 * log_q;
    let mut lines = vec![format!("q {q}"), format!("px {px}"), format!("py {py}"), format!("degree {degree}")];
    let json = match solve_unit_product(&fx, &fy, tol)? {
        UnitProductOutcome::Root(r) => {
            lines.push("status root".into());
            lines.push(format!("u {:.15}", r.u));
            lines.push(format!("CANDIDATE delta {:.15}", r.candidate_exponent));
            lines.push(format!("half_log_q {half_log_q:.15}"));
            lines.push(format!("exceeds_log_q {}", r.candidate_exponent > log_q));
            lines.push(format!("last_term {:e}", r.last_term));
            lines.push("assumption every closed cycle passes through the merge vertex".into());
            json!({
                "status": "root",
                "u": r.u,
                "candidate_delta": r.candidate_exponent,
                "label": "CANDIDATE",
                "half_log_q": half_log_q,
                "exceeds_log_q": r.candidate_exponent > log_q,
                "last_term": r.last_term,
                "truncation_degree": r.truncation_degree,
            })
        }
        UnitProductOutcome::NoRoot => {
            lines.push("status noroot".into());
            json!({ "status": "noroot", "truncation_degree": degree })
        }
    };
    Ok(Report { lines, json, graph: None })
}
