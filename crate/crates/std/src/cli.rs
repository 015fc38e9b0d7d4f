//! The `kgraph` command line.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kgraph::exact::Real;
use kgraph::geometric::{product_sbfs, validate_sbfs_conditions, ConditionReport, SYSTEM_NAMES};
use kgraph::graph::{library, validate_kgraph};
use kgraph::inductive::{
    direct_sum_nonzero_check, gauge_check, shift_tail_intertwiner, verify_ck_inductive, GaugePoint, Inductive, Intertwiner,
};
use kgraph::l2::verify_ck_l2;
use kgraph::measures::{equivalence_verdict, pf_data};
use kgraph::report::CKReport;
use kgraph::KGraph;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::formats::{
    load_graph, load_graph_spec, load_measure, parse_degree, parse_infinite_path, parse_list, parse_path, DEFAULT_GRAPH,
};
use crate::system::{load_system, system_to_json};

#[derive(Parser, Debug)]
#[command(name = "kgraph", version, about = "Check k-graphs, their path-space measures and Cuntz-Krieger families")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Graph file, library graph name, or `-` for stdin.
    #[arg(long, short = 'g', default_value = DEFAULT_GRAPH)]
    pub graph: String,
}

#[derive(Args, Debug, Clone)]
pub struct Bounds {
    /// Degree bound and number of stages, `d,s`.
    #[arg(long, default_value = "2,3")]
    pub bounds: String,
}

impl Bounds {
    fn get(&self) -> Result<(u32, usize)> {
        let v: Vec<u32> = parse_list(&self.bounds, "--bounds")?;
        match v.as_slice() {
            [d, s] if *s > 0 => Ok((*d, *s as usize)),
            _ => bail!("--bounds expects `d,s` with s > 0"),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a graph file is a valid k-graph presentation.
    Validate {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Structural flags, vertex matrices and Perron-Frobenius data.
    Info {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Mass of a cylinder set.
    Measure {
        graph: String,
        #[arg(long, default_value = "pf")]
        spec: String,
        /// Edge ids of the path, or `@v` for a vertex.
        #[arg(long)]
        cylinder: String,
    },
    /// Kolmogorov consistency of a measure up to a depth.
    Consistency {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "pf")]
        spec: String,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Radon-Nikodym derivative of the prefixing map at a point.
    Rn {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "pf")]
        spec: String,
        /// Edge ids of the prefixing path.
        #[arg(long)]
        edge: String,
        #[arg(long, default_value = "default")]
        point: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Equivalence or singularity of two measures.
    Compare {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        /// Exit 1 unless the verdict is this one.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Cuntz-Krieger relations for the operators on L^2 of a measure.
    CkL2 {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "pf")]
        spec: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value = "2")]
        bound: String,
        /// Refuse to run unless exact arithmetic is available.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Cuntz-Krieger relations on the inductive-limit space of a path.
    CkInductive {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "default")]
        point: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Gauge covariance on the inductive-limit space.
    Gauge {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "default")]
        point: String,
        /// `re,im;re,im;...`, one pair per color. Default: 8 roots of unity.
        #[arg(long)]
        z: Option<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// The unitary between two inductive-limit spaces with shift-equal tails.
    Intertwine {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Segments compared when checking that the tails agree.
        #[arg(long, default_value_t = 16)]
        check_depth: usize,
    },
    /// Nonzero operators on the direct sum over one path per vertex.
    DirectSum {
        #[command(flatten)]
        graph: GraphArg,
        /// One path spec per vertex, in vertex order. Default: `default:v`.
        #[arg(long = "point")]
        points: Vec<String>,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Conditions (i)-(v) for a geometric semibranching system.
    SbfsCheck {
        /// System file, library system name, or `-`.
        system: String,
        /// Check the product with this second one-dimensional system instead.
        #[arg(long)]
        times: Option<String>,
    },
    /// Write a library graph (or with --system, a library system) as JSON.
    Library {
        name: String,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        perm: Option<String>,
        #[arg(long)]
        system: bool,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
}

/// What a command produced.
pub struct Report {
    /// `None` when the command computes something rather than checking it.
    pub pass: Option<bool>,
    pub text: String,
    pub json: Value,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run with `argv` (program name first).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Err(e) = threads() {
        return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e:#}\n") };
    }
    let json = cli.json;
    match execute(cli.command) {
        Ok(r) => {
            let code = if r.pass == Some(false) { 1 } else { 0 };
            let stdout = if json {
                let mut s = serde_json::to_string_pretty(&r.json).expect("reports serialize");
                s.push('\n');
                s
            } else {
                r.text
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

/// `KGRAPH_THREADS` caps parallelism; everything here runs on one thread,
/// so the value is only validated.
fn threads() -> Result<usize> {
    match std::env::var("KGRAPH_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("KGRAPH_THREADS must be a positive integer, got `{s}`"),
        },
        Err(_) => Ok(1),
    }
}

fn real_json(r: &Real) -> Value {
    match &r.exact {
        Some(q) => json!({"value": r.approx, "exact": q.to_string()}),
        None => json!({"value": r.approx}),
    }
}

fn ck_text(title: &str, r: &CKReport) -> String {
    let mut s = format!("{title}: {} (tol {:e}, {})\n", verdict(r.passed()), r.tol, if r.exact { "exact" } else { "float" });
    for rel in &r.relations {
        let _ = write!(s, "  {:<28} {} cases={} max_defect={:e}", rel.name, verdict(rel.pass), rel.cases, rel.max_defect);
        if rel.failures > 0 {
            let _ = write!(s, " failures={}", rel.failures);
        }
        if let Some(w) = &rel.worst {
            let _ = write!(s, " worst: {w}");
        }
        s.push('\n');
    }
    s
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn ck_report(command: &str, title: &str, r: CKReport) -> Report {
    let pass = r.passed();
    Report {
        pass: Some(pass),
        text: ck_text(title, &r),
        json: json!({"command": command, "pass": pass, "maxDefect": r.max_defect(), "report": r}),
    }
}

fn conditions_report(r: ConditionReport, dim: usize) -> Report {
    let pass = r.passed();
    let mut text = format!("sbfs conditions ({dim}D): {}\n", verdict(pass));
    for c in &r.checks {
        let _ = write!(
            text,
            "  {:<26} {} cases={} max_defect={:e}{}",
            c.name,
            verdict(c.passed),
            c.cases,
            c.max_defect,
            if c.sampled { " (sampled)" } else { "" }
        );
        if let Some(w) = &c.worst {
            let _ = write!(text, " worst: {w}");
        }
        text.push('\n');
    }
    Report { pass: Some(pass), text, json: json!({"command": "sbfs-check", "pass": pass, "dimension": dim, "report": r}) }
}

fn execute(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Validate { graph } => validate(&graph),
        Command::Info { graph } => info(&graph),
        Command::Measure { graph, spec, cylinder } => {
            let g = load_graph(&graph)?;
            let m = load_measure(&g, &spec)?;
            let p = parse_path(&g, &cylinder)?;
            let value = m.mass_f64(&p)?;
            let exact = if m.is_exact() { Some(m.mass_exact(&p)?.to_string()) } else { None };
            let shown = exact.clone().unwrap_or_else(|| value.to_string());
            Ok(Report {
                pass: None,
                text: format!("M(Z({})) = {shown}\n", g.display_path(&p)),
                json: json!({"command": "measure", "cylinder": g.path_names(&p), "value": value, "exact": exact}),
            })
        }
        Command::Consistency { graph, spec, depth } => {
            let g = load_graph(&graph.graph)?;
            let r = load_measure(&g, &spec)?.check_kolmogorov(depth)?;
            let mut text = format!(
                "kolmogorov consistency to depth {}: {} ({} cases, {}, max defect {:e}, total mass defect {:e})\n",
                r.depth,
                verdict(r.passed),
                r.cases,
                if r.exact { "exact" } else { "float" },
                r.max_defect,
                r.total_mass_defect
            );
            if let Some(w) = &r.worst {
                let _ = writeln!(text, "  worst: {w}");
            }
            Ok(Report {
                pass: Some(r.passed),
                text,
                json: json!({
                    "command": "consistency", "pass": r.passed, "depth": r.depth, "cases": r.cases, "exact": r.exact,
                    "maxDefect": r.max_defect, "totalMassDefect": r.total_mass_defect, "worst": r.worst,
                }),
            })
        }
        Command::Rn { graph, spec, edge, point, depth } => {
            let g = load_graph(&graph.graph)?;
            let m = load_measure(&g, &spec)?;
            let lambda = parse_path(&g, &edge)?;
            let x = parse_infinite_path(&g, &point)?;
            let r = m.rn_at_point(&lambda, &x, depth)?;
            let exact = r.exact.as_ref().map(ToString::to_string);
            let shown = exact.clone().unwrap_or_else(|| r.value.to_string());
            let mut text = format!("Φ_{}(x) = {shown} at depth {} (mult. error {})", g.display_path(&lambda), r.depth, r.mult_error);
            if let Some(s) = r.stabilized_at {
                let _ = write!(text, ", stable from depth {s}");
            }
            text.push('\n');
            Ok(Report {
                pass: None,
                text,
                json: json!({
                    "command": "rn", "lambda": g.path_names(&lambda), "point": x.to_spec(&g), "value": r.value,
                    "exact": exact, "multError": r.mult_error, "depth": r.depth, "stabilizedAt": r.stabilized_at,
                }),
            })
        }
        Command::Compare { graph, mu, nu, depth, expect } => {
            let g = load_graph(&graph.graph)?;
            let (m1, m2) = (load_measure(&g, &mu)?, load_measure(&g, &nu)?);
            let r = equivalence_verdict(&m1, &m2, depth)?;
            let ratios = r.profile.ratios();
            let last_ratio = ratios.last().copied();
            let found = r.verdict.as_str();
            let pass = match &expect {
                Some(e) if !["equivalent", "singular", "inconclusive"].contains(&e.as_str()) => {
                    bail!("--expect must be equivalent, singular or inconclusive")
                }
                Some(e) => Some(e == found),
                None => None,
            };
            let mut text = format!("{mu} vs {nu} to depth {depth}: {found}\n");
            let _ = writeln!(
                text,
                "  H_n = {:e}, last ratio {}, max tail ratio {}, last step {:e}",
                r.profile.h.last().copied().unwrap_or(1.0),
                last_ratio.map_or("-".into(), |x| x.to_string()),
                r.max_tail_ratio,
                r.last_step
            );
            Ok(Report {
                pass,
                text,
                json: json!({
                    "command": "compare", "pass": pass, "verdict": found, "depth": depth, "h": r.profile.h,
                    "ratios": ratios, "positive": r.profile.positive, "maxTailRatio": r.max_tail_ratio, "lastStep": r.last_step,
                }),
            })
        }
        Command::CkL2 { graph, spec, level, bound, exact, tol } => {
            let g = load_graph(&graph.graph)?;
            let m = load_measure(&g, &spec)?;
            if exact && !(m.is_exact() && m.rn_depth().is_some()) {
                bail!("--exact: measure `{spec}` has no exact Radon-Nikodym data");
            }
            let b = parse_degree(&bound, g.k(), "--bound")?;
            let r = verify_ck_l2(&m, level, &b, tol)?;
            Ok(ck_report("ck-l2", &format!("CK relations on L^2 ({spec}, level {level}, bound {b})"), r))
        }
        Command::CkInductive { graph, point, bounds } => {
            let g = load_graph(&graph.graph)?;
            let x = parse_infinite_path(&g, &point)?;
            let (d, s) = bounds.get()?;
            let model = Inductive::new(&g, x);
            let r = verify_ck_inductive(&model, d, s)?;
            Ok(ck_report("ck-inductive", &format!("CK relations on the inductive limit (bound {d}, {s} stages)"), r))
        }
        Command::Gauge { graph, point, z, bounds } => {
            let g = load_graph(&graph.graph)?;
            let x = parse_infinite_path(&g, &point)?;
            let (d, s) = bounds.get()?;
            let model = Inductive::new(&g, x);
            let points = match z {
                Some(z) => vec![gauge_point(&z, g.k())?],
                None => GaugePoint::samples(g.k()),
            };
            let mut text = String::new();
            let mut reports = Vec::new();
            let mut pass = true;
            for (i, p) in points.iter().enumerate() {
                let r = gauge_check(&model, p, d, s)?;
                pass &= r.passed();
                text.push_str(&ck_text(&format!("gauge point {}", describe_gauge(p, i)), &r));
                reports.push(r);
            }
            Ok(Report { pass: Some(pass), text, json: json!({"command": "gauge", "pass": pass, "reports": reports}) })
        }
        Command::Intertwine { graph, x, y, m, n, bounds, check_depth } => {
            let g = load_graph(&graph.graph)?;
            let (x, y) = (parse_infinite_path(&g, &x)?, parse_infinite_path(&g, &y)?);
            let (m, n) = (parse_degree(&m, g.k(), "--m")?, parse_degree(&n, g.k(), "--n")?);
            let (d, s) = bounds.get()?;
            let (mx, my) = (Inductive::new(&g, x), Inductive::new(&g, y));
            let phi = Intertwiner::new(&mx, &my, m.clone(), n.clone(), check_depth)?;
            let r = shift_tail_intertwiner(&phi, d, s)?;
            Ok(ck_report("intertwine", &format!("intertwiner σ^{m}(x) = σ^{n}(y) (bound {d}, {s} stages)"), r))
        }
        Command::DirectSum { graph, points, bound } => {
            let g = load_graph(&graph.graph)?;
            let choice = if points.is_empty() {
                g.vertex_ids().map(|v| Ok(kgraph::InfinitePath::default_from(&g, v)?)).collect::<Result<Vec<_>>>()?
            } else {
                points.iter().map(|p| parse_infinite_path(&g, p)).collect::<Result<Vec<_>>>()?
            };
            let r = direct_sum_nonzero_check(&g, &choice, bound)?;
            Ok(ck_report("direct-sum", &format!("direct sum over {} paths (bound {bound})", choice.len()), r))
        }
        Command::SbfsCheck { system, times } => {
            let s = load_system(&system)?;
            let s = match times {
                Some(t) => product_sbfs(&s, &load_system(&t)?)?,
                None => s,
            };
            Ok(conditions_report(validate_sbfs_conditions(&s)?, s.dimension()))
        }
        Command::Library { name, n, perm, system, output } => library_cmd(&name, n, perm.as_deref(), system, output.as_deref()),
    }
}

fn gauge_point(z: &str, k: usize) -> Result<GaugePoint> {
    let coords = z
        .split(';')
        .map(|pair| {
            let v: Vec<f64> = parse_list(pair, "--z")?;
            match v.as_slice() {
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => bail!("--z: each coordinate is `re,im`, got `{pair}`"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != k {
        bail!("--z: expected {k} coordinates, got {}", coords.len());
    }
    Ok(GaugePoint::new_float(coords)?)
}

fn describe_gauge(p: &GaugePoint, i: usize) -> String {
    match p {
        GaugePoint::Root { order, exps } => {
            let parts: Vec<String> = exps.iter().map(|e| format!("ω^{e}")).collect();
            format!("#{i} ({}), ω = e^(2πi/{order})", parts.join(", "))
        }
        GaugePoint::Float(z) => {
            let parts: Vec<String> = z.iter().map(|w| format!("{}{:+}i", w.re, w.im)).collect();
            format!("({})", parts.join(", "))
        }
    }
}

fn validate(src: &str) -> Result<Report> {
    let spec = load_graph_spec(src)?;
    let (pass, checks) = match validate_kgraph(&spec) {
        Ok(r) => (r.passed(), r.checks.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone())).collect::<Vec<_>>()),
        Err(e) => (false, vec![("structure".to_string(), false, e.to_string())]),
    };
    let mut text = format!("{}-graph, {} vertices, {} edges: {}\n", spec.k, spec.vertices.len(), spec.edges.len(), verdict(pass));
    for (name, ok, detail) in &checks {
        let _ = writeln!(text, "  {name:<26} {} {detail}", verdict(*ok));
    }
    let checks: Vec<Value> = checks.into_iter().map(|(name, passed, detail)| json!({"name": name, "passed": passed, "detail": detail})).collect();
    Ok(Report { pass: Some(pass), text, json: json!({"command": "validate", "pass": pass, "checks": checks}) })
}

fn info(src: &str) -> Result<Report> {
    let g: KGraph = load_graph(src)?;
    let flags = g.structural_flags();
    let mut text = format!("{}-graph with {} vertices and {} edges\n", g.k(), g.vertex_count(), g.edge_count());
    let _ = writeln!(
        text,
        "  strongly connected: {}, sources: {}, row finite: {}",
        flags.strongly_connected, flags.has_sources, flags.row_finite
    );
    let names: Vec<&str> = g.vertex_ids().map(|v| g.vertex_name(v)).collect();
    let _ = writeln!(text, "  vertices: {}", names.join(" "));
    let mut matrices = Vec::new();
    for c in 1..=g.k() {
        let a = g.vertex_matrix(c)?;
        let _ = writeln!(text, "  A_{c} = {a:?}");
        matrices.push(a);
    }
    let pf = match pf_data(&g) {
        Ok(pf) => {
            let rho: Vec<String> = pf.rho.iter().map(ToString::to_string).collect();
            let kappa: Vec<String> = pf.kappa.iter().map(ToString::to_string).collect();
            let _ = writeln!(text, "  ρ = ({})  κ = ({})  residual {:e}", rho.join(", "), kappa.join(", "), pf.residual);
            json!({
                "rho": pf.rho.iter().map(real_json).collect::<Vec<_>>(),
                "kappa": pf.kappa.iter().map(real_json).collect::<Vec<_>>(),
                "residual": pf.residual,
            })
        }
        Err(e) => {
            let _ = writeln!(text, "  no Perron-Frobenius data: {e}");
            json!({"error": e.to_string()})
        }
    };
    Ok(Report {
        pass: None,
        text,
        json: json!({
            "command": "info", "k": g.k(), "vertices": names, "edges": g.edge_count(),
            "flags": {"stronglyConnected": flags.strongly_connected, "hasSources": flags.has_sources, "rowFinite": flags.row_finite},
            "matrices": matrices, "pf": pf,
        }),
    })
}

fn library_cmd(name: &str, n: Option<usize>, perm: Option<&str>, system: bool, output: Option<&str>) -> Result<Report> {
    let body = if system {
        if n.is_some() || perm.is_some() {
            bail!("--N and --perm only apply to graphs");
        }
        if !SYSTEM_NAMES.contains(&name) {
            bail!("unknown library system `{name}` (have {})", SYSTEM_NAMES.join(", "));
        }
        system_to_json(&load_system(name)?)
    } else {
        let perm = perm.map(|p| parse_list::<usize>(p, "--perm")).transpose()?;
        if name != "lambda_2N" && (n.is_some() || perm.is_some()) {
            bail!("--N and --perm only apply to lambda_2N");
        }
        let spec = library::standard_library(name, n, perm.as_deref())
            .map_err(|e| anyhow!("{e} (have {})", library::NAMES.join(", ")))?;
        serde_json::to_value(spec)?
    };
    let mut text = serde_json::to_string_pretty(&body)?;
    text.push('\n');
    match output {
        Some(path) if path != "-" => {
            std::fs::write(path, &text).with_context(|| format!("writing {path}"))?;
            Ok(Report { pass: None, text: format!("wrote {path}\n"), json: json!({"command": "library", "written": path}) })
        }
        _ => Ok(Report { pass: None, text, json: body }),
    }
}

