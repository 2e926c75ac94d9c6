//! Command-line front end. Every command produces a flat list of key/value
//! records, rendered either aligned for reading or as `key=value` lines.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::delaunay::{edge_invariants, make_delaunay_with, MAX_FLIPS};
use crate::error::Error;
use crate::holonomy::{alength_from_fixed_points, develop, vertex_holonomy};
use crate::identities::{run_all, DEFAULT_SEED};
use crate::poisson::{
    angle_gradients, eta_matrix, jacobi_check, radical_check, wp_comparison_note, RANK_TOL,
};
use crate::surface::{classify_angles, wall_distance, AngleData, ConeSurface};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_WALL: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Tolerance keys and defaults. Self-test suites are also keyed by name.
const TOLERANCES: [(&str, f64); 5] =
    [("radical", 1e-8), ("jacobi", 1e-5), ("trace", 1e-8), ("alength", 1e-8), ("delaunay", 1e-10)];
const SUITES: [&str; 9] = [
    "trig-elliptic",
    "trig-geodesic",
    "trig-mixed",
    "flat-fixed-points",
    "flat-orientation",
    "log-elliptic",
    "log-hyperbolic",
    "exp-log",
    "killing-ratio",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check a surface or angle-data file and report its stratum.
    Validate,
    /// Evaluate and certify the Poisson bivector.
    Poisson,
    /// Develop the surface and recover edge lengths from vertex holonomy.
    Holonomy,
    /// Flip to a locally Delaunay triangulation.
    Delaunay,
    /// Run the randomized identity suites.
    Selftest,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "cone-poisson", version, about = "Hyperbolic cone surfaces and their Poisson bivector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Surface description (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Override a tolerance, e.g. `--tol jacobi=1e-6`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VAL")]
    pub tol: Vec<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for finite differences; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown tolerance key {0:?}")]
    UnknownTolerance(String),
    #[error("invalid tolerance {0:?}")]
    BadTolerance(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Io { .. } => "Io",
            CliError::UnknownTolerance(_) => "UnknownTolerance",
            CliError::BadTolerance(_) => "BadTolerance",
            CliError::Lib(e) => e.kind(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e {
                Error::WallAngle { .. }
                | Error::NoBranch
                | Error::NotSemisimple
                | Error::NotElliptic
                | Error::NotHyperbolic
                | Error::CoincidentFixedPoints
                | Error::DegenerateDirection => EXIT_WALL,
                Error::NumericalCollapse(_)
                | Error::NoSolution(_)
                | Error::UnflippableConfiguration(_)
                | Error::NonTermination(_)
                | Error::InvalidDeterminant(_) => EXIT_NUMERICAL,
                _ => EXIT_INPUT,
            },
            _ => EXIT_INPUT,
        }
    }
}

/// Ordered key/value records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    records: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        let value = value.to_string().replace('\n', " ");
        self.records.push((key.into(), value));
    }

    fn float(&mut self, key: impl Into<String>, v: f64) {
        self.push(key, format!("{v:.16e}"));
    }

    pub fn records(&self) -> &[(String, String)] {
        &self.records
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.records.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Structured => {
                for (k, v) in &self.records {
                    out.push_str(&format!("{k}={v}\n"));
                }
            }
            Format::Text => {
                let width = self.records.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.records {
                    out.push_str(&format!("{k:<width$}  {v}\n"));
                }
            }
        }
        out
    }

    /// Inverse of the structured rendering.
    pub fn parse_structured(text: &str) -> Option<Report> {
        let mut r = Report::default();
        for line in text.lines() {
            let (k, v) = line.split_once('=')?;
            r.records.push((k.to_string(), v.to_string()));
        }
        Some(r)
    }
}

/// A finished command: its report and process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

struct Tolerances(BTreeMap<String, f64>);

impl Tolerances {
    fn parse(overrides: &[String]) -> Result<Self, CliError> {
        let mut map: BTreeMap<String, f64> = TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for item in overrides {
            let (key, value) = item.split_once('=').ok_or_else(|| CliError::BadTolerance(item.clone()))?;
            if !map.contains_key(key) && !SUITES.contains(&key) {
                return Err(CliError::UnknownTolerance(key.to_string()));
            }
            let v: f64 = value.trim().parse().map_err(|_| CliError::BadTolerance(item.clone()))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::BadTolerance(item.clone()));
            }
            map.insert(key.to_string(), v);
        }
        Ok(Tolerances(map))
    }

    fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AngleFile {
    genus: usize,
    angles: Vec<f64>,
}

enum Input {
    Surface(ConeSurface),
    Angles(AngleData),
}

fn read_input(cli: &Cli) -> Result<Input, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("angles").is_some() {
        let f: AngleFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(Input::Angles(AngleData::new(f.genus, f.angles)?));
    }
    Ok(Input::Surface(ConeSurface::from_json(&text)?))
}

fn read_surface(cli: &Cli) -> Result<ConeSurface, CliError> {
    match read_input(cli)? {
        Input::Surface(s) => Ok(s),
        Input::Angles(_) => Err(CliError::Usage("this command needs a triangulated surface, not angle data".into())),
    }
}

fn push_error(r: &mut Report, e: &CliError) {
    r.push("status", "error");
    r.push("error.kind", e.kind());
    r.push("error.message", e);
    if let CliError::Lib(inner) = e {
        match inner {
            Error::TriangleInequality { triangle, edges, lengths } => {
                r.push("error.triangle", triangle);
                r.push("error.edges", edges.join(","));
                r.push("error.lengths", lengths.map(|l| format!("{l:.16e}")).join(","));
            }
            Error::NotAdmissible { chi } => r.float("error.chi", *chi),
            Error::WallAngle { vertex, theta } => {
                r.push("error.vertex", vertex);
                r.float("error.theta", *theta);
            }
            Error::NonPositiveLength { edge, .. } => r.push("error.edge", edge),
            _ => {}
        }
    }
}

fn status(r: &mut Report, ok: bool) -> i32 {
    r.push("status", if ok { "ok" } else { "fail" });
    if ok {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs the parsed command. The report goes to stdout; the code is the
/// process exit status.
pub fn run(cli: &Cli) -> Outcome {
    let mut report = Report::default();
    report.push("command", format!("{:?}", cli.command).to_lowercase());
    let result = Tolerances::parse(&cli.tol).and_then(|tol| match cli.command {
        Command::Validate => validate(cli, &mut report),
        Command::Poisson => poisson(cli, &tol, &mut report),
        Command::Holonomy => holonomy(cli, &tol, &mut report),
        Command::Delaunay => delaunay(cli, &tol, &mut report),
        Command::Selftest => Ok(selftest(cli, &tol, &mut report)),
    });
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            push_error(&mut report, &e);
            e.exit_code()
        }
    };
    Outcome { report, code }
}

fn stratum(r: &mut Report, data: &AngleData) -> Result<bool, CliError> {
    let strat = classify_angles(data)?;
    r.float("chi", strat.chi);
    r.push("hyperbolic", strat.hyperbolic);
    r.push("flat", strat.flat);
    r.push("regular", strat.regular);
    r.push("small", strat.small);
    let walls: Vec<String> = strat.wall_vertices.iter().map(|v| v.to_string()).collect();
    r.push("wall_vertices", if walls.is_empty() { "none".to_string() } else { walls.join(",") });
    for (v, t) in data.theta.iter().enumerate() {
        r.float(format!("theta.{v}"), *t);
    }
    Ok(strat.hyperbolic)
}

fn validate(cli: &Cli, r: &mut Report) -> Result<i32, CliError> {
    match read_input(cli)? {
        Input::Angles(data) => {
            r.push("input", "angles");
            r.push("g", data.genus);
            r.push("n", data.n());
            let hyperbolic = stratum(r, &data)?;
            Ok(if hyperbolic {
                r.push("status", "ok");
                EXIT_OK
            } else {
                r.push("status", "not-hyperbolic");
                EXIT_INPUT
            })
        }
        Input::Surface(s) => {
            r.push("input", "surface");
            r.push("g", s.genus());
            r.push("n", s.num_vertices());
            r.push("N", s.num_edges());
            r.push("triangles", s.num_triangles());
            r.push("check.gluing", "ok");
            r.push("check.euler", "ok");
            r.push("check.triangle_inequality", "ok");
            r.float("area", s.area());
            let hyperbolic = stratum(r, &s.cone_angles())?;
            r.push("status", if hyperbolic { "ok" } else { "not-hyperbolic" });
            Ok(if hyperbolic { EXIT_OK } else { EXIT_INPUT })
        }
    }
}

fn tol(t: &Tolerances, key: &str) -> f64 {
    t.get(key).expect("tolerance key is registered")
}

fn poisson(cli: &Cli, t: &Tolerances, r: &mut Report) -> Result<i32, CliError> {
    let s = read_surface(cli)?;
    let n = s.num_vertices();
    r.push("g", s.genus());
    r.push("n", n);
    r.push("N", s.num_edges());
    for v in 0..n {
        let theta = s.cone_angle(v);
        r.float(format!("wall.{v}.sin_half"), (0.5 * theta).sin().abs());
        r.float(format!("wall.{v}.distance"), wall_distance(theta));
    }
    let p = eta_matrix(&s)?;
    let ids: Vec<&str> = s.edges().iter().map(|e| e.id.as_str()).collect();
    r.push("coordinates", ids.join(","));
    for i in 0..p.dim() {
        let row: Vec<String> = (0..p.dim()).map(|j| format!("{:.16e}", p.get(i, j))).collect();
        r.push(format!("P.{i}"), row.join(" "));
    }
    let antisymmetric = p.is_antisymmetric();
    r.push("antisymmetric", antisymmetric);
    let rank = p.rank(RANK_TOL);
    let expected = 6 * s.genus() + 2 * n - 6;
    r.push("rank", rank);
    r.push("rank.expected", expected);
    let radical = radical_check(&p, &angle_gradients(&s))?;
    for (v, x) in radical.iter().enumerate() {
        r.float(format!("radical.{v}"), *x);
    }
    let radical_max = radical.iter().copied().fold(0.0, f64::max);
    r.float("radical.max", radical_max);
    r.float("radical.tol", tol(t, "radical"));
    let jacobi = jacobi_check(&s, cli.jobs)?;
    r.float("jacobi", jacobi);
    r.float("jacobi.tol", tol(t, "jacobi"));
    r.push("note", wp_comparison_note());
    let ok = antisymmetric && rank == expected && radical_max < tol(t, "radical") && jacobi < tol(t, "jacobi");
    Ok(status(r, ok))
}

fn holonomy(cli: &Cli, t: &Tolerances, r: &mut Report) -> Result<i32, CliError> {
    let s = read_surface(cli)?;
    let atlas = develop(&s)?;
    r.push("g", s.genus());
    r.push("n", s.num_vertices());
    r.push("base_triangle", atlas.base());
    let mut trace_max: f64 = 0.0;
    for v in 0..s.num_vertices() {
        let theta = s.cone_angle(v);
        let m = vertex_holonomy(&atlas, v)?;
        let expected = 2.0 * (0.5 * theta).cos().abs();
        let err = (m.trace().abs() - expected).abs();
        trace_max = trace_max.max(err);
        r.float(format!("vertex.{v}.theta"), theta);
        r.float(format!("vertex.{v}.trace"), m.trace().abs());
        r.float(format!("vertex.{v}.expected"), expected);
        r.float(format!("vertex.{v}.error"), err);
    }
    let mut alength_max: f64 = 0.0;
    for (e, edge) in s.edges().iter().enumerate() {
        let recovered = alength_from_fixed_points(&atlas, &s, e)?;
        let err = (recovered - edge.length).abs();
        alength_max = alength_max.max(err);
        r.float(format!("edge.{}.length", edge.id), edge.length);
        r.float(format!("edge.{}.recovered", edge.id), recovered);
        r.float(format!("edge.{}.error", edge.id), err);
    }
    r.float("trace.max_error", trace_max);
    r.float("alength.max_error", alength_max);
    let ok = trace_max < tol(t, "trace") && alength_max < tol(t, "alength");
    Ok(status(r, ok))
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn delaunay(cli: &Cli, t: &Tolerances, r: &mut Report) -> Result<i32, CliError> {
    let s = read_surface(cli)?;
    let tolerance = tol(t, "delaunay");
    r.float("psi.min.initial", min_of(&edge_invariants(&s)));
    let (d, moves) = make_delaunay_with(&s, tolerance, MAX_FLIPS)?;
    r.push("flips", moves.len());
    for (k, m) in moves.iter().enumerate() {
        r.push(format!("move.{k}"), m.log_line());
    }
    let angle_drift = (0..s.num_vertices())
        .map(|v| (d.cone_angle(v) - s.cone_angle(v)).abs())
        .fold(0.0, f64::max);
    r.float("drift.cone_angle", angle_drift);
    r.float("drift.area", (d.area() - s.area()).abs());
    for e in d.edges() {
        r.float(format!("edge.{}.length", e.id), e.length);
    }
    let psi_min = min_of(&edge_invariants(&d));
    r.float("psi.min.final", psi_min);
    r.float("delaunay.tol", tolerance);
    Ok(status(r, psi_min >= -tolerance))
}

fn selftest(cli: &Cli, t: &Tolerances, r: &mut Report) -> i32 {
    r.push("seed", cli.seed);
    let mut ok = true;
    for mut suite in run_all(cli.seed) {
        if let Some(v) = t.get(suite.name) {
            suite.tolerance = v;
        }
        let key = format!("suite.{}", suite.name);
        r.push(format!("{key}.cases"), suite.cases);
        r.float(format!("{key}.max_residual"), suite.max_residual);
        r.float(format!("{key}.tolerance"), suite.tolerance);
        r.push(format!("{key}.status"), if suite.passed() { "pass" } else { "fail" });
        ok &= suite.passed();
    }
    status(r, ok)
}
