//! Command-line front-end: reads a problem file, runs the stability checks,
//! lists the face lattice of the critical cone or runs the sampling oracle.
//!
//! Exit codes: 0 when every selected condition holds (or the oracle finds no
//! violation), 2 when one fails (or a violation is found), 1 on input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scd_stability::io::problem_from_str;
use scd_stability::oracle::{build_solution_graph, OracleConfig, OracleReport, OracleVerdict};
use scd_stability::problem::GeProblem;
use scd_stability::rational::format_vec;
use scd_stability::stability::{Analysis, Condition, ConditionReport, StabilityReport, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Overrides `--workers` when set.
pub const WORKERS_ENV: &str = "SCD_STAB_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "scd-stab", version, about = "Certify isolated calmness of solution maps to polyhedral generalized equations")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing; only the exit code reports the outcome.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run stability conditions at the reference solution.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConditionArg::All)]
        condition: ConditionArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// List the faces of the critical cone.
    Faces { file: PathBuf },
    /// Search for calmness violations by sampling the solution graph.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = 1e6)]
        kappa: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConditionArg {
    Primal,
    Dual,
    Face,
    Facepair,
    Point,
    Aubin,
    /// Regularity of the extended map `(x, y) ↦ (x, H(x, y))`.
    Scd,
    All,
}

impl ConditionArg {
    pub fn conditions(self) -> Vec<Condition> {
        match self {
            ConditionArg::Primal => vec![Condition::Primal],
            ConditionArg::Dual => vec![Condition::Dual],
            ConditionArg::Face => vec![Condition::Face],
            ConditionArg::Facepair => vec![Condition::FacePair],
            ConditionArg::Point => vec![Condition::Point],
            ConditionArg::Aubin => vec![Condition::Aubin],
            ConditionArg::Scd => vec![Condition::ScdRegular],
            ConditionArg::All => Condition::ALL.to_vec(),
        }
    }
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(err: &anyhow::Error) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {err:#}\n") }
    }
}

/// Parses arguments and runs; never exits the process.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

fn workers(flag: usize) -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(flag).max(1)
}

fn load(path: &Path) -> Result<GeProblem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    problem_from_str(&text).with_context(|| format!("{}", path.display()))
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Check { file, condition, workers: w } => cmd_check(file, *condition, workers(*w), cli.json),
        Command::Faces { file } => cmd_faces(file, cli.json),
        Command::Oracle { file, radius, kappa, samples, seed, workers: w } => {
            let cfg = OracleConfig { radius: *radius, kappa: *kappa, samples: *samples, seed: *seed };
            cmd_oracle(file, &cfg, workers(*w), cli.json)
        }
    };
    match result {
        Ok(mut out) => {
            if cli.quiet {
                out.stdout.clear();
            }
            out
        }
        Err(e) => Outcome::input_error(&e),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().context("cannot start worker threads")
}

pub fn cmd_check(file: &Path, condition: ConditionArg, workers: usize, json: bool) -> Result<Outcome> {
    let problem = load(file)?;
    let analysis = Analysis::new(&problem).with_context(|| format!("{}", file.display()))?;
    let report = analysis.check_all(&condition.conditions(), workers);
    let code = if report.all_hold() { EXIT_OK } else { EXIT_FAILED };
    let stdout = if json {
        let mut v = report.to_json();
        v["command"] = json!("check");
        format!("{}\n", serde_json::to_string_pretty(&v)?)
    } else {
        render_check(&analysis, &report)
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn vec_text(v: &[scd_stability::rational::Q]) -> String {
    format!("({})", format_vec(v).join(", "))
}

fn witness_text(w: &Witness) -> String {
    let mut parts = Vec::new();
    for (name, val) in [("v", &w.v), ("v*", &w.v_star), ("w*", &w.w_star), ("z*", &w.z_star), ("u*", &w.u_star)] {
        if let Some(v) = val {
            parts.push(format!("{name} = {}", vec_text(v)));
        }
    }
    parts.join(", ")
}

fn rows_text(rows: &[usize]) -> String {
    format!("{{{}}}", rows.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))
}

fn location_text(r: &ConditionReport) -> String {
    let p = &r.provenance;
    let mut parts = Vec::new();
    if let Some(f) = &p.face {
        parts.push(format!("face with active rows {}", rows_text(f)));
    }
    if let Some((outer, inner)) = &p.pair {
        parts.push(format!("face pair with active rows {} and {}", rows_text(outer), rows_text(inner)));
    }
    if let Some(piece) = &p.piece {
        parts.push(format!("normal-cone piece with tight rows {}", rows_text(piece)));
    }
    parts.join(", ")
}

fn render_check(a: &Analysis, report: &StabilityReport) -> String {
    let p = a.problem();
    let mut s = String::new();
    let _ = writeln!(s, "problem: l = {}, k = {}, {} rows in D", p.l(), p.k(), p.d().num_rows());
    let _ = writeln!(s, "critical cone: {} faces{}", a.faces().len(), if report.augmented { " (augmented parameter)" } else { "" });
    for r in &report.reports {
        let _ = writeln!(s, "{:<12} {}", r.condition.id(), r.verdict.as_str());
        if let Some(w) = &r.witness {
            let _ = writeln!(s, "{:<12} witness {}", "", witness_text(w));
            let loc = location_text(r);
            if !loc.is_empty() {
                let _ = writeln!(s, "{:<12} at {loc}", "");
            }
        }
    }
    let overall = if report.all_hold() { "all selected conditions hold" } else { "some condition fails" };
    let _ = writeln!(s, "{overall}");
    s
}

pub fn cmd_faces(file: &Path, json: bool) -> Result<Outcome> {
    let problem = load(file)?;
    let analysis = Analysis::new(&problem).with_context(|| format!("{}", file.display()))?;
    let faces: Vec<Value> = analysis
        .faces()
        .iter()
        .map(|f| {
            json!({
                "dim": f.dim,
                "active": analysis.face_rows(f),
                "lineality": f.lineality.basis().iter().map(|b| format_vec(b)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let stdout = if json {
        format!("{}\n", serde_json::to_string_pretty(&json!({ "command": "faces", "faces": faces }))?)
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "{} faces of the critical cone", faces.len());
        for f in analysis.faces() {
            let basis: Vec<String> = f.lineality.basis().iter().map(|b| vec_text(b)).collect();
            let _ = writeln!(
                s,
                "dim {}  active rows {}  span {}",
                f.dim,
                rows_text(&analysis.face_rows(f)),
                if basis.is_empty() { "{0}".to_string() } else { basis.join(" ") }
            );
        }
        s
    };
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

pub fn cmd_oracle(file: &Path, cfg: &OracleConfig, workers: usize, json: bool) -> Result<Outcome> {
    let problem = load(file)?;
    let graph = build_solution_graph(&problem).with_context(|| format!("{}", file.display()))?;
    let report = pool(workers)?.install(|| graph.verify_isolated_calmness_around(cfg))?;
    let code = match report.verdict {
        OracleVerdict::Consistent => EXIT_OK,
        OracleVerdict::Violated => EXIT_FAILED,
    };
    let stdout = if json {
        let mut v = report.to_json();
        v["command"] = json!("oracle");
        v["pieces"] = json!(graph.pieces().len());
        format!("{}\n", serde_json::to_string_pretty(&v)?)
    } else {
        render_oracle(&report, graph.pieces().len())
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn render_oracle(r: &OracleReport, pieces: usize) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "solution graph: {pieces} pieces");
    let _ = writeln!(
        s,
        "sampling: {} anchors, {} probes, radius {}, kappa {}, seed {}",
        r.anchors, r.probes, c.radius, c.kappa, c.seed
    );
    match r.modulus {
        Some(m) => {
            let _ = writeln!(s, "empirical modulus: {m}");
        }
        None => {
            let _ = writeln!(s, "empirical modulus: unbounded");
        }
    }
    let _ = writeln!(s, "verdict: {}", r.verdict.as_str());
    if let Some(q) = &r.quadruple {
        let _ = writeln!(s, "anchor (x, y) = {}, {}", vec_text(&q.x), vec_text(&q.y));
        let _ = writeln!(s, "probe (x', y') = {}, {}", vec_text(&q.x_prime), vec_text(&q.y_prime));
    }
    s
}

