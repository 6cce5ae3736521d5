//! Command-line front end: `list`, `check` and `run` over the corpus.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::corpus::{self, Check, CheckOutcome, CheckParams, RunSpec, SequenceSource, Solver, TheoremOutcome};
use crate::geometry::Point;
use crate::solvers::{Consistency, StepRule};
use crate::{tol, Error, Result};

/// Exit code for a run whose verdicts all match (or explore mode).
pub const EXIT_OK: i32 = 0;
/// Exit code for a verdict that disagrees with the expected table in regression mode.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for bad input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exit 1 when a verdict contradicts the corpus table.
    Regression,
    /// Always exit 0.
    #[default]
    Explore,
}

#[derive(Parser, Debug)]
#[command(name = "sharpeq", version, about = "Sharpness certificates and finite-identification diagnostics")]
pub struct Cli {
    /// JSON file with any of the flags below; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the corpus registry.
    List(ListArgs),
    /// Run sharpness checks on corpus instances.
    Check(CheckArgs),
    /// Run a solver and the termination diagnostics.
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct ListArgs {
    /// Print the registry as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Write the registry JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct CheckArgs {
    /// Problem id, a comma-separated list, or `all`.
    #[arg(long)]
    pub problem: Option<String>,
    /// Weak sharpness of the solution set at modulus `--alpha`.
    #[arg(long)]
    pub weak_sharp: bool,
    /// Augmented weak sharpness along a feasible sequence.
    #[arg(long)]
    pub augmented: bool,
    /// Strong non-degeneracy at every sampled solution point.
    #[arg(long)]
    pub strong: bool,
    /// Interior condition on the cone G.
    #[arg(long)]
    pub eq310: bool,
    /// Solution-set characterization on a grid over S.
    #[arg(long)]
    pub characterization: bool,
    /// Sampled validation of the declared solution set.
    #[arg(long)]
    pub solution: bool,
    /// Monotonicity of the diagonal subdifferential (sampled).
    #[arg(long)]
    pub diag_monotone: bool,
    /// Monotonicity of the bifunction (sampled).
    #[arg(long)]
    pub bifunction_monotone: bool,
    /// Convexity of the bifunction in its second argument (sampled).
    #[arg(long)]
    pub convex_in_y: bool,
    /// Every check listed in the instance's expected table.
    #[arg(long)]
    pub expected: bool,
    /// Target modulus; defaults to the instance's.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Parameter of the mapping family.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Interior margin (default 1e-3).
    #[arg(long)]
    pub delta: Option<f64>,
    /// `builtin` or a JSON file holding an array of points.
    #[arg(long)]
    pub seq: Option<String>,
    /// Length of the built-in sequence.
    #[arg(long)]
    pub seq_n: Option<usize>,
    /// RNG seed; falls back to the config, then SHARPEQ_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `regression` exits 1 on a contradicted verdict.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent (problem, check) pairs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Problem id.
    #[arg(long)]
    pub problem: Option<String>,
    /// `subgrad`, `extragradient` or `prox`.
    #[arg(long)]
    pub solver: Option<String>,
    /// `const:t`, `dim:c` or `polyak:f*`.
    #[arg(long)]
    pub step: Option<String>,
    /// Extragradient step.
    #[arg(long)]
    pub t: Option<f64>,
    /// Proximal parameter.
    #[arg(long)]
    pub c: Option<f64>,
    /// Iteration count (default 1000).
    #[arg(long)]
    pub n: Option<usize>,
    /// Inner iterations per proximal step (default 200).
    #[arg(long)]
    pub inner_n: Option<usize>,
    /// Comma-separated start point.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Parameter of the mapping family.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Identification tolerance on dist(x, S̄) (default 1e-6).
    #[arg(long)]
    pub eps_id: Option<f64>,
    /// Tolerance on the residual ρ (default 1e-6).
    #[arg(long)]
    pub tol_rho: Option<f64>,
    /// RNG seed; falls back to the config, then SHARPEQ_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `regression` exits 1 on a contradicted verdict.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// CSV trace `k,x0,..,rho,dist,psi_min`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Full run record as JSON.
    #[arg(long)]
    pub record: Option<PathBuf>,
}

/// Settings shared by the commands, as read from `--config`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Option<String>,
    pub checks: Vec<Check>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub delta: Option<f64>,
    pub seq: Option<String>,
    pub seq_n: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub solver: Option<String>,
    pub step: Option<String>,
    pub t: Option<f64>,
    pub c: Option<f64>,
    pub n: Option<usize>,
    pub inner_n: Option<usize>,
    pub x0: Option<Vec<f64>>,
    pub eps_id: Option<f64>,
    pub tol_rho: Option<f64>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub record: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Seed from the flag, then the config file, then `SHARPEQ_SEED`, then 0.
fn resolve_seed(flag: Option<u64>, cfg: Option<u64>) -> Result<u64> {
    if let Some(s) = flag.or(cfg) {
        return Ok(s);
    }
    match std::env::var("SHARPEQ_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| Error::InvalidParameter(format!("SHARPEQ_SEED=`{v}` is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidParameter(format!("bad coordinate `{t}` in `{s}`"))))
        .collect()
}

fn emit(value: &serde_json::Value, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command, writing reports to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        // A closed stdout (`| head`) is not the caller's mistake.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    match cli.command {
        Command::List(a) => cmd_list(&a, out),
        Command::Check(a) => cmd_check(&a, &cfg, out),
        Command::Run(a) => cmd_run(&a, &cfg, out),
    }
}

pub fn cmd_list(args: &ListArgs, out: &mut dyn Write) -> Result<i32> {
    let reg = corpus::export_json();
    if let Some(p) = &args.out {
        fs::write(p, serde_json::to_string_pretty(&reg)? + "\n")?;
    }
    if args.json {
        emit(&reg, None, out)?;
    } else {
        writeln!(out, "{:<8}  {:<7}  provenance", "id", "kind")?;
        for row in corpus::list() {
            writeln!(out, "{:<8}  {:<7}  {}", row.id, row.kind, row.provenance)?;
        }
    }
    Ok(EXIT_OK)
}

fn selected_checks(args: &CheckArgs, cfg: &ExperimentConfig) -> Vec<Check> {
    let flags = [
        (args.weak_sharp, Check::WeakSharp),
        (args.augmented, Check::Augmented),
        (args.strong, Check::StrongNondegenerate),
        (args.eq310, Check::Eq310),
        (args.characterization, Check::Characterization),
        (args.solution, Check::SolutionSet),
        (args.diag_monotone, Check::DiagMonotone),
        (args.bifunction_monotone, Check::BifunctionMonotone),
        (args.convex_in_y, Check::ConvexInY),
    ];
    let chosen: Vec<Check> = flags.iter().filter(|(on, _)| *on).map(|(_, c)| *c).collect();
    if chosen.is_empty() {
        cfg.checks.clone()
    } else {
        chosen
    }
}

fn problem_ids(spec: &str) -> Result<Vec<&'static str>> {
    if spec == "all" {
        return Ok(corpus::entries().iter().map(|e| e.id).collect());
    }
    spec.split(',').map(|id| corpus::get(id.trim()).map(|e| e.id)).collect()
}

fn read_sequence(path: &str) -> Result<Vec<Point>> {
    let text = fs::read_to_string(path)?;
    let raw: Vec<Vec<f64>> = serde_json::from_str(&text)?;
    Ok(raw.into_iter().map(Point::from_vec).collect())
}

pub fn cmd_check(args: &CheckArgs, cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = args
        .problem
        .clone()
        .or_else(|| cfg.problem.clone())
        .ok_or_else(|| Error::InvalidParameter("--problem is required".into()))?;
    let ids = problem_ids(&problem)?;
    let checks = selected_checks(args, cfg);
    let use_table = args.expected || (checks.is_empty() && problem == "all");
    if checks.is_empty() && !use_table {
        return Err(Error::InvalidParameter("select at least one check (e.g. --weak-sharp) or --expected".into()));
    }
    let seq_n = args.seq_n.or(cfg.seq_n).unwrap_or(500);
    let sequence = match args.seq.as_deref().or(cfg.seq.as_deref()) {
        None | Some("builtin") => SequenceSource::Builtin { n: seq_n },
        Some(path) => SequenceSource::Explicit(read_sequence(path)?),
    };
    let params = CheckParams {
        alpha: args.alpha.or(cfg.alpha),
        lambda: args.lambda.or(cfg.lambda),
        delta: args.delta.or(cfg.delta).unwrap_or(tol::INTERIOR_MARGIN),
        seed: resolve_seed(args.seed, cfg.seed)?,
        sequence,
    };
    for v in [params.alpha, params.lambda, Some(params.delta)].into_iter().flatten() {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter(format!("parameter {v} must be finite and nonnegative")));
        }
    }
    let mode = args.mode.or(cfg.mode).unwrap_or_default();
    let mut tasks: Vec<(&'static str, Check)> = Vec::new();
    for id in ids {
        let entry = corpus::get(id)?;
        if use_table {
            for name in entry.expected.keys() {
                tasks.push((id, name.parse()?));
            }
        }
        for c in &checks {
            if !tasks.contains(&(id, *c)) {
                tasks.push((id, *c));
            }
        }
    }
    let jobs = args.jobs.or(cfg.jobs).unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {jobs} workers: {e}")))?;
    let results: Vec<CheckOutcome> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(id, c)| corpus::run_check(corpus::get(id)?, *c, &params))
            .collect::<Result<Vec<_>>>()
    })?;
    let mismatches: Vec<String> = results
        .iter()
        .filter(|r| r.matches() == Some(false))
        .map(|r| format!("{}:{}", r.problem, r.check))
        .collect();
    let report = json!({
        "mode": mode,
        "params": params,
        "results": results,
        "mismatches": mismatches,
    });
    emit(&report, args.out.as_deref().or(cfg.out.as_deref()), out)?;
    Ok(if mode == Mode::Regression && !mismatches.is_empty() { EXIT_MISMATCH } else { EXIT_OK })
}

fn build_run_spec(args: &RunArgs, cfg: &ExperimentConfig) -> Result<RunSpec> {
    let problem = args
        .problem
        .clone()
        .or_else(|| cfg.problem.clone())
        .ok_or_else(|| Error::InvalidParameter("--problem is required".into()))?;
    corpus::get(&problem)?;
    let solver: Solver = args.solver.as_deref().or(cfg.solver.as_deref()).unwrap_or("subgrad").parse()?;
    let step = args.step.as_deref().or(cfg.step.as_deref()).map(str::parse::<StepRule>).transpose()?;
    let x0 = match (&args.x0, &cfg.x0) {
        (Some(s), _) => Some(parse_point(s)?),
        (None, Some(v)) => Some(v.clone()),
        (None, None) => None,
    };
    let d = RunSpec::default();
    let spec = RunSpec {
        problem,
        solver,
        step,
        t: args.t.or(cfg.t).unwrap_or(d.t),
        c: args.c.or(cfg.c).unwrap_or(d.c),
        n: args.n.or(cfg.n).unwrap_or(d.n),
        inner_n: args.inner_n.or(cfg.inner_n).unwrap_or(d.inner_n),
        x0,
        lambda: args.lambda.or(cfg.lambda),
        eps_id: args.eps_id.or(cfg.eps_id).unwrap_or(d.eps_id),
        tol_rho: args.tol_rho.or(cfg.tol_rho).unwrap_or(d.tol_rho),
        seed: resolve_seed(args.seed, cfg.seed)?,
    };
    for (name, v) in [("eps-id", spec.eps_id), ("tol-rho", spec.tol_rho)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("--{name} must be positive")));
        }
    }
    Ok(spec)
}

pub fn cmd_run(args: &RunArgs, cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<i32> {
    let spec = build_run_spec(args, cfg)?;
    let outcome = corpus::execute(&spec)?;
    if let Some(p) = args.csv.as_ref().or(cfg.csv.as_ref()) {
        outcome.record.write_csv(fs::File::create(p)?)?;
    }
    if let Some(p) = args.record.as_ref().or(cfg.record.as_ref()) {
        fs::write(p, serde_json::to_string_pretty(&outcome.record)? + "\n")?;
    }
    let mode = args.mode.or(cfg.mode).unwrap_or_default();
    emit(&serde_json::to_value(&outcome.summary)?, args.json.as_deref().or(cfg.json.as_deref()), out)?;
    let violated = matches!(
        &outcome.summary.theorem,
        TheoremOutcome::Checked(v) if matches!(v.consistency, Consistency::Violation { .. })
    );
    Ok(if mode == Mode::Regression && violated { EXIT_MISMATCH } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_from(std::iter::once("sharpeq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_prints_kinds() {
        let (code, out, _) = run(&["list"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("ex4_1") && l.contains("MP")));
        for kind in ["VIP", "SPP", "NEP"] {
            assert!(out.contains(kind));
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(&["check", "--problem", "nonexistent", "--weak-sharp"]).0, 2);
        assert_eq!(run(&["check", "--problem", "ex4_5"]).0, 2);
        assert_eq!(run(&["run", "--problem", "ex4_5", "--step", "bogus"]).0, 2);
        assert_eq!(run(&["run", "--problem", "ex4_5", "--x0", "1,nope"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
    }

    #[test]
    fn config_round_trips() {
        let cfg = ExperimentConfig {
            problem: Some("ex4_2".into()),
            checks: vec![Check::Augmented],
            lambda: Some(0.25),
            x0: Some(vec![1.0, 0.5]),
            mode: Some(Mode::Regression),
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), Some(4)).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some(4)).unwrap(), 4);
    }
}
