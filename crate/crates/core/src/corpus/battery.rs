use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{get, CorpusEntry};
use crate::geometry::Point;
use crate::sharpness::{AugmentedConfig, AugmentedMapping};
use crate::solvers::{
    diag_subgradient_run, extragradient_run, proximal_point_run, tail_len, verify_theorem_5_1, RunRecord, StepRule,
    TerminationVerdict, TheoremConfig,
};
use crate::{tol, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Subgrad,
    Extragradient,
    Prox,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Subgrad => "subgrad",
            Solver::Extragradient => "extragradient",
            Solver::Prox => "prox",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subgrad" => Ok(Solver::Subgrad),
            "extragradient" => Ok(Solver::Extragradient),
            "prox" => Ok(Solver::Prox),
            _ => Err(Error::InvalidParameter(format!("unknown solver `{s}` (subgrad, extragradient, prox)"))),
        }
    }
}

/// One solver run on a corpus instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunSpec {
    pub problem: String,
    pub solver: Solver,
    /// Step rule of the subgradient method; `dim:1` when absent.
    pub step: Option<StepRule>,
    /// Extragradient step.
    pub t: f64,
    /// Proximal parameter.
    pub c: f64,
    pub n: usize,
    pub inner_n: usize,
    /// Start; the corner of the sampling box projected onto `S` when absent.
    pub x0: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    pub eps_id: f64,
    pub tol_rho: f64,
    pub seed: u64,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            problem: String::new(),
            solver: Solver::Subgrad,
            step: None,
            t: 0.1,
            c: 1.0,
            n: 1000,
            inner_n: 200,
            x0: None,
            lambda: None,
            eps_id: tol::IDENTIFICATION,
            tol_rho: tol::RHO,
            seed: 0,
        }
    }
}

impl RunSpec {
    pub fn new(problem: &str, solver: Solver) -> Self {
        Self { problem: problem.into(), solver, ..Default::default() }
    }

    pub fn start(&self, entry: &CorpusEntry) -> Result<Point> {
        let prob = &entry.problem;
        match &self.x0 {
            Some(v) => {
                let x = Point::from_vec(v.clone());
                prob.require_feasible(&x)?;
                Ok(x)
            }
            None => Ok(prob.feasible().project(&Point::from_vec(prob.sample_box().1.to_vec()))),
        }
    }
}

/// What the termination verifier said about a run.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TheoremOutcome {
    Checked(TerminationVerdict),
    Refused { reason: String },
    OutOfScope { reason: String },
}

impl TheoremOutcome {
    pub fn verdict(&self) -> Option<&TerminationVerdict> {
        match self {
            TheoremOutcome::Checked(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub solver: Solver,
    pub step: Option<String>,
    pub n: usize,
    pub x0: Vec<f64>,
    pub seed: u64,
    pub mapping: String,
    pub k0: Option<usize>,
    pub rho_final: f64,
    pub rho_tail_max: f64,
    pub dist_final: Option<f64>,
    pub in_sequence_domain: bool,
    pub theorem: TheoremOutcome,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub summary: RunSummary,
}

/// Runs the solver, then the termination verifier with the entry's augmented
/// mapping (the diagonal subdifferential when the entry has none).
pub fn execute(spec: &RunSpec) -> Result<RunOutcome> {
    let entry = get(&spec.problem)?;
    let prob = &entry.problem;
    let x0 = spec.start(entry)?;
    let step = spec.step.unwrap_or(StepRule::Diminishing { c: 1.0 });
    let record = match spec.solver {
        Solver::Subgrad => diag_subgradient_run(prob, &x0, step, spec.n)?,
        Solver::Extragradient => extragradient_run(prob, &x0, spec.t, spec.n)?,
        Solver::Prox => proximal_point_run(prob, &x0, spec.c, spec.n, spec.inner_n)?,
    };
    let h = match &entry.mapping {
        Some(m) => m.build(spec.lambda),
        None => AugmentedMapping::diagonal(),
    };
    let record = record.with_problem(entry.id).with_seed(spec.seed).with_mapping(prob, &h)?.with_eps_id(spec.eps_id);
    let in_domain = entry.in_sequence_domain(&record.iterates);
    let theorem = if !in_domain {
        TheoremOutcome::OutOfScope { reason: "iterates leave the instance's sequence domain".into() }
    } else {
        let cfg = TheoremConfig {
            eps_id: spec.eps_id,
            tol_rho: spec.tol_rho,
            augmented: AugmentedConfig { seed: spec.seed, ..Default::default() },
            ..Default::default()
        };
        match verify_theorem_5_1(prob, &h, &record, &cfg) {
            Ok(v) => TheoremOutcome::Checked(v),
            Err(Error::Hypothesis(reason)) => TheoremOutcome::Refused { reason },
            Err(e) => return Err(e),
        }
    };
    let w = tail_len(record.rho.len(), tol::TAIL_WINDOW);
    let rho_tail_max = record.rho[record.rho.len() - w..].iter().cloned().fold(0.0_f64, f64::max);
    let summary = RunSummary {
        problem: entry.id.to_string(),
        solver: spec.solver,
        step: match spec.solver {
            Solver::Subgrad => Some(step.to_string()),
            Solver::Extragradient => Some(format!("t={}", spec.t)),
            Solver::Prox => Some(format!("c={}", spec.c)),
        },
        n: spec.n,
        x0: x0.as_slice().to_vec(),
        seed: spec.seed,
        mapping: h.label().to_string(),
        k0: record.identification_index,
        rho_final: *record.rho.last().expect("at least one iterate"),
        rho_tail_max,
        dist_final: record.dist_solution.as_ref().and_then(|d| d.last().copied()),
        in_sequence_domain: in_domain,
        theorem,
        notes: record.notes.clone(),
    };
    Ok(RunOutcome { record, summary })
}

fn spec(problem: &str, solver: Solver, x0: &[f64], f: impl FnOnce(&mut RunSpec)) -> RunSpec {
    let mut s = RunSpec::new(problem, solver);
    s.x0 = Some(x0.to_vec());
    f(&mut s);
    s
}

/// The standard battery: the three generators over the corpus.
pub fn battery_specs() -> Vec<RunSpec> {
    use Solver::*;
    let polyak = Some(StepRule::Polyak { f_star: 0.0 });
    let dim = |c| Some(StepRule::Diminishing { c });
    let constant = |t| Some(StepRule::Constant { t });
    vec![
        spec("ex4_1", Subgrad, &[0.9, 0.9], |s| {
            s.step = dim(1.0);
            s.n = 500;
        }),
        spec("ex4_1", Subgrad, &[0.9, 0.9], |s| s.step = polyak),
        spec("ex4_1", Prox, &[0.9, 0.9], |s| {
            s.c = 0.5;
            s.n = 50;
        }),
        spec("ex4_1", Prox, &[0.5, -0.6], |s| s.n = 50),
        spec("ex4_2", Extragradient, &[1.2, 0.3], |s| s.t = 0.2),
        spec("ex4_2", Extragradient, &[1.5, 0.1], |s| s.t = 0.05),
        spec("ex4_2", Subgrad, &[0.5, 0.5], |s| s.step = constant(0.05)),
        spec("ex4_3", Subgrad, &[0.5, 0.0], |s| s.step = constant(0.1)),
        spec("ex4_3", Subgrad, &[0.5, 0.8], |s| s.step = constant(0.05)),
        spec("ex4_4", Subgrad, &[0.6, 0.3], |s| s.step = constant(0.05)),
        spec("ex4_4", Subgrad, &[0.9, 0.1], |s| s.step = dim(0.5)),
        spec("ex4_5", Subgrad, &[FRAC_PI_3, 1.0], |s| s.step = polyak),
        spec("ex4_5", Subgrad, &[0.5, -0.5], |s| s.step = dim(1.0)),
        spec("ex4_5", Prox, &[FRAC_PI_3, 1.0], |s| s.n = 50),
        spec("ex4_5", Prox, &[FRAC_PI_4, -0.5], |s| s.n = 50),
        spec("mp_plus", Subgrad, &[1.0, 1.0], |s| s.step = polyak),
        spec("mp_plus", Subgrad, &[0.7, -0.4], |s| s.step = dim(1.0)),
        spec("mp_plus", Prox, &[1.0, 1.0], |s| s.n = 20),
        spec("s4_p3", Subgrad, &[0.5, 0.5], |s| s.step = dim(0.5)),
        spec("s4_p4", Subgrad, &[1.0, 1.0], |s| s.step = polyak),
        spec("s4_p4", Prox, &[1.0, 0.5], |s| s.n = 50),
        spec("s4_p5", Extragradient, &[0.5, 0.5], |s| s.t = 0.1),
        spec("s4_p5", Extragradient, &[0.9, -0.95], |s| s.t = 0.1),
    ]
}
