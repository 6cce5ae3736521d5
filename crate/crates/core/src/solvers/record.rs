use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{first_identification, rho};
use crate::geometry::{wire::points_serde, Point};
use crate::problems::EquilibriumProblem;
use crate::sharpness::{AugmentedMapping, PsiTrace};
use crate::{tol, Error, Result};

/// Step-size rule for the diagonal subgradient method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    Constant { t: f64 },
    /// `t_k = c / k`.
    Diminishing { c: f64 },
    /// `t_k = (f(x^k) − f*) / ‖d^k‖²`; MP only.
    Polyak { f_star: f64 },
}

impl StepRule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepRule::Constant { t } => t > 0.0 && t.is_finite(),
            StepRule::Diminishing { c } => c > 0.0 && c.is_finite(),
            StepRule::Polyak { f_star } => f_star.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("step rule {self}")))
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepRule::Constant { t } => write!(f, "const:{t}"),
            StepRule::Diminishing { c } => write!(f, "dim:{c}"),
            StepRule::Polyak { f_star } => write!(f, "polyak:{f_star}"),
        }
    }
}

/// Parses `const:t`, `dim:c` or `polyak:f*`.
impl FromStr for StepRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("step rule `{s}` (expected const:t, dim:c or polyak:f*)"));
        let (name, value) = s.split_once(':').ok_or_else(bad)?;
        let v: f64 = value.trim().parse().map_err(|_| bad())?;
        let rule = match name.trim() {
            "const" | "constant" => StepRule::Constant { t: v },
            "dim" | "diminishing" => StepRule::Diminishing { c: v },
            "polyak" => StepRule::Polyak { f_star: v },
            _ => return Err(bad()),
        };
        rule.validate()?;
        Ok(rule)
    }
}

/// A generated feasible sequence with per-iterate diagnostics.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunRecord {
    pub problem: Option<String>,
    pub solver: String,
    pub step_rule: Option<String>,
    pub seed: u64,
    #[serde(with = "points_serde")]
    pub iterates: Vec<Point>,
    pub rho: Vec<f64>,
    pub dist_solution: Option<Vec<f64>>,
    pub psi_trace: Option<PsiTrace>,
    pub identification_index: Option<usize>,
    pub eps_id: f64,
    pub notes: Vec<String>,
}

impl RunRecord {
    /// Computes ρ, distances, ψ (with `H = ∂_y φ(z, z)`) and the identification
    /// index for a sequence.
    pub fn assemble(prob: &EquilibriumProblem, solver: &str, step: Option<&StepRule>, iterates: Vec<Point>) -> Result<Self> {
        let rho = iterates.iter().map(|x| rho(prob, x)).collect::<Result<Vec<_>>>()?;
        let (dist_solution, psi_trace, identification_index) = if prob.solution_set().is_some() {
            let d = iterates.iter().map(|x| prob.dist_solution(x)).collect::<Result<Vec<_>>>()?;
            let trace = PsiTrace::build(prob, &AugmentedMapping::diagonal(), &iterates, tol::TAIL_WINDOW)?;
            let k0 = first_identification(&d, tol::IDENTIFICATION);
            (Some(d), Some(trace), k0)
        } else {
            (None, None, None)
        };
        Ok(Self {
            problem: None,
            solver: solver.into(),
            step_rule: step.map(|s| s.to_string()),
            seed: 0,
            iterates,
            rho,
            dist_solution,
            psi_trace,
            identification_index,
            eps_id: tol::IDENTIFICATION,
            notes: Vec::new(),
        })
    }

    pub fn with_problem(mut self, id: &str) -> Self {
        self.problem = Some(id.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Recomputes the ψ trace with a different augmented mapping.
    pub fn with_mapping(mut self, prob: &EquilibriumProblem, h: &AugmentedMapping) -> Result<Self> {
        if prob.solution_set().is_some() {
            self.psi_trace = Some(PsiTrace::build(prob, h, &self.iterates, tol::TAIL_WINDOW)?);
        }
        Ok(self)
    }

    /// Recomputes the identification index at another threshold.
    pub fn with_eps_id(mut self, eps: f64) -> Self {
        self.eps_id = eps;
        self.identification_index = self.dist_solution.as_ref().and_then(|d| first_identification(d, eps));
        self
    }

    /// CSV trace with header `k,x0,x1,...,rho,dist,psi_min`; missing values are
    /// left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let dim = self.iterates.first().map_or(0, |x| x.len());
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["k".to_string()];
        header.extend((0..dim).map(|i| format!("x{i}")));
        header.extend(["rho", "dist", "psi_min"].map(String::from));
        w.write_record(&header)?;
        for (k, x) in self.iterates.iter().enumerate() {
            let mut row = vec![k.to_string()];
            row.extend(x.iter().map(|c| c.to_string()));
            row.push(self.rho[k].to_string());
            row.push(self.dist_solution.as_ref().map_or(String::new(), |d| d[k].to_string()));
            let psi = self.psi_trace.as_ref().and_then(|t| t.entries[k].psi_min);
            row.push(psi.map_or(String::new(), |p| p.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
