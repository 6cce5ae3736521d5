//! Feasible-sequence generators and finite-identification diagnostics.

mod generators;
mod record;

pub use generators::{diag_subgradient_run, extragradient_run, proximal_point_run};
pub use record::{RunRecord, StepRule};

use serde::Serialize;

use crate::geometry::{polytope_cone_distance, Point};
use crate::problems::EquilibriumProblem;
use crate::sharpness::{check_augmented_weak_sharp, AugmentedConfig, AugmentedMapping};
use crate::{tol, Error, Result};

/// Projected residual `min_{u ∈ ∂_y φ(x,x)} ‖P_{T_S(x)}(−u)‖`, evaluated as
/// `dist(−∂_y φ(x,x), N_S(x))`.
pub fn rho(prob: &EquilibriumProblem, x: &Point) -> Result<f64> {
    Ok(projected_step(prob, x)?.1)
}

/// The projected direction `P_{T_S(x)}(−u*)` for the minimizing selection `u*`,
/// together with its norm.
pub(crate) fn projected_step(prob: &EquilibriumProblem, x: &Point) -> Result<(Point, f64)> {
    prob.require_feasible(x)?;
    let n = prob.normal_cone(x)?;
    let d = polytope_cone_distance(&prob.diag_subdiff(x).negate(), &n);
    Ok((&d.p - &d.k, d.distance))
}

/// Smallest `k₀` with `dist[k] ≤ eps` for every `k ≥ k₀`.
pub fn first_identification(dist: &[f64], eps: f64) -> Option<usize> {
    let mut k0 = None;
    for k in (0..dist.len()).rev() {
        if dist[k] <= eps {
            k0 = Some(k);
        } else {
            break;
        }
    }
    k0
}

/// Identification index of a record against the problem's solution set.
pub fn detect_identification(record: &RunRecord, prob: &EquilibriumProblem, eps: f64) -> Result<Option<usize>> {
    if prob.solution_set().is_none() {
        return Err(Error::MissingSolutionSet);
    }
    let dist = record.iterates.iter().map(|x| prob.dist_solution(x)).collect::<Result<Vec<_>>>()?;
    Ok(first_identification(&dist, eps))
}

/// Length of the residual tail: `window` iterates, but never more than the second
/// half of a short run, so that the start does not count as the tail.
pub fn tail_len(len: usize, window: usize) -> usize {
    window.min(len.div_ceil(2)).max(1).min(len)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Consistency {
    Agree,
    Violation { details: String, indices: Vec<usize> },
}

/// Empirical check of the equivalence between finite identification and a
/// vanishing projected residual.
#[derive(Clone, Debug, Serialize)]
pub struct TerminationVerdict {
    pub rho_tail_max: f64,
    pub residual_vanishes: bool,
    pub identified: bool,
    pub k0: Option<usize>,
    pub consistency: Consistency,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TheoremConfig {
    pub eps_id: f64,
    pub tol_rho: f64,
    pub window: usize,
    pub augmented: AugmentedConfig,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        Self { eps_id: tol::IDENTIFICATION, tol_rho: tol::RHO, window: tol::TAIL_WINDOW, augmented: AugmentedConfig::default() }
    }
}

/// Compares "identified at `eps_id`" with "ρ stays below `tol_rho` over the last
/// `window` iterates".
///
/// Refuses with [`Error::Hypothesis`] when augmented weak sharpness along the
/// record is not established, or when the run identifies the solution set on a
/// problem without the stationarity-inclusion flag.
pub fn verify_theorem_5_1(
    prob: &EquilibriumProblem,
    h: &AugmentedMapping,
    record: &RunRecord,
    cfg: &TheoremConfig,
) -> Result<TerminationVerdict> {
    let gate = check_augmented_weak_sharp(prob, h, &record.iterates, &cfg.augmented)?;
    if !gate.passed {
        return Err(Error::Hypothesis(format!(
            "augmented weak sharpness not established along the run (condition a: {}, condition b: {})",
            gate.condition_a.verdict, gate.condition_b
        )));
    }
    let dist = record.iterates.iter().map(|x| prob.dist_solution(x)).collect::<Result<Vec<_>>>()?;
    let k0 = first_identification(&dist, cfg.eps_id);
    let identified = k0.is_some();
    if identified && !prob.local_lipschitz() {
        return Err(Error::Hypothesis("the run identifies the solution set but the stationarity inclusion is not declared".into()));
    }
    let n = record.rho.len();
    let w = tail_len(n, cfg.window);
    let start = n - w;
    let tail = &record.rho[start..];
    let rho_tail_max = tail.iter().cloned().fold(0.0_f64, f64::max);
    let residual_vanishes = rho_tail_max <= cfg.tol_rho;
    let consistency = if residual_vanishes == identified {
        Consistency::Agree
    } else if identified {
        Consistency::Violation {
            details: format!("identified at k0 = {:?} but the residual tail reaches {rho_tail_max:.3e}", k0),
            indices: (start..n).filter(|&k| record.rho[k] > cfg.tol_rho).collect(),
        }
    } else {
        Consistency::Violation {
            details: "residual vanishes on the tail but the run never settles in the solution set".into(),
            indices: (start..n).filter(|&k| dist[k] > cfg.eps_id).collect(),
        }
    };
    let mut notes = gate.notes;
    notes.push(format!(
        "finite termination read as dist ≤ {:e} sustained through the horizon of {} iterates",
        cfg.eps_id,
        record.iterates.len()
    ));
    notes.push(format!("residual condition read as max ρ over the last {w} iterates ≤ {:e}", cfg.tol_rho));
    Ok(TerminationVerdict { rho_tail_max, residual_vanishes, identified, k0, consistency, notes })
}
