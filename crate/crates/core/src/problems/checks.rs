use serde::Serialize;

use super::sampling::sample_points;
use super::EquilibriumProblem;
use crate::geometry::{polytope_cone_distance, wire::opt_point_serde, Point, VPolytope};
use crate::{tol, Error, Result};

/// `min_y φ(x, y) ≥ −1e-8` over `ys`, or membership in the declared solution set.
pub fn check_solution(prob: &EquilibriumProblem, x: &Point, ys: &[Point]) -> Result<bool> {
    prob.require_feasible(x)?;
    if prob.solution_set().is_some() {
        return prob.in_solution_set(x);
    }
    Ok(min_phi(prob, x, ys) >= -tol::STATIONARY)
}

/// Like [`check_solution`], but always evaluates `φ(x, ·)` on the samples.
pub fn check_solution_sampled(prob: &EquilibriumProblem, x: &Point, ys: &[Point]) -> Result<bool> {
    prob.require_feasible(x)?;
    Ok(min_phi(prob, x, ys) >= -tol::STATIONARY)
}

fn min_phi(prob: &EquilibriumProblem, x: &Point, ys: &[Point]) -> f64 {
    if ys.is_empty() {
        let own = sample_points(prob, 1000);
        return own.iter().map(|y| prob.phi(x, y)).fold(f64::INFINITY, f64::min);
    }
    ys.iter().map(|y| prob.phi(x, y)).fold(f64::INFINITY, f64::min)
}

/// Whether some `u ∈ ∂_y φ(x, x)` lies in `−N_S(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct StationaryVerdict {
    pub is_stationary: bool,
    #[serde(with = "opt_point_serde")]
    pub witness: Option<Point>,
    pub gap: f64,
}


/// Gap = distance between `∂_y φ(x, x)` and `−N_S(x)`.
pub fn check_stationary(prob: &EquilibriumProblem, x: &Point) -> Result<StationaryVerdict> {
    prob.require_feasible(x)?;
    let sub = prob.diag_subdiff(x);
    let neg_normal = prob.normal_cone(x)?.negate();
    let d = polytope_cone_distance(&sub, &neg_normal);
    let is_stationary = d.distance <= tol::STATIONARY;
    Ok(StationaryVerdict { is_stationary, witness: is_stationary.then_some(d.p), gap: d.distance })
}

/// `∂_y φ(x, x) ∩ (−N_S(x))`, or `None` when empty.
pub fn stationary_intersection(prob: &EquilibriumProblem, x: &Point) -> Result<Option<VPolytope>> {
    prob.require_feasible(x)?;
    let sub = prob.diag_subdiff(x);
    let neg_normal = prob.normal_cone(x)?.negate();
    if polytope_cone_distance(&sub, &neg_normal).distance > tol::STATIONARY {
        return Ok(None);
    }
    Ok(sub.intersect_cone(&neg_normal))
}

/// Compares `∂_y φ(x, x) ∩ (−N_S(x))` with the same set at a known solution `x̄`
/// (Hausdorff distance `≤ 1e-8`; two empty sets are equal).
pub fn characterization_check(prob: &EquilibriumProblem, x_bar: &Point, x: &Point) -> Result<bool> {
    if !prob.theorem31() {
        return Err(Error::Hypothesis(
            "the characterization needs φ(x,·) convex and φ(x̄,·) constant over the solution set".into(),
        ));
    }
    if let Some(set) = prob.solution_set() {
        let v = set.violation(x_bar);
        if v > tol::MEMBERSHIP {
            return Err(Error::NotInSet { violation: v });
        }
    }
    let a = stationary_intersection(prob, x_bar)?;
    let b = stationary_intersection(prob, x)?;
    Ok(match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => a.hausdorff(&b) <= tol::MEMBERSHIP,
        _ => false,
    })
}
