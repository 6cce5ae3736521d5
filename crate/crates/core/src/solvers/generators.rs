use super::record::{RunRecord, StepRule};
use crate::geometry::{polytope_cone_distance, Point};
use crate::problems::{EquilibriumProblem, Kind};
use crate::{Error, Result};

const INNER_TOL: f64 = 1e-8;

fn check_start(prob: &EquilibriumProblem, x0: &Point, n: usize) -> Result<()> {
    prob.require_feasible(x0)?;
    if n == 0 {
        return Err(Error::InvalidParameter("iteration count must be at least 1".into()));
    }
    Ok(())
}

/// `x^{k+1} = P_S(x^k + t_k d^k)` with `d^k = P_{T_S(x^k)}(−u^k)` and `u^k` the
/// first vertex of `∂_y φ(x^k, x^k)`.
///
/// Projecting the direction onto the tangent cone keeps boundary iterates from
/// wasting their step on components that the projection onto `S` would discard;
/// the Polyak rule is normalised by `‖d^k‖²` accordingly.
pub fn diag_subgradient_run(prob: &EquilibriumProblem, x0: &Point, step: StepRule, n: usize) -> Result<RunRecord> {
    check_start(prob, x0, n)?;
    step.validate()?;
    if let StepRule::Polyak { .. } = step {
        prob.require_kind(Kind::Mp)?;
    }
    let mut x = x0.clone();
    let mut iterates = vec![x.clone()];
    for k in 1..=n {
        let u = prob.diag_subdiff(&x).vertices()[0].clone();
        let d = prob.tangent_cone(&x)?.project(&-u);
        let dn2 = d.norm_squared();
        let t = match step {
            StepRule::Constant { t } => t,
            StepRule::Diminishing { c } => c / k as f64,
            StepRule::Polyak { f_star } => {
                let f = prob.objective().expect("kind checked");
                let gap = f.value(x.as_slice()) - f_star;
                if dn2 > 0.0 && gap > 0.0 {
                    gap / dn2
                } else {
                    0.0
                }
            }
        };
        x = prob.feasible().project(&(&x + d * t));
        iterates.push(x.clone());
    }
    RunRecord::assemble(prob, "subgrad", Some(&step), iterates)
}

/// Extragradient: `y = P_S(x − tF(x))`, `x⁺ = P_S(x − tF(y))`.
pub fn extragradient_run(prob: &EquilibriumProblem, x0: &Point, t: f64, n: usize) -> Result<RunRecord> {
    prob.require_kind(Kind::Vip)?;
    check_start(prob, x0, n)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("step t = {t} must be positive")));
    }
    let s = prob.feasible();
    let mut x = x0.clone();
    let mut iterates = vec![x.clone()];
    for _ in 0..n {
        let fx = prob.field(&x).expect("kind checked");
        let y = s.project(&(&x - fx * t));
        let fy = prob.field(&y).expect("kind checked");
        x = s.project(&(&x - fy * t));
        iterates.push(x.clone());
    }
    let mut rec = RunRecord::assemble(prob, "extragradient", None, iterates)?;
    rec.notes.push(format!("t = {t}"));
    Ok(rec)
}

/// Proximal point: `x^{k+1} ≈ argmin_{y ∈ S} f(y) + ‖y − x^k‖² / (2c)`.
///
/// The inner loop is a projected steepest-descent method on the regularised
/// objective: it follows the selection that minimises the projected residual,
/// with Armijo backtracking from step `c`, and stops when that residual is at
/// most `1e-8`.
pub fn proximal_point_run(prob: &EquilibriumProblem, x0: &Point, c: f64, n: usize, inner_n: usize) -> Result<RunRecord> {
    prob.require_kind(Kind::Mp)?;
    check_start(prob, x0, n)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("prox parameter c = {c} must be positive")));
    }
    let s = prob.feasible();
    let f = prob.objective().expect("kind checked");
    let mut x = x0.clone();
    let mut iterates = vec![x.clone()];
    let mut worst_inner: f64 = 0.0;
    for _ in 0..n {
        let reg = |y: &Point| f.value(y.as_slice()) + (y - &x).norm_squared() / (2.0 * c);
        let mut y = x.clone();
        let mut residual = f64::INFINITY;
        let mut tau = c;
        for _ in 0..inner_n.max(1) {
            let shift = (&y - &x) / c;
            let sub = prob.diag_subdiff(&y).translate(&shift);
            let normal = prob.normal_cone(&y)?;
            let m = polytope_cone_distance(&sub.negate(), &normal);
            residual = m.distance;
            if residual <= INNER_TOL {
                break;
            }
            let d = m.p - m.k;
            let base = reg(&y);
            // Armijo backtracking; the step grows back by one doubling after a success.
            loop {
                let cand = s.project(&(&y + &d * tau));
                if reg(&cand) <= base - 1e-4 * tau * d.norm_squared() {
                    y = cand;
                    tau = (2.0 * tau).min(c);
                    break;
                }
                tau *= 0.5;
                if tau < 1e-14 {
                    break;
                }
            }
            if tau < 1e-14 {
                break;
            }
        }
        worst_inner = worst_inner.max(residual);
        x = y;
        iterates.push(x.clone());
    }
    let mut rec = RunRecord::assemble(prob, "prox", None, iterates)?;
    rec.notes.push(format!("c = {c}, inner iterations ≤ {inner_n}"));
    if worst_inner > INNER_TOL {
        rec.notes.push(format!("inner residual reached only {worst_inner:.3e}"));
    }
    Ok(rec)
}
