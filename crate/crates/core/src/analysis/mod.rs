//! Piecewise-smooth scalar functions: values, branch gradients and
//! active-gradient-hull subdifferentials.

mod expr;
mod piecewise;

pub use expr::Expr;
pub use piecewise::PiecewiseFn;

use serde::Serialize;

use crate::geometry::{Point, VPolytope};

/// Subdifferentials are polytopes.
pub type SubdiffSet = VPolytope;

/// Subdifferential of a piecewise function at `x`.
pub fn subdiff(f: &PiecewiseFn, x: &Point) -> SubdiffSet {
    f.subdiff(x)
}

/// Subdifferential with respect to the coordinates in `range`: the projection of
/// the full active-gradient hull onto those coordinates.
pub fn subdiff_partial(f: &PiecewiseFn, x: &Point, range: std::ops::Range<usize>) -> SubdiffSet {
    let full = f.subdiff(x);
    let verts = full
        .vertices()
        .iter()
        .map(|v| Point::from_iterator(range.len(), v.iter().skip(range.start).take(range.len()).cloned()))
        .collect();
    VPolytope::new(verts).expect("nonempty").pruned()
}

/// Outcome of a finite-difference gradient check.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GradientReport {
    Checked { max_rel_error: f64, pass: bool },
    Skipped { reason: String },
}

const FD_STEP: f64 = 1e-6;
const KINK_RADIUS: f64 = 1e-4;

/// Compares the branch gradient with central differences (`h = 1e-6`). Points
/// within `1e-4` of a branch boundary are skipped.
pub fn gradient_check(f: &PiecewiseFn, x: &[f64]) -> GradientReport {
    let sig = f.signature(x, crate::tol::ACTIVE);
    if sig.iter().any(|s| s.len() > 1) {
        return GradientReport::Skipped { reason: "point lies on a kink".into() };
    }
    for i in 0..x.len() {
        for s in [-KINK_RADIUS, KINK_RADIUS] {
            let mut y = x.to_vec();
            y[i] += s;
            if f.signature(&y, crate::tol::ACTIVE) != sig {
                return GradientReport::Skipped { reason: format!("branch changes within {KINK_RADIUS} of the point") };
            }
        }
    }
    let Some(g) = f.branch_gradient(x) else {
        return GradientReport::Skipped { reason: "no unique branch gradient".into() };
    };
    let mut worst = 0.0_f64;
    for i in 0..x.len() {
        let mut up = x.to_vec();
        let mut down = x.to_vec();
        up[i] += FD_STEP;
        down[i] -= FD_STEP;
        let fd = (f.value(&up) - f.value(&down)) / (2.0 * FD_STEP);
        worst = worst.max((g[i] - fd).abs() / g[i].abs().max(1.0));
    }
    GradientReport::Checked { max_rel_error: worst, pass: worst <= 1e-6 }
}

/// A value/subdifferential record for JSON export.
#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub x: Vec<f64>,
    pub value: f64,
    pub subdiff: Vec<Vec<f64>>,
}

pub fn evaluate(f: &PiecewiseFn, x: &Point) -> Evaluation {
    Evaluation {
        x: x.iter().cloned().collect(),
        value: f.value(x.as_slice()),
        subdiff: f.subdiff(x).vertices().iter().map(|v| v.iter().cloned().collect()).collect(),
    }
}
