use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::geometry::{Point, VPolytope};
use crate::problems::EquilibriumProblem;
use crate::{tol, Error, Result};

type Rule = Arc<dyn Fn(usize, &Point) -> VPolytope + Send + Sync>;

/// A scalar parameter together with its admissible interval.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Param {
    pub fn new(name: &str, value: f64, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Self { name: name.into(), value, lo, hi, lo_closed, hi_closed }
    }

    /// Open interval `(lo, hi)`.
    pub fn open(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self::new(name, value, lo, hi, false, false)
    }

    pub fn in_range(&self) -> bool {
        let above = if self.lo_closed { self.value >= self.lo } else { self.value > self.lo };
        let below = if self.hi_closed { self.value <= self.hi } else { self.value < self.hi };
        above && below
    }
}

#[derive(Clone)]
enum Kind {
    Diagonal,
    Rule(Rule),
}

/// A set-valued map `H` on the solution set, evaluated piece by piece.
///
/// The rule receives the index of the solution-set piece the point was matched
/// to (lowest index on ties) and the point itself.
#[derive(Clone)]
pub struct AugmentedMapping {
    label: String,
    params: Vec<Param>,
    kind: Kind,
}

impl fmt::Debug for AugmentedMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AugmentedMapping").field("label", &self.label).field("params", &self.params).finish()
    }
}

impl AugmentedMapping {
    pub fn new(label: &str, params: Vec<Param>, rule: impl Fn(usize, &Point) -> VPolytope + Send + Sync + 'static) -> Self {
        Self { label: label.into(), params, kind: Kind::Rule(Arc::new(rule)) }
    }

    /// `H(z) = ∂_y φ(z, z)`.
    pub fn diagonal() -> Self {
        Self { label: "diagonal subdifferential".into(), params: Vec::new(), kind: Kind::Diagonal }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }

    pub fn params_in_range(&self) -> bool {
        self.params.iter().all(Param::in_range)
    }

    /// `H(z)` for `z` in the solution set.
    pub fn eval(&self, prob: &EquilibriumProblem, z: &Point) -> Result<VPolytope> {
        let set = prob.solution_set().ok_or(Error::MissingSolutionSet)?;
        prob.check_point(z)?;
        let v = set.violation(z);
        if v > tol::MEMBERSHIP {
            return Err(Error::NotInSet { violation: v });
        }
        Ok(match &self.kind {
            Kind::Diagonal => prob.diag_subdiff(z),
            Kind::Rule(rule) => rule(set.project(z).1, z),
        })
    }
}
