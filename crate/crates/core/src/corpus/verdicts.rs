use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::CorpusEntry;
use crate::geometry::{unit_directions, Point};
use crate::problems::{
    characterization_check, check_solution_sampled, convexity_sample, halton, monotone_sample, sample_points,
    subdiff_monotone_sample,
};
use crate::sharpness::{
    check_augmented_weak_sharp, check_eq_3_10, check_strong_nondegenerate, check_weak_sharp, solution_samples,
    AugmentedConfig, AugmentedMapping,
};
use crate::{tol, Error, Result};

/// The checkers that the expected-verdict table refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Check {
    #[serde(rename = "weak_sharp")]
    WeakSharp,
    #[serde(rename = "augmented")]
    Augmented,
    #[serde(rename = "strong_nondegenerate")]
    StrongNondegenerate,
    #[serde(rename = "eq_3_10")]
    Eq310,
    #[serde(rename = "characterization")]
    Characterization,
    #[serde(rename = "solution_set")]
    SolutionSet,
    #[serde(rename = "diag_monotone")]
    DiagMonotone,
    #[serde(rename = "bifunction_monotone")]
    BifunctionMonotone,
    #[serde(rename = "convex_in_y")]
    ConvexInY,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::WeakSharp,
        Check::Augmented,
        Check::StrongNondegenerate,
        Check::Eq310,
        Check::Characterization,
        Check::SolutionSet,
        Check::DiagMonotone,
        Check::BifunctionMonotone,
        Check::ConvexInY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::WeakSharp => "weak_sharp",
            Check::Augmented => "augmented",
            Check::StrongNondegenerate => "strong_nondegenerate",
            Check::Eq310 => "eq_3_10",
            Check::Characterization => "characterization",
            Check::SolutionSet => "solution_set",
            Check::DiagMonotone => "diag_monotone",
            Check::BifunctionMonotone => "bifunction_monotone",
            Check::ConvexInY => "convex_in_y",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check `{s}`")))
    }
}

/// Where the sequence for the augmented check comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSource {
    Builtin { n: usize },
    Explicit(#[serde(with = "crate::geometry::wire::points_serde")] Vec<Point>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckParams {
    /// Level `α₀`; the entry's own level for weak sharpness and `0.1` for the
    /// augmented check when absent.
    pub alpha: Option<f64>,
    /// Overrides the mapping family's parameter.
    pub lambda: Option<f64>,
    pub delta: f64,
    pub seed: u64,
    pub sequence: SequenceSource,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self { alpha: None, lambda: None, delta: tol::INTERIOR_MARGIN, seed: 0, sequence: SequenceSource::Builtin { n: 500 } }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub problem: String,
    pub check: Check,
    pub verdict: bool,
    pub expected: Option<bool>,
    /// False when the input falls outside the instance's stated scope, in which
    /// case the verdict is not compared with the table.
    pub in_scope: bool,
    pub report: Value,
}

impl CheckOutcome {
    /// `None` when the table has no entry or the input is out of scope.
    pub fn matches(&self) -> Option<bool> {
        if !self.in_scope {
            return None;
        }
        self.expected.map(|e| e == self.verdict)
    }
}

const OFF_SET_STEPS: [f64; 10] = [0.05, 0.04, 0.03, 0.06, 0.07, 0.08, 0.09, 0.025, 0.035, 0.045];
const OFF_SET_COUNT: usize = 10;

pub fn run_check(entry: &CorpusEntry, check: Check, params: &CheckParams) -> Result<CheckOutcome> {
    let prob = &entry.problem;
    let mut in_scope = true;
    let (verdict, report) = match check {
        Check::WeakSharp => {
            let z = solution_samples(prob, params.seed)?;
            let r = check_weak_sharp(prob, &z, &unit_directions(prob.dim()), params.alpha.unwrap_or(entry.alpha0))?;
            (r.verdict, serde_json::to_value(&r)?)
        }
        Check::Augmented => {
            let h = match &entry.mapping {
                Some(m) => m.build(params.lambda),
                None => AugmentedMapping::diagonal(),
            };
            let seq = match &params.sequence {
                SequenceSource::Builtin { n } => entry.builtin_sequence(*n).ok_or_else(|| {
                    Error::InvalidParameter(format!("`{}` has no built-in sequence", entry.id))
                })?,
                SequenceSource::Explicit(v) => v.clone(),
            };
            for x in &seq {
                prob.require_feasible(x)?;
            }
            in_scope = entry.in_sequence_domain(&seq);
            let cfg = AugmentedConfig { alpha0: params.alpha.unwrap_or(0.1), seed: params.seed, ..Default::default() };
            let r = check_augmented_weak_sharp(prob, &h, &seq, &cfg)?;
            let mut v = serde_json::to_value(&r)?;
            v["in_sequence_domain"] = json!(in_scope);
            (r.passed, v)
        }
        Check::StrongNondegenerate => {
            let mut rows = Vec::new();
            let mut all = true;
            for z in solution_samples(prob, params.seed)? {
                let (ok, note) = match check_strong_nondegenerate(prob, &z, params.delta) {
                    Ok(b) => (b, None),
                    Err(Error::NotSmooth(k)) => (false, Some(format!("diagonal subdifferential has {k} vertices"))),
                    Err(e) => return Err(e),
                };
                all &= ok;
                rows.push(json!({ "z": z.as_slice(), "holds": ok, "note": note }));
            }
            (all, json!({ "delta": params.delta, "points": rows }))
        }
        Check::Eq310 => {
            let z = solution_samples(prob, params.seed)?;
            let r = check_eq_3_10(prob, &z, params.delta)?;
            (r.holds, serde_json::to_value(&r)?)
        }
        Check::Characterization => characterization_grid(entry, params.seed)?,
        Check::SolutionSet => solution_set_report(entry, params.seed)?,
        Check::DiagMonotone => {
            let r = subdiff_monotone_sample(prob, 1000, params.seed);
            (r.monotone(), serde_json::to_value(&r)?)
        }
        Check::BifunctionMonotone => {
            let r = monotone_sample(prob, 1000, params.seed);
            (r.monotone(), serde_json::to_value(&r)?)
        }
        Check::ConvexInY => {
            let r = convexity_sample(prob, 1000, params.seed);
            (r.convex(), serde_json::to_value(&r)?)
        }
    };
    Ok(CheckOutcome {
        problem: entry.id.to_string(),
        check,
        verdict,
        expected: entry.expected.get(check.name()).copied(),
        in_scope,
        report,
    })
}

/// Points of a regular grid over the sampling box, projected onto `S`.
fn grid(entry: &CorpusEntry, per_axis: usize) -> Vec<Point> {
    let prob = &entry.problem;
    let (lo, hi) = prob.sample_box();
    (0..prob.dim())
        .map(|d| (0..per_axis).map(move |j| lo[d] + (hi[d] - lo[d]) * j as f64 / (per_axis - 1) as f64))
        .multi_cartesian_product()
        .map(|c| prob.feasible().project(&Point::from_vec(c)))
        .collect()
}

fn characterization_grid(entry: &CorpusEntry, seed: u64) -> Result<(bool, Value)> {
    let prob = &entry.problem;
    if prob.dim() > 2 {
        return Err(Error::InvalidParameter("grid classification supports dimensions 1 and 2".into()));
    }
    let x_bar = solution_samples(prob, seed)?.swap_remove(0);
    let pts = grid(entry, 50);
    let mut mismatches = Vec::new();
    for g in &pts {
        let predicted = characterization_check(prob, &x_bar, g)?;
        let actual = prob.in_solution_set(g)?;
        if predicted != actual {
            mismatches.push(json!({ "x": g.as_slice(), "predicted": predicted, "actual": actual }));
        }
    }
    let ok = mismatches.is_empty();
    Ok((ok, json!({ "reference": x_bar.as_slice(), "grid_points": pts.len(), "mismatches": mismatches })))
}

/// Feasible points near the sampled solution points but at least `0.02` away
/// from the solution set.
pub(crate) fn off_set_points(entry: &CorpusEntry, z: &[Point]) -> Result<Vec<Point>> {
    let prob = &entry.problem;
    let dirs = unit_directions(prob.dim());
    let mut out: Vec<Point> = Vec::new();
    'outer: for s in OFF_SET_STEPS {
        for p in z {
            for d in &dirs {
                let cand = prob.feasible().project(&(p + d * s));
                if prob.dist_solution(&cand)? >= 0.02 && !out.iter().any(|q| (q - &cand).amax() <= 1e-12) {
                    out.push(cand);
                    if out.len() == OFF_SET_COUNT {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn solution_set_report(entry: &CorpusEntry, seed: u64) -> Result<(bool, Value)> {
    let prob = &entry.problem;
    let ys = sample_points(prob, 1000);
    let z = solution_samples(prob, seed)?;
    let mut failing_on = Vec::new();
    for p in &z {
        if !check_solution_sampled(prob, p, &ys)? {
            failing_on.push(p.as_slice().to_vec());
        }
    }
    let off = off_set_points(entry, &z)?;
    let mut passing_off = Vec::new();
    for p in &off {
        if check_solution_sampled(prob, p, &ys)? {
            passing_off.push(p.as_slice().to_vec());
        }
    }
    let candidates: Vec<Point> = if prob.dim() <= 2 {
        grid(entry, 9)
    } else {
        let (lo, hi) = prob.sample_box();
        (0..200)
            .map(|i| {
                let h = halton(i, prob.dim());
                let p = Point::from_iterator(prob.dim(), (0..prob.dim()).map(|d| lo[d] + h[d] * (hi[d] - lo[d])));
                prob.feasible().project(&p)
            })
            .collect()
    };
    let mut unlisted = Vec::new();
    for p in &candidates {
        if prob.dist_solution(p)? > 1e-3 && check_solution_sampled(prob, p, &ys)? {
            unlisted.push(p.as_slice().to_vec());
        }
    }
    let ok = failing_on.is_empty() && off.len() == OFF_SET_COUNT && passing_off.is_empty();
    Ok((
        ok,
        json!({
            "solution_points": z.len(),
            "failing_solution_points": failing_on,
            "off_set_points": off.len(),
            "passing_off_set_points": passing_off,
            "unlisted_solutions": unlisted,
        }),
    ))
}
