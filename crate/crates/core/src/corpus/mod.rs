//! The worked instances, keyed by stable ids, with their expected verdicts.

mod battery;
mod entries;
mod verdicts;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

pub use battery::{battery_specs, execute, RunOutcome, RunSpec, RunSummary, Solver, TheoremOutcome};
pub use verdicts::{run_check, Check, CheckOutcome, CheckParams, SequenceSource};

use crate::geometry::{ClosedSet, Point};
use crate::problems::EquilibriumProblem;
use crate::sharpness::AugmentedMapping;
use crate::{Error, Result};

/// First `n` terms of a built-in feasible sequence.
pub type SequenceFn = Arc<dyn Fn(usize) -> Vec<Point> + Send + Sync>;

/// An augmented mapping family indexed by one scalar parameter.
#[derive(Clone)]
pub struct MappingFamily {
    pub param: &'static str,
    pub default: f64,
    build: fn(f64) -> AugmentedMapping,
}

impl MappingFamily {
    pub fn build(&self, value: Option<f64>) -> AugmentedMapping {
        (self.build)(value.unwrap_or(self.default))
    }
}

/// A corpus instance.
#[derive(Clone)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub provenance: &'static str,
    pub problem: EquilibriumProblem,
    pub mapping: Option<MappingFamily>,
    pub sequence_domain: Option<ClosedSet>,
    pub sequence: Option<SequenceFn>,
    /// Level used by the weak-sharpness check when none is given.
    pub alpha0: f64,
    pub expected: BTreeMap<&'static str, bool>,
    pub notes: Vec<&'static str>,
}

impl fmt::Debug for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorpusEntry")
            .field("id", &self.id)
            .field("kind", &self.problem.kind())
            .field("expected", &self.expected)
            .finish()
    }
}

impl CorpusEntry {
    pub fn kind_label(&self) -> &'static str {
        self.problem.kind().label()
    }

    pub fn builtin_sequence(&self, n: usize) -> Option<Vec<Point>> {
        self.sequence.as_ref().map(|s| s(n))
    }

    /// Whether every point of `seq` satisfies the sequence restriction.
    pub fn in_sequence_domain(&self, seq: &[Point]) -> bool {
        match &self.sequence_domain {
            None => true,
            Some(d) => seq.iter().all(|x| d.contains(x, crate::tol::MEMBERSHIP)),
        }
    }
}

/// One row of [`list`].
#[derive(Clone, Debug, Serialize)]
pub struct ListRow {
    pub id: &'static str,
    pub provenance: &'static str,
    pub kind: &'static str,
}

fn registry() -> &'static [CorpusEntry] {
    static REG: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    REG.get_or_init(entries::build_all)
}

pub fn get(id: &str) -> Result<&'static CorpusEntry> {
    registry().iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownProblem(id.to_string()))
}

pub fn list() -> Vec<ListRow> {
    registry().iter().map(|e| ListRow { id: e.id, provenance: e.provenance, kind: e.kind_label() }).collect()
}

pub fn entries() -> &'static [CorpusEntry] {
    registry()
}

#[derive(Serialize)]
struct ExportRow<'a> {
    id: &'a str,
    provenance: &'a str,
    kind: &'a str,
    dim: usize,
    mapping_param: Option<(&'a str, f64)>,
    expected: &'a BTreeMap<&'static str, bool>,
    notes: &'a [&'static str],
}

/// The registry as written to `corpus.json`.
pub fn export_json() -> serde_json::Value {
    let rows: Vec<ExportRow> = registry()
        .iter()
        .map(|e| ExportRow {
            id: e.id,
            provenance: e.provenance,
            kind: e.kind_label(),
            dim: e.problem.dim(),
            mapping_param: e.mapping.as_ref().map(|m| (m.param, m.default)),
            expected: &e.expected,
            notes: &e.notes,
        })
        .collect();
    serde_json::to_value(rows).expect("corpus rows serialize")
}
