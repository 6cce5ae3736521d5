//! Python bindings: corpus instances, sharpness checks, solver runs and cone
//! projections. Structured results come back as plain dicts and lists.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;
use sharpeq::corpus::{self, Check, CheckParams, CorpusEntry, RunSpec, SequenceSource, Solver};
use sharpeq::geometry::PolyCone;
use sharpeq::problems::check_stationary;
use sharpeq::solvers::StepRule;
use sharpeq::{Error, Point};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::UnknownProblem(id) => PyKeyError::new_err(format!("unknown problem `{id}`")),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn pt(x: Vec<f64>) -> Point {
    Point::from_vec(x)
}

fn coords(p: &Point) -> Vec<f64> {
    p.as_slice().to_vec()
}

/// A corpus instance.
#[pyclass(frozen, name = "Problem", module = "pysharpeq")]
struct PyProblem {
    entry: &'static CorpusEntry,
}

impl PyProblem {
    fn checked(&self, x: &[f64]) -> PyResult<Point> {
        let p = Point::from_column_slice(x);
        self.entry.problem.check_point(&p).map_err(py_err)?;
        Ok(p)
    }
}

#[pymethods]
impl PyProblem {
    #[getter]
    fn id(&self) -> &'static str {
        self.entry.id
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.entry.kind_label()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.entry.problem.dim()
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.entry.provenance
    }

    /// Expected verdicts keyed by check name.
    fn expected<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.entry.expected)
    }

    fn phi(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        let (x, y) = (self.checked(&x)?, self.checked(&y)?);
        Ok(self.entry.problem.phi(&x, &y))
    }

    /// Vertices of the diagonal subdifferential at `x`.
    fn diag_subdiff(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let x = self.checked(&x)?;
        Ok(self.entry.problem.diag_subdiff(&x).vertices().iter().map(coords).collect())
    }

    fn project_solution(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let x = self.checked(&x)?;
        self.entry.problem.project_solution(&x).map(|p| coords(&p)).map_err(py_err)
    }

    fn dist_solution(&self, x: Vec<f64>) -> PyResult<f64> {
        let x = self.checked(&x)?;
        self.entry.problem.dist_solution(&x).map_err(py_err)
    }

    fn in_solution_set(&self, x: Vec<f64>) -> PyResult<bool> {
        let x = self.checked(&x)?;
        self.entry.problem.in_solution_set(&x).map_err(py_err)
    }

    /// Projected residual at a feasible `x`.
    fn rho(&self, x: Vec<f64>) -> PyResult<f64> {
        let x = self.checked(&x)?;
        sharpeq::solvers::rho(&self.entry.problem, &x).map_err(py_err)
    }

    /// `(is_stationary, gap)` at a feasible `x`.
    fn stationary(&self, x: Vec<f64>) -> PyResult<(bool, f64)> {
        let x = self.checked(&x)?;
        let v = check_stationary(&self.entry.problem, &x).map_err(py_err)?;
        Ok((v.is_stationary, v.gap))
    }

    /// Runs one named check and returns its outcome as a dict.
    #[pyo3(signature = (check, alpha=None, lam=None, delta=1e-3, seed=0, sequence=None, n=500))]
    #[allow(clippy::too_many_arguments)]
    fn check<'py>(
        &self,
        py: Python<'py>,
        check: &str,
        alpha: Option<f64>,
        lam: Option<f64>,
        delta: f64,
        seed: u64,
        sequence: Option<Vec<Vec<f64>>>,
        n: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let check: Check = check.parse().map_err(py_err)?;
        let sequence = match sequence {
            Some(points) => SequenceSource::Explicit(points.into_iter().map(pt).collect()),
            None => SequenceSource::Builtin { n },
        };
        let params = CheckParams { alpha, lambda: lam, delta, seed, sequence };
        let out = py.detach(|| corpus::run_check(self.entry, check, &params)).map_err(py_err)?;
        to_py(py, &out)
    }

    fn __repr__(&self) -> String {
        format!("Problem(id={:?}, kind={}, dim={})", self.entry.id, self.entry.kind_label(), self.entry.problem.dim())
    }
}

/// Looks up a corpus instance by id.
#[pyfunction]
fn problem(id: &str) -> PyResult<PyProblem> {
    Ok(PyProblem { entry: corpus::get(id).map_err(py_err)? })
}

/// `[{"id", "provenance", "kind"}, ...]` for every instance.
#[pyfunction]
fn list_problems(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &corpus::list())
}

/// Runs a solver and the termination diagnostics. Returns
/// `{"summary": ..., "iterates": [...], "rho": [...]}`.
#[pyfunction]
#[pyo3(signature = (problem, solver="subgrad", step=None, t=0.1, c=1.0, n=1000, inner_n=200, x0=None, lam=None, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    problem: &str,
    solver: &str,
    step: Option<&str>,
    t: f64,
    c: f64,
    n: usize,
    inner_n: usize,
    x0: Option<Vec<f64>>,
    lam: Option<f64>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let solver: Solver = solver.parse().map_err(py_err)?;
    let step = step.map(str::parse::<StepRule>).transpose().map_err(py_err)?;
    let spec = RunSpec { problem: problem.into(), solver, step, t, c, n, inner_n, x0, lambda: lam, seed, ..RunSpec::default() };
    let out = py.detach(|| corpus::execute(&spec)).map_err(py_err)?;
    #[derive(Serialize)]
    struct Payload<'a> {
        summary: &'a corpus::RunSummary,
        iterates: Vec<Vec<f64>>,
        rho: &'a [f64],
    }
    let payload = Payload {
        summary: &out.summary,
        iterates: out.record.iterates.iter().map(coords).collect(),
        rho: &out.record.rho,
    };
    to_py(py, &payload)
}

/// Nearest point of `{d : ⟨r, d⟩ ≤ 0 for every row r}` to `v`.
#[pyfunction]
fn project_cone(rows: Vec<Vec<f64>>, v: Vec<f64>) -> PyResult<Vec<f64>> {
    let k = cone(rows, v.len())?;
    Ok(coords(&k.project(&pt(v))))
}

/// Generators of the cone `{d : ⟨r, d⟩ ≤ 0}`.
#[pyfunction]
fn cone_generators(rows: Vec<Vec<f64>>, dim: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(cone(rows, dim)?.generators().iter().map(coords).collect())
}

fn cone(rows: Vec<Vec<f64>>, dim: usize) -> PyResult<PolyCone> {
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err(format!("every row must have length {dim}")));
    }
    Ok(PolyCone::new(dim, rows.into_iter().map(pt).collect()))
}

#[pymodule]
fn pysharpeq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_function(wrap_pyfunction!(problem, m)?)?;
    m.add_function(wrap_pyfunction!(list_problems, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(project_cone, m)?)?;
    m.add_function(wrap_pyfunction!(cone_generators, m)?)?;
    m.add("CHECKS", Check::ALL.iter().map(|c| c.name()).collect::<Vec<_>>())?;
    Ok(())
}
