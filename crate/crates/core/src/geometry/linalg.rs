use nalgebra::{DMatrix, DVector};

use super::Point;
use crate::tol;

/// Stacks `rows` into a `k × n` matrix.
pub(crate) fn stack_rows(rows: &[&Point], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j])
}

/// Stacks `cols` into an `n × k` matrix.
pub(crate) fn stack_cols(cols: &[&Point], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
}

/// Right singular vectors of the rows (zero-padded to a square matrix so that
/// all `n` come back), paired with their singular values.
fn right_singular(rows: &[&Point], dim: usize) -> Vec<(f64, Point)> {
    let m = rows.len().max(dim);
    let a = DMatrix::from_fn(m, dim, |i, j| if i < rows.len() { rows[i][j] } else { 0.0 });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    (0..dim).map(|i| (svd.singular_values[i], vt.row(i).transpose().into_owned())).collect()
}

/// Orthonormal basis of `{d : ⟨r, d⟩ = 0 for every row r}`.
pub(crate) fn null_space(rows: &[&Point], dim: usize) -> Vec<Point> {
    if rows.is_empty() {
        return (0..dim).map(|i| super::basis(dim, i)).collect();
    }
    let sv = right_singular(rows, dim);
    let top = sv.iter().map(|(s, _)| *s).fold(0.0_f64, f64::max).max(1.0);
    sv.into_iter().filter(|(s, _)| *s <= tol::RANK * top).map(|(_, v)| v.normalize()).collect()
}

/// Orthonormal basis of the span of `vectors`.
pub(crate) fn span_basis(vectors: &[&Point], dim: usize) -> Vec<Point> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let sv = right_singular(vectors, dim);
    let top = sv.iter().map(|(s, _)| *s).fold(0.0_f64, f64::max);
    if top <= 0.0 {
        return Vec::new();
    }
    sv.into_iter().filter(|(s, _)| *s > tol::RANK * top.max(1.0)).map(|(_, v)| v.normalize()).collect()
}

/// Projects `x` onto the affine set `{y : A y = b}`; `None` if the system is
/// inconsistent.
pub(crate) fn project_affine(rows: &[&Point], rhs: &[f64], x: &Point) -> Option<Point> {
    if rows.is_empty() {
        return Some(x.clone());
    }
    let dim = x.len();
    let a = stack_rows(rows, dim);
    let b = DVector::from_column_slice(rhs);
    let residual = &a * x - &b;
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max).max(1.0);
    let shift = svd.solve(&residual, tol::RANK * top).ok()?;
    let y = x - shift;
    let check = (&a * &y - &b).amax();
    let scale = 1.0 + b.amax() + y.amax();
    (check <= 1e-9 * scale).then_some(y)
}

/// Least-squares coefficients `c` minimising `‖base + D c‖` when `D` has full
/// column rank; `None` when the columns are (numerically) dependent.
pub(crate) fn min_norm_coefficients(cols: &[&Point], base: &Point) -> Option<DVector<f64>> {
    let dim = base.len();
    let d = stack_cols(cols, dim);
    let svd = d.svd(true, true);
    let sv = &svd.singular_values;
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    let low = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if top == 0.0 || low <= tol::RANK * top {
        return None;
    }
    let rhs = -base;
    svd.solve(&rhs, 0.0).ok()
}

/// Solves a square system; `None` if singular.
pub(crate) fn solve_square(rows: &[&Point], rhs: &[f64]) -> Option<Point> {
    let dim = rows.len();
    let a = stack_rows(rows, dim);
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    let low = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if top == 0.0 || low <= 1e-9 * top {
        return None;
    }
    svd.solve(&DVector::from_column_slice(rhs), 0.0).ok()
}
