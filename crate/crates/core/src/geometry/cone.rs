use std::sync::OnceLock;

use itertools::Itertools;

use super::linalg::{null_space, project_affine};
use super::Point;
use crate::tol;

/// Polyhedral cone `{d : ⟨aᵢ, d⟩ ≤ 0}` with a lazily computed generator list.
///
/// Rows are stored with unit norm and without duplicates. Generators include both
/// signs of a lineality basis, so `cone(generators)` is the whole cone.
#[derive(Debug)]
pub struct PolyCone {
    dim: usize,
    rows: Vec<Point>,
    gens: OnceLock<Vec<Point>>,
}

impl Clone for PolyCone {
    fn clone(&self) -> Self {
        let gens = OnceLock::new();
        if let Some(g) = self.gens.get() {
            let _ = gens.set(g.clone());
        }
        Self { dim: self.dim, rows: self.rows.clone(), gens }
    }
}

fn tidy(rows: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(rows.len());
    for r in rows {
        let n = r.norm();
        if n <= tol::RANK {
            continue;
        }
        let u = r / n;
        if !out.iter().any(|w| (w - &u).amax() <= 1e-12) {
            out.push(u);
        }
    }
    out
}

impl PolyCone {
    pub fn new(dim: usize, rows: Vec<Point>) -> Self {
        Self { dim, rows: tidy(rows), gens: OnceLock::new() }
    }

    /// `ℝⁿ`.
    pub fn whole(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    /// `{0}`.
    pub fn zero(dim: usize) -> Self {
        let rows = (0..dim).flat_map(|i| [super::basis(dim, i), -super::basis(dim, i)]).collect();
        let cone = Self::new(dim, rows);
        let _ = cone.gens.set(Vec::new());
        cone
    }

    /// `cone(gens)`.
    pub fn from_generators(dim: usize, gens: Vec<Point>) -> Self {
        Self::new(dim, gens).polar()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Point] {
        &self.rows
    }

    pub fn is_whole(&self) -> bool {
        self.rows.is_empty()
    }

    /// Generators by double description: a lineality basis in both signs, plus the
    /// extreme rays of the pointed part, each cut out by `n − dim L − 1`
    /// independent rows.
    pub fn generators(&self) -> &[Point] {
        self.gens.get_or_init(|| self.compute_generators())
    }

    fn compute_generators(&self) -> Vec<Point> {
        let n = self.dim;
        let row_refs: Vec<&Point> = self.rows.iter().collect();
        let lineality = null_space(&row_refs, n);
        let mut gens: Vec<Point> = Vec::new();
        for l in &lineality {
            gens.push(l.clone());
            gens.push(-l);
        }
        let dl = lineality.len();
        if dl == n {
            return gens;
        }
        let need = n - dl - 1;
        let feas = 1e-10;
        let mut rays: Vec<Point> = Vec::new();
        for subset in (0..self.rows.len()).combinations(need) {
            let mut constraint: Vec<&Point> = subset.iter().map(|&i| &self.rows[i]).collect();
            constraint.extend(lineality.iter());
            let ns = null_space(&constraint, n);
            if ns.len() != 1 {
                continue;
            }
            for cand in [ns[0].clone(), -&ns[0]] {
                if self.rows.iter().all(|a| a.dot(&cand) <= feas)
                    && !rays.iter().any(|r| (r - &cand).amax() <= 1e-9)
                {
                    rays.push(cand);
                }
            }
        }
        gens.extend(rays);
        gens
    }

    /// Polar cone: rows and generators trade places.
    pub fn polar(&self) -> PolyCone {
        let rows = tidy(self.generators().to_vec());
        let gens = OnceLock::new();
        let _ = gens.set(self.rows.clone());
        PolyCone { dim: self.dim, rows, gens }
    }

    pub fn intersect(&self, other: &PolyCone) -> PolyCone {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        PolyCone::new(self.dim, rows)
    }

    pub fn negate(&self) -> PolyCone {
        let rows = self.rows.iter().map(|r| -r).collect();
        let cone = PolyCone::new(self.dim, rows);
        if let Some(g) = self.gens.get() {
            let _ = cone.gens.set(g.iter().map(|v| -v).collect());
        }
        cone
    }

    /// Largest `⟨aᵢ, d⟩`; nonpositive for members.
    pub fn excess(&self, d: &Point) -> f64 {
        self.rows.iter().map(|a| a.dot(d)).fold(f64::NEG_INFINITY, f64::max).max(0.0)
    }

    pub fn contains(&self, d: &Point, tol: f64) -> bool {
        self.rows.iter().all(|a| a.dot(d) <= tol)
    }

    /// Radius of the largest ball around `p` inside the cone (negative when `p` is
    /// outside). Infinite for `ℝⁿ`.
    pub fn interior_margin(&self, p: &Point) -> f64 {
        self.rows.iter().map(|a| -a.dot(p)).fold(f64::INFINITY, f64::min)
    }

    /// Nearest point by face enumeration: each subset of rows of size at most `n` is
    /// treated as a set of equalities, and the nearest feasible candidate wins.
    pub fn project(&self, v: &Point) -> Point {
        if self.contains(v, 0.0) {
            return v.clone();
        }
        let feas = tol::PROJECTION * (1.0 + v.amax());
        let mut best: Option<(f64, Point)> = None;
        let m = self.rows.len();
        for size in 1..=m.min(self.dim) {
            for subset in (0..m).combinations(size) {
                let rows: Vec<&Point> = subset.iter().map(|&i| &self.rows[i]).collect();
                let rhs = vec![0.0; size];
                let Some(y) = project_affine(&rows, &rhs, v) else { continue };
                if !self.contains(&y, feas) {
                    continue;
                }
                let d = (&y - v).norm();
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, y));
                }
            }
        }
        best.map(|(_, p)| p).unwrap_or_else(|| Point::zeros(self.dim))
    }

    /// Dykstra's method over the halfspaces; an independent route to
    /// [`PolyCone::project`].
    pub fn project_dykstra(&self, v: &Point) -> Point {
        if self.rows.is_empty() {
            return v.clone();
        }
        let m = self.rows.len();
        let mut x = v.clone();
        let mut corr = vec![Point::zeros(self.dim); m];
        for _ in 0..200_000 {
            let start = x.clone();
            for (a, c) in self.rows.iter().zip(corr.iter_mut()) {
                let y = &x + &*c;
                let s = a.dot(&y);
                let next = if s > 0.0 { &y - a * s } else { y.clone() };
                *c = y - &next;
                x = next;
            }
            if (&x - &start).norm() < 1e-15 {
                break;
            }
        }
        x
    }
}
