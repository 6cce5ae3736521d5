use itertools::Itertools;

use super::cone::PolyCone;
use super::linalg::min_norm_coefficients;
use super::polyhedron::Polyhedron;
use super::{check_point, Point};
use crate::{tol, Error, Result};

/// Convex hull of finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyPolytope)?;
        let dim = first.len();
        super::check_dim(dim)?;
        for v in &vertices {
            check_point(v, dim)?;
        }
        Ok(Self { dim, vertices })
    }

    pub fn singleton(p: Point) -> Self {
        Self { dim: p.len(), vertices: vec![p] }
    }

    /// Product of intervals `[lo_i, hi_i]`.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        if hi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: hi.len() });
        }
        let mut verts = vec![Vec::with_capacity(dim)];
        for i in 0..dim {
            let choices: &[f64] = if lo[i] == hi[i] { &[lo[i]] } else { &[lo[i], hi[i]] };
            verts = verts
                .into_iter()
                .flat_map(|v| {
                    choices.iter().map(move |&c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        Self::new(verts.iter().map(|v| Point::from_vec(v.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.iter().all(|v| (v - &self.vertices[0]).amax() <= tol::RANK)
    }

    /// Drops duplicates and vertices inside the hull of the others.
    pub fn pruned(&self) -> VPolytope {
        let mut verts: Vec<Point> = Vec::new();
        for v in &self.vertices {
            if !verts.iter().any(|w| (w - v).amax() <= 1e-12) {
                verts.push(v.clone());
            }
        }
        let mut i = 0;
        while i < verts.len() && verts.len() > 1 {
            let others: Vec<Point> = verts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, w)| w - &verts[i]).collect();
            let q = min_norm(&others, &[]);
            if q.point.norm() <= 1e-12 {
                verts.remove(i);
            } else {
                i += 1;
            }
        }
        VPolytope { dim: self.dim, vertices: verts }
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> VPolytope {
        let vertices = self
            .vertices
            .iter()
            .cartesian_product(other.vertices.iter())
            .map(|(a, b)| a + b)
            .collect();
        VPolytope { dim: self.dim, vertices }.pruned()
    }

    /// Cartesian product; coordinates of `self` come first.
    pub fn product(&self, other: &VPolytope) -> VPolytope {
        let dim = self.dim + other.dim;
        let vertices = self
            .vertices
            .iter()
            .cartesian_product(other.vertices.iter())
            .map(|(a, b)| Point::from_iterator(dim, a.iter().chain(b.iter()).cloned()))
            .collect();
        VPolytope { dim, vertices }
    }

    pub fn negate(&self) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, s: f64) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| v * s).collect() }
    }

    pub fn translate(&self, t: &Point) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.vertices.iter().map(|v| v + t).collect() }
    }

    /// `max ⟨v, d⟩` over the polytope.
    pub fn support(&self, d: &Point) -> f64 {
        self.vertices.iter().map(|v| v.dot(d)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nearest point of the hull to `x`.
    pub fn project(&self, x: &Point) -> Point {
        let shifted: Vec<Point> = self.vertices.iter().map(|v| v - x).collect();
        min_norm(&shifted, &[]).point + x
    }

    pub fn dist(&self, x: &Point) -> f64 {
        (self.project(x) - x).norm()
    }

    /// Symmetric Hausdorff distance; the distance to a convex set is convex, so the
    /// supremum over each hull is attained at a vertex.
    pub fn hausdorff(&self, other: &VPolytope) -> f64 {
        let a = self.vertices.iter().map(|v| other.dist(v)).fold(0.0_f64, f64::max);
        let b = other.vertices.iter().map(|v| self.dist(v)).fold(0.0_f64, f64::max);
        a.max(b)
    }

    /// `conv(V) ∩ K`, or `None` when empty.
    pub fn intersect_cone(&self, cone: &PolyCone) -> Option<VPolytope> {
        let hull = Polyhedron::from_sum(self, &PolyCone::zero(self.dim));
        let poly = hull.with_cone_rows(cone);
        let verts = poly.vertices();
        if verts.is_empty() {
            return None;
        }
        Some(VPolytope { dim: self.dim, vertices: verts }.pruned())
    }
}

/// Result of a polytope/cone distance query.
#[derive(Clone, Debug)]
pub struct ConeDistance {
    pub distance: f64,
    /// Point of the polytope.
    pub p: Point,
    /// Point of the cone.
    pub k: Point,
}

#[derive(Clone, Debug)]
pub(crate) struct MinNorm {
    pub point: Point,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

/// Minimum-norm point of `conv(V) + cone(R)`.
///
/// Enumerates supports `(S, T)` with affinely independent `V_S` and linearly
/// independent `R_T`, solving an unconstrained least-squares problem on each and
/// keeping nonnegative solutions. The first candidate that passes the optimality
/// test `⟨p, v⟩ ≥ ‖p‖²`, `⟨p, r⟩ ≥ 0` is returned; otherwise the smallest
/// feasible candidate.
pub(crate) fn min_norm(verts: &[Point], rays: &[Point]) -> MinNorm {
    let n = verts[0].len();
    let scale = verts.iter().chain(rays.iter()).map(|v| v.amax()).fold(1.0_f64, f64::max);
    let eps = 1e-12 * scale;
    let mut best: Option<(f64, MinNorm)> = None;
    for total in 1..=(n + 1) {
        for s in 1..=total.min(verts.len()) {
            let t = total - s;
            if t > rays.len() {
                continue;
            }
            for vs in (0..verts.len()).combinations(s) {
                for ts in (0..rays.len()).combinations(t) {
                    let Some(cand) = solve_support(verts, rays, &vs, &ts) else { continue };
                    let norm = cand.point.norm();
                    let p2 = cand.point.norm_squared();
                    let optimal = verts.iter().all(|v| v.dot(&cand.point) >= p2 - eps * (1.0 + norm))
                        && rays.iter().all(|r| r.dot(&cand.point) >= -eps * (1.0 + norm));
                    if optimal {
                        return cand;
                    }
                    if best.as_ref().is_none_or(|(b, _)| norm < *b) {
                        best = Some((norm, cand));
                    }
                }
            }
        }
    }
    best.map(|(_, c)| c).unwrap_or_else(|| {
        let mut lambda = vec![0.0; verts.len()];
        lambda[0] = 1.0;
        MinNorm { point: verts[0].clone(), lambda, mu: vec![0.0; rays.len()] }
    })
}

fn solve_support(verts: &[Point], rays: &[Point], vs: &[usize], ts: &[usize]) -> Option<MinNorm> {
    let base = &verts[vs[0]];
    let diffs: Vec<Point> = vs[1..].iter().map(|&i| &verts[i] - base).collect();
    let mut cols: Vec<&Point> = diffs.iter().collect();
    cols.extend(ts.iter().map(|&j| &rays[j]));
    let coef = if cols.is_empty() {
        nalgebra::DVector::zeros(0)
    } else {
        min_norm_coefficients(&cols, base)?
    };
    let neg = -1e-12;
    let mut lambda = vec![0.0; verts.len()];
    let mut mu = vec![0.0; rays.len()];
    let mut rest = 1.0;
    for (k, &i) in vs[1..].iter().enumerate() {
        if coef[k] < neg {
            return None;
        }
        lambda[i] = coef[k].max(0.0);
        rest -= coef[k];
    }
    if rest < neg {
        return None;
    }
    lambda[vs[0]] = rest.max(0.0);
    for (k, &j) in ts.iter().enumerate() {
        let c = coef[vs.len() - 1 + k];
        if c < neg {
            return None;
        }
        mu[j] = c.max(0.0);
    }
    let mut point = Point::zeros(base.len());
    for (l, v) in lambda.iter().zip(verts) {
        if *l != 0.0 {
            point += v * *l;
        }
    }
    for (m, r) in mu.iter().zip(rays) {
        if *m != 0.0 {
            point += r * *m;
        }
    }
    Some(MinNorm { point, lambda, mu })
}

/// Distance between a polytope and a polyhedral cone, with an attaining pair,
/// computed as the minimum-norm point of `P − K`.
pub fn polytope_cone_distance(p: &VPolytope, k: &PolyCone) -> ConeDistance {
    let rays: Vec<Point> = k.generators().iter().map(|g| -g).collect();
    let m = min_norm(&p.vertices, &rays);
    let mut pp = Point::zeros(p.dim);
    for (l, v) in m.lambda.iter().zip(&p.vertices) {
        pp += v * *l;
    }
    let mut kk = Point::zeros(p.dim);
    for (mu, g) in m.mu.iter().zip(k.generators()) {
        kk += g * *mu;
    }
    ConeDistance { distance: m.point.norm(), p: pp, k: kk }
}

/// Alternating projections between the polytope and the cone, run until the
/// displacement drops below `1e-12`.
pub fn polytope_cone_distance_alternating(p: &VPolytope, k: &PolyCone) -> Result<ConeDistance> {
    let mut pp = p.vertices[0].clone();
    let mut kk = k.project(&pp);
    let mut last_gap = f64::INFINITY;
    for _ in 0..100_000 {
        let np = p.project(&kk);
        let nk = k.project(&np);
        let moved = (&np - &pp).norm() + (&nk - &kk).norm();
        pp = np;
        kk = nk;
        last_gap = (&pp - &kk).norm();
        if moved < tol::DISPLACEMENT {
            return Ok(ConeDistance { distance: last_gap, p: pp, k: kk });
        }
    }
    Err(Error::NoConvergence { iterations: 100_000, gap: last_gap, best: Box::new((pp, kk)) })
}

/// True when `radius · g ∈ P + K` (to `1e-8`) for every sampled direction `g`.
pub fn ball_in_sum(radius: f64, p: &VPolytope, k: &PolyCone, directions: &[Point]) -> bool {
    if radius == 0.0 {
        return polytope_cone_distance(&p.negate(), k).distance <= tol::MEMBERSHIP;
    }
    let sum = Polyhedron::from_sum(p, k);
    directions.iter().all(|g| sum.violation(&(g * radius)) <= tol::MEMBERSHIP)
}
