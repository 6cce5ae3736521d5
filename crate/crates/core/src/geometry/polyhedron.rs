use itertools::Itertools;

use super::cone::PolyCone;
use super::linalg::{null_space, solve_square, span_basis};
use super::polytope::VPolytope;
use super::Point;

/// Intersection of halfspaces `⟨a, x⟩ ≤ b` with unit normals.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    dim: usize,
    rows: Vec<(Point, f64)>,
}

impl Polyhedron {
    pub fn new(dim: usize, rows: Vec<(Point, f64)>) -> Self {
        let rows = rows
            .into_iter()
            .filter_map(|(a, b)| {
                let n = a.norm();
                (n > 1e-12).then(|| (a / n, b / n))
            })
            .collect();
        Self { dim, rows }
    }

    /// Halfspace description of `conv(P) + K`.
    ///
    /// The affine hull is pinned by equality pairs. Inside it, each facet normal
    /// lies in `K°` and is orthogonal to `d − 1` independent directions taken from
    /// vertex differences and cone generators, `d` being the hull's dimension.
    /// Every candidate in `K°` yields a valid inequality with offset equal to the
    /// support of `P`, so the list is both complete and sound.
    pub fn from_sum(p: &VPolytope, k: &PolyCone) -> Self {
        let dim = p.dim();
        let p = p.pruned();
        let verts = p.vertices();
        let gens = k.generators();
        let mut dirs: Vec<Point> = Vec::new();
        for (i, j) in (0..verts.len()).tuple_combinations() {
            dirs.push(&verts[j] - &verts[i]);
        }
        dirs.extend(gens.iter().cloned());
        let dir_refs: Vec<&Point> = dirs.iter().collect();
        let span = span_basis(&dir_refs, dim);
        let span_refs: Vec<&Point> = span.iter().collect();
        let complement = null_space(&span_refs, dim);
        let mut rows: Vec<(Point, f64)> = Vec::new();
        let v0 = &verts[0];
        for w in &complement {
            let b = w.dot(v0);
            rows.push((w.clone(), b));
            rows.push((-w, -b));
        }
        let d = span.len();
        if d > 0 {
            let mut normals: Vec<Point> = Vec::new();
            for subset in (0..dirs.len()).combinations(d - 1) {
                let mut cons: Vec<&Point> = subset.iter().map(|&i| &dirs[i]).collect();
                cons.extend(complement.iter());
                let ns = null_space(&cons, dim);
                if ns.len() != 1 {
                    continue;
                }
                for a in [ns[0].clone(), -&ns[0]] {
                    if gens.iter().any(|g| a.dot(g) > 1e-10) {
                        continue;
                    }
                    if normals.iter().any(|m| (m - &a).amax() <= 1e-10) {
                        continue;
                    }
                    normals.push(a);
                }
            }
            for a in normals {
                let b = p.support(&a);
                rows.push((a, b));
            }
        }
        Self { dim, rows }
    }

    /// Adds the rows of a cone (offset zero).
    pub fn with_cone_rows(mut self, cone: &PolyCone) -> Self {
        self.rows.extend(cone.rows().iter().map(|a| (a.clone(), 0.0)));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(Point, f64)] {
        &self.rows
    }

    /// Largest `⟨a, x⟩ − b`, floored at zero.
    pub fn violation(&self, x: &Point) -> f64 {
        self.rows.iter().map(|(a, b)| a.dot(x) - b).fold(0.0_f64, f64::max)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Largest `t ≥ 0` with `t·g` inside, capped at `cap`.
    pub fn ray_exit(&self, g: &Point, cap: f64) -> f64 {
        let mut t = cap;
        for (a, b) in &self.rows {
            let s = a.dot(g);
            if s > 0.0 {
                t = t.min(b / s);
            }
        }
        t.max(0.0)
    }

    /// Vertices, by solving every square subsystem.
    pub fn vertices(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for subset in (0..self.rows.len()).combinations(self.dim) {
            let rows: Vec<&Point> = subset.iter().map(|&i| &self.rows[i].0).collect();
            let rhs: Vec<f64> = subset.iter().map(|&i| self.rows[i].1).collect();
            let Some(v) = solve_square(&rows, &rhs) else { continue };
            if self.violation(&v) <= 1e-9 * (1.0 + v.amax()) && !out.iter().any(|w| (w - &v).amax() <= 1e-10) {
                out.push(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn segment_plus_orthant() {
        let p = VPolytope::new(vec![point(&[1.0, 0.0]), point(&[1.0, 1.0])]).unwrap();
        let k = PolyCone::new(2, vec![point(&[1.0, 0.0]), point(&[0.0, 1.0])]);
        let h = Polyhedron::from_sum(&p, &k);
        assert!(h.contains(&point(&[1.0, 1.0]), 1e-12));
        assert!(h.contains(&point(&[-50.0, -3.0]), 1e-12));
        assert!(!h.contains(&point(&[1.01, 0.0]), 1e-12));
        assert!(!h.contains(&point(&[0.0, 1.01]), 1e-12));
    }

    #[test]
    fn lower_dimensional_sum() {
        let p = VPolytope::new(vec![point(&[0.0, 0.0, 1.0]), point(&[1.0, 0.0, 1.0])]).unwrap();
        let h = Polyhedron::from_sum(&p, &PolyCone::zero(3));
        assert!(h.contains(&point(&[0.5, 0.0, 1.0]), 1e-12));
        assert!(!h.contains(&point(&[0.5, 0.1, 1.0]), 1e-9));
        assert!(!h.contains(&point(&[1.5, 0.0, 1.0]), 1e-9));
        let verts = h.vertices();
        assert_eq!(verts.len(), 2);
    }

    #[test]
    fn point_plus_whole_space() {
        let p = VPolytope::singleton(point(&[3.0, 4.0]));
        let h = Polyhedron::from_sum(&p, &PolyCone::whole(2));
        assert!(h.rows().is_empty());
        assert_eq!(h.ray_exit(&point(&[1.0, 0.0]), 10.0), 10.0);
    }
}
