use super::expr::Expr;
use crate::geometry::{Point, VPolytope};
use crate::tol;

/// Smooth atoms combined under finitely nested `max` and sums.
#[derive(Clone, Debug)]
pub enum PiecewiseFn {
    Atom(Expr),
    Max(Vec<PiecewiseFn>),
    Sum(Vec<PiecewiseFn>),
}

impl PiecewiseFn {
    pub fn atom(e: Expr) -> Self {
        PiecewiseFn::Atom(e)
    }

    pub fn constant(c: f64) -> Self {
        PiecewiseFn::Atom(Expr::constant(c))
    }

    /// `max{0, e}`.
    pub fn pos(e: Expr) -> Self {
        PiecewiseFn::Max(vec![PiecewiseFn::constant(0.0), PiecewiseFn::Atom(e)])
    }

    /// `|e|` written as `max{e, −e}`.
    pub fn abs(e: Expr) -> Self {
        PiecewiseFn::Max(vec![PiecewiseFn::Atom(-&e), PiecewiseFn::Atom(e)])
    }

    pub fn max(parts: Vec<PiecewiseFn>) -> Self {
        PiecewiseFn::Max(parts)
    }

    pub fn sum(parts: Vec<PiecewiseFn>) -> Self {
        PiecewiseFn::Sum(parts)
    }

    pub fn is_smooth(&self) -> bool {
        match self {
            PiecewiseFn::Atom(_) => true,
            PiecewiseFn::Max(_) => false,
            PiecewiseFn::Sum(parts) => parts.iter().all(|p| p.is_smooth()),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            PiecewiseFn::Atom(e) => e.eval(x),
            PiecewiseFn::Max(parts) => parts.iter().map(|p| p.value(x)).fold(f64::NEG_INFINITY, f64::max),
            PiecewiseFn::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
        }
    }

    /// Convex hull of the gradients of the active branches; sums are Minkowski sums.
    pub fn subdiff(&self, x: &Point) -> VPolytope {
        let coords = x.as_slice();
        self.subdiff_at(coords, tol::ACTIVE).pruned()
    }

    fn subdiff_at(&self, x: &[f64], active: f64) -> VPolytope {
        match self {
            PiecewiseFn::Atom(e) => VPolytope::singleton(Point::from_vec(e.grad(x))),
            PiecewiseFn::Max(parts) => {
                let values: Vec<f64> = parts.iter().map(|p| p.value(x)).collect();
                let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut verts: Vec<Point> = Vec::new();
                for (p, v) in parts.iter().zip(&values) {
                    if *v >= top - active {
                        verts.extend(p.subdiff_at(x, active).vertices().iter().cloned());
                    }
                }
                VPolytope::new(verts).expect("active set is never empty").pruned()
            }
            PiecewiseFn::Sum(parts) => {
                let mut acc = VPolytope::singleton(Point::zeros(x.len()));
                for p in parts {
                    acc = acc.minkowski_sum(&p.subdiff_at(x, active));
                }
                acc
            }
        }
    }

    /// Gradient of a smooth function.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            PiecewiseFn::Atom(e) => Some(e.grad(x)),
            PiecewiseFn::Max(_) => None,
            PiecewiseFn::Sum(parts) => {
                let mut g = vec![0.0; x.len()];
                for p in parts {
                    for (a, b) in g.iter_mut().zip(p.gradient(x)?) {
                        *a += b;
                    }
                }
                Some(g)
            }
        }
    }

    /// Argmax sets of every `max` node, in traversal order, at tolerance `active`.
    pub fn signature(&self, x: &[f64], active: f64) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_signature(x, active, &mut out);
        out
    }

    fn collect_signature(&self, x: &[f64], active: f64, out: &mut Vec<Vec<usize>>) {
        match self {
            PiecewiseFn::Atom(_) => {}
            PiecewiseFn::Max(parts) => {
                let values: Vec<f64> = parts.iter().map(|p| p.value(x)).collect();
                let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                out.push((0..parts.len()).filter(|&i| values[i] >= top - active).collect());
                for p in parts {
                    p.collect_signature(x, active, out);
                }
            }
            PiecewiseFn::Sum(parts) => {
                for p in parts {
                    p.collect_signature(x, active, out);
                }
            }
        }
    }

    /// The gradient of the unique active branch combination, when there is one.
    pub fn branch_gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let s = self.subdiff(&Point::from_column_slice(x));
        s.is_singleton().then(|| s.vertices()[0].iter().cloned().collect())
    }
}
