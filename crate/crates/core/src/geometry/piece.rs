use itertools::Itertools;

use super::cone::PolyCone;
use super::linalg::{project_affine, solve_square};
use super::{basis, check_dim, check_point, Point};
use crate::{tol, Error, Result};

/// `{x : ⟨a, x⟩ ≤ b}` with `‖a‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    a: Point,
    b: f64,
}

impl Halfspace {
    /// Normalises `(a, b)` so that `‖a‖ = 1`.
    pub fn new(a: Point, b: f64) -> Result<Self> {
        let (a, b) = normalise(a, b)?;
        Ok(Self { a, b })
    }

    pub fn normal(&self) -> &Point {
        &self.a
    }

    pub fn offset(&self) -> f64 {
        self.b
    }

    /// Signed slack `⟨a, x⟩ − b`; positive means violated.
    pub fn excess(&self, x: &Point) -> f64 {
        self.a.dot(x) - self.b
    }
}

/// `{x : ⟨a, x⟩ = b}` with `‖a‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    a: Point,
    b: f64,
}

impl Hyperplane {
    pub fn new(a: Point, b: f64) -> Result<Self> {
        let (a, b) = normalise(a, b)?;
        Ok(Self { a, b })
    }

    pub fn normal(&self) -> &Point {
        &self.a
    }

    pub fn offset(&self) -> f64 {
        self.b
    }

    pub fn residual(&self, x: &Point) -> f64 {
        self.a.dot(x) - self.b
    }
}

fn normalise(a: Point, b: f64) -> Result<(Point, f64)> {
    if a.iter().any(|c| !c.is_finite()) || !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.norm();
    if n == 0.0 {
        return Err(Error::ZeroNormal);
    }
    Ok((a / n, b / n))
}

/// Closed Euclidean ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if center.iter().any(|c| !c.is_finite()) || !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if radius < 0.0 {
            return Err(Error::NegativeRadius(radius));
        }
        Ok(Self { center, radius })
    }
}

/// A nonempty closed convex set: a polyhedron, optionally intersected with a ball.
#[derive(Clone, Debug)]
pub struct ConvexPiece {
    dim: usize,
    inequalities: Vec<Halfspace>,
    equalities: Vec<Hyperplane>,
    ball: Option<Ball>,
    witness: Point,
}

impl ConvexPiece {
    pub fn new(
        dim: usize,
        inequalities: Vec<Halfspace>,
        equalities: Vec<Hyperplane>,
        ball: Option<Ball>,
    ) -> Result<Self> {
        check_dim(dim)?;
        let lens = inequalities
            .iter()
            .map(|h| h.a.len())
            .chain(equalities.iter().map(|h| h.a.len()))
            .chain(ball.iter().map(|b| b.center.len()));
        for len in lens {
            if len != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: len });
            }
        }
        let mut piece = Self { dim, inequalities, equalities, ball, witness: Point::zeros(dim) };
        let origin = Point::zeros(dim);
        let witness = piece.project_exact(&origin).ok_or(Error::EmptySet)?;
        let violation = piece.violation(&witness);
        if violation > tol::WITNESS * (1.0 + witness.amax()) {
            return Err(Error::InfeasiblePiece { violation });
        }
        piece.witness = witness;
        Ok(piece)
    }

    /// The whole space.
    pub fn whole(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new(), Vec::new(), None)
    }

    /// A single point.
    pub fn point(p: &Point) -> Result<Self> {
        check_dim(p.len())?;
        check_point(p, p.len())?;
        let eqs = (0..p.len())
            .map(|i| Hyperplane::new(basis(p.len(), i), p[i]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p.len(), Vec::new(), eqs, None)
    }

    /// Axis-aligned box; infinite bounds are dropped.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        let dim = lo.len();
        let mut ineqs = Vec::new();
        for i in 0..dim {
            if lo[i].is_nan() || hi[i].is_nan() {
                return Err(Error::NonFinite);
            }
            if lo[i].is_finite() {
                ineqs.push(Halfspace::new(-basis(dim, i), -lo[i])?);
            }
            if hi[i].is_finite() {
                ineqs.push(Halfspace::new(basis(dim, i), hi[i])?);
            }
        }
        Self::new(dim, ineqs, Vec::new(), None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Hyperplane] {
        &self.equalities
    }

    pub fn ball(&self) -> Option<&Ball> {
        self.ball.as_ref()
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    /// Largest constraint violation at `x` (zero when feasible).
    pub fn violation(&self, x: &Point) -> f64 {
        let mut v = 0.0_f64;
        for h in &self.inequalities {
            v = v.max(h.excess(x));
        }
        for e in &self.equalities {
            v = v.max(e.residual(x).abs());
        }
        if let Some(ball) = &self.ball {
            v = v.max((x - &ball.center).norm() - ball.radius);
        }
        v
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.len() == self.dim && self.violation(x) <= tol
    }

    /// Euclidean projection of `x` onto the piece.
    pub fn project(&self, x: &Point) -> Point {
        self.project_exact(x).unwrap_or_else(|| self.witness.clone())
    }

    /// Enumerates active sets of inequalities. The projection lies in the relative
    /// interior of some face, and on that face it is the projection onto the face's
    /// affine hull (intersected with the ball when the ball is active), so the
    /// nearest feasible candidate is the answer.
    fn project_exact(&self, x: &Point) -> Option<Point> {
        let eq_rows: Vec<&Point> = self.equalities.iter().map(|e| &e.a).collect();
        let eq_rhs: Vec<f64> = self.equalities.iter().map(|e| e.b).collect();
        let feas_tol = tol::PROJECTION * (1.0 + x.amax());
        let mut best: Option<(f64, Point)> = None;
        let m = self.inequalities.len();
        for size in 0..=m.min(self.dim) {
            for subset in (0..m).combinations(size) {
                let mut rows = eq_rows.clone();
                let mut rhs = eq_rhs.clone();
                for &i in &subset {
                    rows.push(&self.inequalities[i].a);
                    rhs.push(self.inequalities[i].b);
                }
                let Some(y) = project_affine(&rows, &rhs, x) else { continue };
                let candidates = match &self.ball {
                    None => vec![y],
                    Some(ball) => self.ball_candidates(&rows, &rhs, &y, ball),
                };
                for c in candidates {
                    if self.violation(&c) > feas_tol {
                        continue;
                    }
                    let d = (&c - x).norm();
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, c));
                    }
                }
            }
        }
        best.map(|(_, p)| p)
    }

    /// Projection onto `L ∩ ball` where `L` is the affine set given by `rows`, from a
    /// point `y` already in `L`.
    fn ball_candidates(&self, rows: &[&Point], rhs: &[f64], y: &Point, ball: &Ball) -> Vec<Point> {
        let Some(c_l) = project_affine(rows, rhs, &ball.center) else { return Vec::new() };
        let off = (&c_l - &ball.center).norm_squared();
        let r2 = ball.radius * ball.radius - off;
        if r2 < -tol::PROJECTION {
            return Vec::new();
        }
        let r_l = r2.max(0.0).sqrt();
        let dy = y - &c_l;
        let n = dy.norm();
        if n <= r_l {
            vec![y.clone()]
        } else {
            vec![&c_l + dy * (r_l / n)]
        }
    }

    /// Dykstra's alternating projections between the polyhedral part and the ball.
    /// Used as an independent check of [`ConvexPiece::project`].
    pub fn project_dykstra(&self, x: &Point) -> Point {
        let Some(ball) = &self.ball else { return self.project(x) };
        let poly = ConvexPiece {
            dim: self.dim,
            inequalities: self.inequalities.clone(),
            equalities: self.equalities.clone(),
            ball: None,
            witness: self.witness.clone(),
        };
        let mut cur = x.clone();
        let mut p_corr = Point::zeros(self.dim);
        let mut q_corr = Point::zeros(self.dim);
        for _ in 0..100_000 {
            let y = poly.project(&(&cur + &p_corr));
            p_corr = &cur + &p_corr - &y;
            let shifted = &y + &q_corr;
            let d = &shifted - &ball.center;
            let n = d.norm();
            let next = if n <= ball.radius { shifted.clone() } else { &ball.center + d * (ball.radius / n) };
            q_corr = shifted - &next;
            let moved = (&next - &cur).norm();
            cur = next;
            if moved < tol::DISPLACEMENT {
                break;
            }
        }
        cur
    }

    /// Tangent cone at `x`: active inequality normals, equality normals in both
    /// signs, and the outward radius of the ball when it is active.
    pub fn tangent_cone(&self, x: &Point) -> Result<PolyCone> {
        check_point(x, self.dim)?;
        let violation = self.violation(x);
        if violation > tol::ACTIVE {
            return Err(Error::NotInSet { violation });
        }
        let mut rows = Vec::new();
        for h in &self.inequalities {
            if h.excess(x) >= -tol::ACTIVE {
                rows.push(h.a.clone());
            }
        }
        for e in &self.equalities {
            rows.push(e.a.clone());
            rows.push(-&e.a);
        }
        if let Some(ball) = &self.ball {
            let d = x - &ball.center;
            if d.norm() >= ball.radius - tol::ACTIVE {
                if ball.radius > tol::ACTIVE {
                    rows.push(d);
                } else {
                    for i in 0..self.dim {
                        rows.push(basis(self.dim, i));
                        rows.push(-basis(self.dim, i));
                    }
                }
            }
        }
        Ok(PolyCone::new(self.dim, rows))
    }

    /// Normal cone at `x` (polar of the tangent cone).
    pub fn normal_cone(&self, x: &Point) -> Result<PolyCone> {
        Ok(self.tangent_cone(x)?.polar())
    }

    /// Vertices of the polyhedral part that also satisfy the ball constraint.
    pub fn vertices(&self) -> Vec<Point> {
        let mut rows: Vec<&Point> = self.equalities.iter().map(|e| &e.a).collect();
        let mut rhs: Vec<f64> = self.equalities.iter().map(|e| e.b).collect();
        rows.extend(self.inequalities.iter().map(|h| &h.a));
        rhs.extend(self.inequalities.iter().map(|h| h.b));
        let mut out: Vec<Point> = Vec::new();
        for subset in (0..rows.len()).combinations(self.dim) {
            let sub_rows: Vec<&Point> = subset.iter().map(|&i| rows[i]).collect();
            let sub_rhs: Vec<f64> = subset.iter().map(|&i| rhs[i]).collect();
            let Some(v) = solve_square(&sub_rows, &sub_rhs) else { continue };
            if self.violation(&v) <= tol::PROJECTION * (1.0 + v.amax())
                && !out.iter().any(|w| (w - &v).amax() <= 1e-12)
            {
                out.push(v);
            }
        }
        out
    }

    /// A point in the relative interior: the average of the vertices when the piece
    /// is bounded and polyhedral, otherwise the witness.
    pub fn interior_point(&self) -> Point {
        let verts = self.vertices();
        if self.ball.is_none() && !verts.is_empty() && self.is_bounded() {
            let mut sum = Point::zeros(self.dim);
            for v in &verts {
                sum += v;
            }
            sum / verts.len() as f64
        } else {
            self.witness.clone()
        }
    }

    /// True when the recession cone is `{0}`.
    pub fn is_bounded(&self) -> bool {
        if self.ball.is_some() {
            return true;
        }
        let mut rows: Vec<Point> = self.inequalities.iter().map(|h| h.a.clone()).collect();
        for e in &self.equalities {
            rows.push(e.a.clone());
            rows.push(-&e.a);
        }
        PolyCone::new(self.dim, rows).generators().is_empty()
    }
}

/// A finite union of convex pieces.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    dim: usize,
    pieces: Vec<ConvexPiece>,
}

impl ClosedSet {
    pub fn new(pieces: Vec<ConvexPiece>) -> Result<Self> {
        let first = pieces.first().ok_or(Error::EmptySet)?;
        let dim = first.dim;
        for p in &pieces {
            if p.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim });
            }
        }
        Ok(Self { dim, pieces })
    }

    /// A finite set of points.
    pub fn points(points: &[Point]) -> Result<Self> {
        Self::new(points.iter().map(ConvexPiece::point).collect::<Result<_>>()?)
    }

    pub fn single(piece: ConvexPiece) -> Self {
        Self { dim: piece.dim, pieces: vec![piece] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[ConvexPiece] {
        &self.pieces
    }

    /// Nearest point and the index of the piece attaining it; a later piece wins
    /// only when strictly closer.
    pub fn project(&self, x: &Point) -> (Point, usize) {
        let mut best = (self.pieces[0].project(x), 0);
        let mut best_d = (&best.0 - x).norm();
        for (i, piece) in self.pieces.iter().enumerate().skip(1) {
            let p = piece.project(x);
            let d = (&p - x).norm();
            if d < best_d - tol::DISPLACEMENT {
                best = (p, i);
                best_d = d;
            }
        }
        best
    }

    pub fn dist(&self, x: &Point) -> f64 {
        (&self.project(x).0 - x).norm()
    }

    pub fn violation(&self, x: &Point) -> f64 {
        self.pieces.iter().map(|p| p.violation(x)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.len() == self.dim && self.violation(x) <= tol
    }

    /// Indices of the pieces containing `x` to the active tolerance.
    pub fn containing_pieces(&self, x: &Point) -> Vec<usize> {
        (0..self.pieces.len())
            .filter(|&i| self.pieces[i].violation(x) <= tol::ACTIVE)
            .collect()
    }

    /// One tangent cone per piece containing `x`.
    pub fn tangent_cones(&self, x: &Point) -> Result<Vec<PolyCone>> {
        check_point(x, self.dim)?;
        let idx = self.containing_pieces(x);
        if idx.is_empty() {
            return Err(Error::NotInSet { violation: self.violation(x) });
        }
        idx.iter().map(|&i| self.pieces[i].tangent_cone(x)).collect()
    }

    /// Polar of the union of the piece tangent cones, i.e. the intersection of the
    /// piece normal cones.
    pub fn regular_normal_cone(&self, x: &Point) -> Result<PolyCone> {
        let cones = self.tangent_cones(x)?;
        let mut out = PolyCone::whole(self.dim);
        for t in &cones {
            out = out.intersect(&t.polar());
        }
        Ok(out)
    }
}
