//! Equilibrium problems `EP(φ, S)`: find `x̄ ∈ S` with `φ(x̄, y) ≥ 0` for all `y ∈ S`.

mod bifunction;
mod checks;
mod sampling;

use std::fmt;
use std::sync::Arc;

pub use bifunction::{Bifunction, Kind};
pub use checks::{
    characterization_check, check_solution, check_solution_sampled, check_stationary, stationary_intersection,
    StationaryVerdict,
};
pub use sampling::{
    convexity_sample, grid_pairs, halton, monotone_report, monotone_sample, sample_pairs, sample_points,
    subdiff_monotone_report, subdiff_monotone_sample, ConvexityReport, MonotoneReport, SubdiffMonotoneReport,
};

use crate::analysis::{Expr, PiecewiseFn, SubdiffSet};
use crate::geometry::{check_point, ClosedSet, ConvexPiece, Halfspace, Hyperplane, Point};
use crate::{Error, Result};

/// Closed-form projection onto the solution set, returning the projected point.
pub type Projector = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// An equilibrium problem over a convex feasible set.
#[derive(Clone)]
pub struct EquilibriumProblem {
    dim: usize,
    feasible: ConvexPiece,
    bifunction: Bifunction,
    solution_set: Option<ClosedSet>,
    projector: Option<Projector>,
    sample_lo: Vec<f64>,
    sample_hi: Vec<f64>,
    local_lipschitz: bool,
    theorem31: bool,
}

impl fmt::Debug for EquilibriumProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquilibriumProblem")
            .field("dim", &self.dim)
            .field("kind", &self.kind())
            .field("feasible", &self.feasible)
            .field("solution_set", &self.solution_set)
            .field("projector", &self.projector.is_some())
            .finish()
    }
}

impl EquilibriumProblem {
    pub fn new(feasible: ConvexPiece, bifunction: Bifunction) -> Self {
        let dim = feasible.dim();
        let (sample_lo, sample_hi) = default_box(&feasible);
        Self {
            dim,
            feasible,
            bifunction,
            solution_set: None,
            projector: None,
            sample_lo,
            sample_hi,
            local_lipschitz: true,
            theorem31: false,
        }
    }

    /// `φ(x, y) = f(y) − f(x)`.
    pub fn from_mp(f: PiecewiseFn, s: ConvexPiece) -> Self {
        Self::new(s, Bifunction::Mp(f))
    }

    /// `φ(x, y) = ⟨F(x), y − x⟩`.
    pub fn from_vip(field: Vec<Expr>, s: ConvexPiece) -> Result<Self> {
        if field.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: field.len() });
        }
        Ok(Self::new(s, Bifunction::Vip(field)))
    }

    /// Saddle bifunction over `S₁ × S₂`.
    pub fn from_spp(varphi: PiecewiseFn, s1: &ConvexPiece, s2: &ConvexPiece) -> Result<Self> {
        let split = s1.dim();
        let s = product_piece(s1, s2)?;
        Ok(Self::new(s, Bifunction::Spp { varphi, split }))
    }

    /// Nash game where player `i` picks coordinate `i` from `intervals[i]`.
    pub fn from_nep(players: Vec<PiecewiseFn>, intervals: &[(f64, f64)]) -> Result<Self> {
        if players.len() != intervals.len() {
            return Err(Error::DimensionMismatch { expected: intervals.len(), got: players.len() });
        }
        let lo: Vec<f64> = intervals.iter().map(|i| i.0).collect();
        let hi: Vec<f64> = intervals.iter().map(|i| i.1).collect();
        let s = ConvexPiece::from_box(&lo, &hi)?;
        Ok(Self::new(s, Bifunction::Nep { players }))
    }

    /// A bifunction given as an expression over `(x, y)`.
    pub fn general(phi: Expr, s: ConvexPiece) -> Self {
        Self::new(s, Bifunction::General(phi))
    }

    pub fn with_solution_set(mut self, set: ClosedSet) -> Result<Self> {
        if set.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: set.dim() });
        }
        self.solution_set = Some(set);
        Ok(self)
    }

    pub fn with_projector(mut self, p: Projector) -> Self {
        self.projector = Some(p);
        self
    }

    /// Box used for sampling points of `S` (needed when `S` is unbounded).
    pub fn with_sample_box(mut self, lo: &[f64], hi: &[f64]) -> Self {
        self.sample_lo = lo.to_vec();
        self.sample_hi = hi.to_vec();
        self
    }

    /// Declares whether `φ(x, ·)` is locally Lipschitz or convex, which makes every
    /// solution stationary.
    pub fn with_local_lipschitz(mut self, flag: bool) -> Self {
        self.local_lipschitz = flag;
        self
    }

    /// Declares convexity of `φ(x, ·)` and constancy of `φ(x̄, ·)` over the solution set.
    pub fn with_theorem31(mut self, flag: bool) -> Self {
        self.theorem31 = flag;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> Kind {
        self.bifunction.kind()
    }

    pub fn feasible(&self) -> &ConvexPiece {
        &self.feasible
    }

    pub fn bifunction(&self) -> &Bifunction {
        &self.bifunction
    }

    pub fn solution_set(&self) -> Option<&ClosedSet> {
        self.solution_set.as_ref()
    }

    pub fn has_projector(&self) -> bool {
        self.projector.is_some()
    }

    pub fn sample_box(&self) -> (&[f64], &[f64]) {
        (&self.sample_lo, &self.sample_hi)
    }

    pub fn local_lipschitz(&self) -> bool {
        self.local_lipschitz
    }

    pub fn theorem31(&self) -> bool {
        self.theorem31
    }

    pub fn phi(&self, x: &Point, y: &Point) -> f64 {
        self.bifunction.eval(x, y)
    }

    /// `∂_y φ(x, x)`.
    pub fn diag_subdiff(&self, x: &Point) -> SubdiffSet {
        self.bifunction.diag_subdiff(x)
    }

    /// The objective of an MP instance.
    pub fn objective(&self) -> Option<&PiecewiseFn> {
        match &self.bifunction {
            Bifunction::Mp(f) => Some(f),
            _ => None,
        }
    }

    /// `F(x)` of a VIP instance.
    pub fn field(&self, x: &Point) -> Option<Point> {
        match &self.bifunction {
            Bifunction::Vip(field) => Some(Point::from_iterator(self.dim, field.iter().map(|e| e.eval(x.as_slice())))),
            _ => None,
        }
    }

    pub fn require_kind(&self, kind: Kind) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(Error::WrongKind { expected: kind.label(), got: self.kind().label() })
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        check_point(x, self.dim)
    }

    /// Fails unless `x ∈ S` to the membership tolerance.
    pub fn require_feasible(&self, x: &Point) -> Result<()> {
        self.check_point(x)?;
        let violation = self.feasible.violation(x);
        if violation > crate::tol::MEMBERSHIP {
            return Err(Error::NotInSet { violation });
        }
        Ok(())
    }

    /// `P_S̄(x)`, from the closed-form projector when one is declared.
    pub fn project_solution(&self, x: &Point) -> Result<Point> {
        self.check_point(x)?;
        if let Some(p) = &self.projector {
            return Ok(p(x));
        }
        let set = self.solution_set.as_ref().ok_or(Error::MissingSolutionSet)?;
        Ok(set.project(x).0)
    }

    pub fn dist_solution(&self, x: &Point) -> Result<f64> {
        Ok((self.project_solution(x)? - x).norm())
    }

    pub fn in_solution_set(&self, x: &Point) -> Result<bool> {
        let set = self.solution_set.as_ref().ok_or(Error::MissingSolutionSet)?;
        Ok(set.dist(x) <= crate::tol::OFF_SET)
    }

    /// Normal cone of `S` at `x`.
    pub fn normal_cone(&self, x: &Point) -> Result<crate::geometry::PolyCone> {
        self.feasible.normal_cone(x)
    }

    /// Tangent cone of `S` at `x`.
    pub fn tangent_cone(&self, x: &Point) -> Result<crate::geometry::PolyCone> {
        self.feasible.tangent_cone(x)
    }
}

fn default_box(s: &ConvexPiece) -> (Vec<f64>, Vec<f64>) {
    let n = s.dim();
    let mut lo = vec![f64::NEG_INFINITY; n];
    let mut hi = vec![f64::INFINITY; n];
    for h in s.inequalities() {
        let a = h.normal();
        let nz: Vec<usize> = (0..n).filter(|&i| a[i] != 0.0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            let bound = h.offset() / a[i];
            if a[i] > 0.0 {
                hi[i] = hi[i].min(bound);
            } else {
                lo[i] = lo[i].max(bound);
            }
        }
    }
    if let Some(b) = s.ball() {
        for i in 0..n {
            lo[i] = lo[i].max(b.center[i] - b.radius);
            hi[i] = hi[i].min(b.center[i] + b.radius);
        }
    }
    for i in 0..n {
        match (lo[i].is_finite(), hi[i].is_finite()) {
            (true, true) => {}
            (true, false) => hi[i] = lo[i] + 2.0,
            (false, true) => lo[i] = hi[i] - 2.0,
            (false, false) => {
                lo[i] = -2.0;
                hi[i] = 2.0;
            }
        }
    }
    (lo, hi)
}

/// `S₁ × S₂` as one piece (balls are not supported in products).
fn product_piece(a: &ConvexPiece, b: &ConvexPiece) -> Result<ConvexPiece> {
    if a.ball().is_some() || b.ball().is_some() {
        return Err(Error::InvalidParameter("product of pieces with balls".into()));
    }
    let n = a.dim() + b.dim();
    let lift = |v: &Point, offset: usize| {
        let mut w = Point::zeros(n);
        w.rows_mut(offset, v.len()).copy_from(v);
        w
    };
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (piece, off) in [(a, 0), (b, a.dim())] {
        for h in piece.inequalities() {
            ineqs.push(Halfspace::new(lift(h.normal(), off), h.offset())?);
        }
        for e in piece.equalities() {
            eqs.push(Hyperplane::new(lift(e.normal(), off), e.offset())?);
        }
    }
    ConvexPiece::new(n, ineqs, eqs, None)
}
