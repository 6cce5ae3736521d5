use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::EquilibriumProblem;
use crate::geometry::{wire::{opt_point_serde, point_serde}, Point};

/// The `i`-th Halton point in `[0, 1)^dim` (bases 2, 3, 5, 7).
pub fn halton(i: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..dim)
        .map(|d| {
            let base = PRIMES[d];
            let mut f = 1.0;
            let mut r = 0.0;
            let mut k = i + 1;
            while k > 0 {
                f /= base as f64;
                r += f * (k % base) as f64;
                k /= base;
            }
            r
        })
        .collect()
}

/// `count` Halton points of the sample box projected onto `S`, followed by the
/// vertices of `S` and sample points of the declared solution set.
pub fn sample_points(prob: &EquilibriumProblem, count: usize) -> Vec<Point> {
    let (lo, hi) = prob.sample_box();
    let n = prob.dim();
    let mut out: Vec<Point> = (0..count)
        .map(|i| {
            let h = halton(i, n);
            let p = Point::from_iterator(n, (0..n).map(|d| lo[d] + h[d] * (hi[d] - lo[d])));
            prob.feasible().project(&p)
        })
        .collect();
    out.extend(prob.feasible().vertices());
    if let Some(set) = prob.solution_set() {
        for piece in set.pieces() {
            out.push(piece.interior_point());
            out.extend(piece.vertices());
        }
    }
    out
}

/// `count` seeded uniform pairs from the sample box, projected onto `S`.
pub fn sample_pairs(prob: &EquilibriumProblem, count: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = prob.sample_box();
    let n = prob.dim();
    let draw = |rng: &mut ChaCha8Rng| {
        let p = Point::from_iterator(n, (0..n).map(|d| rng.gen_range(lo[d]..=hi[d])));
        prob.feasible().project(&p)
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

/// All ordered pairs from a `per_axis`-point grid over the sample box.
pub fn grid_pairs(prob: &EquilibriumProblem, per_axis: usize) -> Vec<(Point, Point)> {
    let (lo, hi) = prob.sample_box();
    let n = prob.dim();
    let total = per_axis.pow(n as u32);
    let pts: Vec<Point> = (0..total)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(n);
            for d in 0..n {
                let j = idx % per_axis;
                idx /= per_axis;
                let t = if per_axis == 1 { 0.5 } else { j as f64 / (per_axis - 1) as f64 };
                c.push(lo[d] + t * (hi[d] - lo[d]));
            }
            prob.feasible().project(&Point::from_vec(c))
        })
        .collect();
    let mut out = Vec::with_capacity(total * total);
    for a in &pts {
        for b in &pts {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    #[serde(with = "point_serde")]
    pub x: Point,
    #[serde(with = "point_serde")]
    pub y: Point,
}

/// Worst violations of `φ(x,y) + φ(y,x) ≤ 0` and of `φ(x,y) ≥ 0 ⇒ φ(y,x) ≤ 0`.
#[derive(Clone, Debug, Serialize)]
pub struct MonotoneReport {
    pub pairs: usize,
    pub monotone_violation: f64,
    pub monotone_witness: Option<Witness>,
    pub pseudo_violation: f64,
    pub pseudo_witness: Option<Witness>,
}

impl MonotoneReport {
    pub fn monotone(&self) -> bool {
        self.monotone_violation <= 1e-12
    }

    pub fn pseudo_monotone(&self) -> bool {
        self.pseudo_violation <= 1e-12
    }
}

pub fn monotone_report(prob: &EquilibriumProblem, pairs: &[(Point, Point)]) -> MonotoneReport {
    let mut rep = MonotoneReport {
        pairs: pairs.len(),
        monotone_violation: 0.0,
        monotone_witness: None,
        pseudo_violation: 0.0,
        pseudo_witness: None,
    };
    for (x, y) in pairs {
        let a = prob.phi(x, y);
        let b = prob.phi(y, x);
        if a + b > rep.monotone_violation {
            rep.monotone_violation = a + b;
            rep.monotone_witness = Some(Witness { x: x.clone(), y: y.clone() });
        }
        for (p, q, u, v) in [(x, y, a, b), (y, x, b, a)] {
            if u >= 0.0 && v > rep.pseudo_violation {
                rep.pseudo_violation = v;
                rep.pseudo_witness = Some(Witness { x: p.clone(), y: q.clone() });
            }
        }
    }
    rep
}

pub fn monotone_sample(prob: &EquilibriumProblem, pair_count: usize, seed: u64) -> MonotoneReport {
    monotone_report(prob, &sample_pairs(prob, pair_count, seed))
}

/// Worst violation of `⟨u_x − u_z, x − z⟩ ≥ 0` over all vertex selections.
#[derive(Clone, Debug, Serialize)]
pub struct SubdiffMonotoneReport {
    pub pairs: usize,
    pub violation: f64,
    pub witness: Option<Witness>,
}

impl SubdiffMonotoneReport {
    pub fn monotone(&self) -> bool {
        self.violation <= 1e-12
    }
}

pub fn subdiff_monotone_report(prob: &EquilibriumProblem, pairs: &[(Point, Point)]) -> SubdiffMonotoneReport {
    let mut rep = SubdiffMonotoneReport { pairs: pairs.len(), violation: 0.0, witness: None };
    for (x, z) in pairs {
        let ux = prob.diag_subdiff(x);
        let uz = prob.diag_subdiff(z);
        let d = x - z;
        for a in ux.vertices() {
            for b in uz.vertices() {
                let v = -(a - b).dot(&d);
                if v > rep.violation {
                    rep.violation = v;
                    rep.witness = Some(Witness { x: x.clone(), y: z.clone() });
                }
            }
        }
    }
    rep
}

pub fn subdiff_monotone_sample(prob: &EquilibriumProblem, pair_count: usize, seed: u64) -> SubdiffMonotoneReport {
    subdiff_monotone_report(prob, &sample_pairs(prob, pair_count, seed))
}

/// Worst midpoint-convexity violation of `y ↦ φ(x, y)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub triples: usize,
    pub violation: f64,
    #[serde(with = "opt_point_serde")]
    pub witness_x: Option<Point>,
}


impl ConvexityReport {
    pub fn convex(&self) -> bool {
        self.violation <= 1e-12
    }
}

pub fn convexity_sample(prob: &EquilibriumProblem, count: usize, seed: u64) -> ConvexityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let pts = sample_pairs(prob, count, seed);
    let mut rep = ConvexityReport { triples: count, violation: 0.0, witness_x: None };
    for (y, z) in &pts {
        let i = rng.gen_range(0..pts.len());
        let x = &pts[i].0;
        let mid = (y + z) * 0.5;
        let gap = prob.phi(x, &mid) - 0.5 * (prob.phi(x, y) + prob.phi(x, z));
        if gap > rep.violation {
            rep.violation = gap;
            rep.witness_x = Some(x.clone());
        }
    }
    rep
}
