use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CorpusEntry, MappingFamily, SequenceFn};
use crate::analysis::{Expr, PiecewiseFn};
use crate::geometry::{point, Ball, ClosedSet, ConvexPiece, Halfspace, Hyperplane, Point, VPolytope};
use crate::problems::EquilibriumProblem;
use crate::sharpness::{AugmentedMapping, Param};
use crate::tol;

fn hs(a: &[f64], b: f64) -> Halfspace {
    Halfspace::new(point(a), b).expect("valid halfspace")
}

fn hp(a: &[f64], b: f64) -> Hyperplane {
    Hyperplane::new(point(a), b).expect("valid hyperplane")
}

fn piece(dim: usize, ineqs: Vec<Halfspace>, eqs: Vec<Hyperplane>) -> ConvexPiece {
    ConvexPiece::new(dim, ineqs, eqs, None).expect("nonempty piece")
}

fn boxed(lo: &[f64], hi: &[f64]) -> ConvexPiece {
    ConvexPiece::from_box(lo, hi).expect("nonempty box")
}

fn points(ps: &[&[f64]]) -> ClosedSet {
    ClosedSet::points(&ps.iter().map(|p| point(p)).collect::<Vec<_>>()).expect("nonempty")
}

fn table(rows: &[(&'static str, bool)]) -> BTreeMap<&'static str, bool> {
    rows.iter().cloned().collect()
}

fn seq(f: impl Fn(usize) -> Vec<Point> + Send + Sync + 'static) -> Option<SequenceFn> {
    Some(Arc::new(f))
}

fn segment(a: &[f64], b: &[f64]) -> VPolytope {
    VPolytope::new(vec![point(a), point(b)]).expect("nonempty")
}

fn single(a: &[f64]) -> VPolytope {
    VPolytope::singleton(point(a))
}

fn x(i: usize) -> Expr {
    Expr::var(i)
}

fn c(v: f64) -> Expr {
    Expr::constant(v)
}

pub(super) fn build_all() -> Vec<CorpusEntry> {
    vec![
        ex3_1(),
        ex3_2(),
        rem3_3(),
        rem5_1(),
        ex4_1(),
        ex4_2(),
        ex4_3(),
        ex4_4(),
        ex4_5(),
        s4_p1(),
        s4_p2(),
        s4_p3(),
        s4_p4(),
        s4_p5(),
        mp_plus(),
    ]
}

fn bare(id: &'static str, provenance: &'static str, problem: EquilibriumProblem) -> CorpusEntry {
    CorpusEntry {
        id,
        provenance,
        problem,
        mapping: None,
        sequence_domain: None,
        sequence: None,
        alpha0: 0.1,
        expected: BTreeMap::new(),
        notes: Vec::new(),
    }
}

// φ(x, y) = e^{x−y} − e^{y−x} on [0, 1].
fn ex3_1() -> CorpusEntry {
    let phi = (x(0) - x(1)).exp() - (x(1) - x(0)).exp();
    let prob = EquilibriumProblem::general(phi, boxed(&[0.0], &[1.0])).with_solution_set(points(&[&[1.0]])).unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true), ("diag_monotone", true), ("convex_in_y", false)]),
        ..bare("ex3_1", "monotone diagonal gradient without convexity in y", prob)
    }
}

// φ(x, y) = e^{y²−x²} − 1 on ℝ.
fn ex3_2() -> CorpusEntry {
    let phi = (x(1).powi(2) - x(0).powi(2)).exp() - 1.0;
    let prob = EquilibriumProblem::general(phi, ConvexPiece::whole(1).unwrap())
        .with_sample_box(&[-2.0], &[2.0])
        .with_solution_set(points(&[&[0.0]]))
        .unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true), ("diag_monotone", true), ("bifunction_monotone", false)]),
        notes: vec!["the source text says \"not non-monotonic\"; the surrounding argument needs \"not monotonic\", which is what is checked"],
        ..bare("ex3_2", "monotone diagonal gradient for a non-monotone bifunction", prob)
    }
}

// φ(x, y) = (1 − x²)(y − x) on [−1, 1].
fn rem3_3() -> CorpusEntry {
    let phi = (c(1.0) - x(0).powi(2)) * (x(1) - x(0));
    let prob = EquilibriumProblem::general(phi, boxed(&[-1.0], &[1.0]))
        .with_solution_set(points(&[&[-1.0], &[1.0]]))
        .unwrap()
        .with_theorem31(true);
    CorpusEntry {
        expected: table(&[("solution_set", true), ("characterization", true)]),
        ..bare("rem3_3", "non-optimization instance meeting the characterization hypotheses", prob)
    }
}

// φ(x, y) = x²y − x³ on ℝ.
fn rem5_1() -> CorpusEntry {
    let phi = x(0).powi(2) * x(1) - x(0).powi(3);
    let prob = EquilibriumProblem::general(phi, ConvexPiece::whole(1).unwrap())
        .with_sample_box(&[-2.0], &[2.0])
        .with_solution_set(points(&[&[0.0]]))
        .unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true), ("diag_monotone", false), ("convex_in_y", true)]),
        ..bare("rem5_1", "convex in y with a non-monotone diagonal gradient", prob)
    }
}

fn ex4_1_mapping(eps: f64) -> AugmentedMapping {
    AugmentedMapping::new("ex4_1", vec![Param::open("eps", eps, 0.0, f64::INFINITY)], move |piece, z| {
        if z.amax() <= tol::ACTIVE {
            single(&[eps, eps])
        } else if piece == 0 {
            segment(&[-eps, 0.0], &[eps, 0.0])
        } else {
            segment(&[0.0, -eps], &[0.0, eps])
        }
    })
}

// min max{0, x₁x₂} + max{0, x₁} + max{0, x₂} over {x₁ ≤ 1, x₂ ≤ 1}.
fn ex4_1() -> CorpusEntry {
    let f = PiecewiseFn::sum(vec![
        PiecewiseFn::pos(x(0) * x(1)),
        PiecewiseFn::pos(x(0)),
        PiecewiseFn::pos(x(1)),
    ]);
    let s = piece(2, vec![hs(&[1.0, 0.0], 1.0), hs(&[0.0, 1.0], 1.0)], vec![]);
    let sol = ClosedSet::new(vec![
        piece(2, vec![hs(&[0.0, 1.0], 0.0)], vec![hp(&[1.0, 0.0], 0.0)]),
        piece(2, vec![hs(&[1.0, 0.0], 0.0)], vec![hp(&[0.0, 1.0], 0.0)]),
    ])
    .unwrap();
    let prob = EquilibriumProblem::from_mp(f, s).with_solution_set(sol).unwrap();
    // S ∖ Ω_ε for ε = 0.1 as four closed pieces.
    let eps = 0.1;
    let cap = [hs(&[1.0, 0.0], 1.0), hs(&[0.0, 1.0], 1.0)];
    let domain = ClosedSet::new(
        [
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, -1.0], 0.0),
            hs(&[1.0, 0.0], -eps),
            hs(&[0.0, 1.0], -eps),
        ]
        .into_iter()
        .map(|h| piece(2, vec![cap[0].clone(), cap[1].clone(), h], vec![]))
        .collect(),
    )
    .unwrap();
    let sequence = seq(|n| {
        (1..=n)
            .map(|k| {
                let t = 1.0 / (k as f64 + 1.0);
                match k % 4 {
                    0 => point(&[-0.5 * t, -0.5]),
                    1 => point(&[-0.5, -0.5 * t]),
                    2 => point(&[t, 0.5]),
                    _ => point(&[t, -0.3]),
                }
            })
            .collect()
    });
    CorpusEntry {
        mapping: Some(MappingFamily { param: "eps", default: eps, build: ex4_1_mapping }),
        sequence_domain: Some(domain),
        sequence,
        alpha0: 0.05,
        expected: table(&[("solution_set", true), ("weak_sharp", false), ("augmented", true)]),
        notes: vec!["the augmented certificate is claimed for sequences avoiding the open square (−0.1, 0)²"],
        ..bare("ex4_1", "nonsmooth MP whose solution set is two half-lines", prob)
    }
}

fn ex4_2_mapping(lambda: f64) -> AugmentedMapping {
    AugmentedMapping::new("ex4_2", vec![Param::open("lambda", lambda, 0.0, 0.5)], move |piece, _| {
        if piece == 0 {
            single(&[lambda, lambda])
        } else {
            single(&[-lambda, lambda])
        }
    })
}

// VIP with F(x) = (cos x₁, e^{x₂}) on [0, π/2] × [0, ∞).
fn ex4_2() -> CorpusEntry {
    let s = boxed(&[0.0, 0.0], &[FRAC_PI_2, f64::INFINITY]);
    let prob = EquilibriumProblem::from_vip(vec![x(0).cos(), x(1).exp()], s)
        .unwrap()
        .with_sample_box(&[0.0, 0.0], &[FRAC_PI_2, 2.0])
        .with_solution_set(points(&[&[0.0, 0.0], &[FRAC_PI_2, 0.0]]))
        .unwrap();
    // Points on the correct side of the bisector x₁ = π/4 for the case split.
    let domain = ClosedSet::new(vec![
        piece(2, vec![hs(&[1.0, 0.0], FRAC_PI_4), hs(&[-1.0, 0.0], 0.0), hs(&[0.0, -1.0], 0.0)], vec![]),
        piece(
            2,
            vec![hs(&[-1.0, 0.0], -FRAC_PI_4), hs(&[1.0, 0.0], FRAC_PI_2), hs(&[0.0, -1.0], 0.0)],
            vec![],
        ),
    ])
    .unwrap();
    let sequence = seq(|n| (1..=n).map(|k| point(&[FRAC_PI_2 - 1.0 / k as f64, 1.0 / k as f64])).collect());
    CorpusEntry {
        mapping: Some(MappingFamily { param: "lambda", default: 0.25, build: ex4_2_mapping }),
        sequence_domain: Some(domain),
        sequence,
        alpha0: 0.01,
        expected: table(&[("solution_set", true), ("weak_sharp", false), ("augmented", true)]),
        ..bare("ex4_2", "VIP with two isolated solutions", prob)
    }
}

fn ex4_3_mapping(lambda: f64) -> AugmentedMapping {
    AugmentedMapping::new("ex4_3", vec![Param::open("lambda", lambda, 0.0, 1.0)], move |piece, _| {
        if piece == 0 {
            single(&[lambda, -lambda])
        } else {
            single(&[lambda, lambda])
        }
    })
}

// Saddle point of e^{x₁²} + x₂² over [0, 1] × [−1, 1].
fn ex4_3() -> CorpusEntry {
    let varphi = PiecewiseFn::atom(x(0).powi(2).exp() + x(1).powi(2));
    let prob = EquilibriumProblem::from_spp(varphi, &boxed(&[0.0], &[1.0]), &boxed(&[-1.0], &[1.0]))
        .unwrap()
        .with_solution_set(points(&[&[0.0, 1.0], &[0.0, -1.0]]))
        .unwrap();
    let domain = ClosedSet::single(piece(
        2,
        vec![
            hs(&[1.0, 1.0], 1.0),
            hs(&[1.0, -1.0], 1.0),
            hs(&[-1.0, 0.0], 0.0),
        ],
        vec![],
    ));
    let sequence = seq(|n| (1..=n).map(|k| point(&[1.0 / k as f64, 1.0 - 1.0 / k as f64])).collect());
    CorpusEntry {
        mapping: Some(MappingFamily { param: "lambda", default: 0.5, build: ex4_3_mapping }),
        sequence_domain: Some(domain),
        sequence,
        alpha0: 0.01,
        expected: table(&[
            ("solution_set", true),
            ("weak_sharp", false),
            ("strong_nondegenerate", false),
            ("augmented", true),
        ]),
        ..bare("ex4_3", "saddle-point problem with two isolated saddle points", prob)
    }
}

fn ex4_4_mapping(lambda: f64) -> AugmentedMapping {
    AugmentedMapping::new("ex4_4", vec![Param::open("lambda", lambda, 0.0, 0.5)], move |_, _| {
        single(&[lambda, lambda])
    })
}

// Two-player game with f₁ = e^{x₁−x₂} − e^{x₂−x₁}, f₂ = e^{x₂²−x₁²} − 1 on [0, 1]².
fn ex4_4() -> CorpusEntry {
    let f1 = PiecewiseFn::atom((x(0) - x(1)).exp() - (x(1) - x(0)).exp());
    let f2 = PiecewiseFn::atom((x(1).powi(2) - x(0).powi(2)).exp() - 1.0);
    let prob = EquilibriumProblem::from_nep(vec![f1, f2], &[(0.0, 1.0), (0.0, 1.0)])
        .unwrap()
        .with_solution_set(points(&[&[0.0, 0.0]]))
        .unwrap();
    let domain = ClosedSet::single(piece(
        2,
        vec![
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, -1.0], 0.0),
            hs(&[1.0, 0.0], 1.0),
            hs(&[0.0, 1.0], 1.0),
            hs(&[-1.0, 1.0], 0.0),
        ],
        vec![],
    ));
    let sequence = seq(|n| (1..=n).map(|k| point(&[1.0 / k as f64, 0.5 / k as f64])).collect());
    CorpusEntry {
        mapping: Some(MappingFamily { param: "lambda", default: 0.25, build: ex4_4_mapping }),
        sequence_domain: Some(domain),
        sequence,
        alpha0: 0.01,
        expected: table(&[
            ("solution_set", true),
            ("weak_sharp", false),
            ("strong_nondegenerate", false),
            ("augmented", true),
        ]),
        notes: vec!["the augmented certificate is claimed for sequences with x₂ ≤ x₁"],
        ..bare("ex4_4", "Nash game with a unique degenerate equilibrium", prob)
    }
}

fn ex4_5_mapping(lambda: f64) -> AugmentedMapping {
    // cos(π/3) = 1/2 exactly; the floating cosine rounds below it.
    let p = Param::new("lambda", lambda, 0.0, 0.5, false, true);
    AugmentedMapping::new("ex4_5", vec![p], move |_, z| {
        if z.amax() <= tol::ACTIVE {
            single(&[lambda, lambda])
        } else {
            single(&[lambda, 0.0])
        }
    })
}

// min sin x₁ + max{0, x₂} over [0, π/3] × [−1, ∞).
fn ex4_5() -> CorpusEntry {
    let f = PiecewiseFn::sum(vec![PiecewiseFn::atom(x(0).sin()), PiecewiseFn::pos(x(1))]);
    let s = boxed(&[0.0, -1.0], &[FRAC_PI_3, f64::INFINITY]);
    let sol = ClosedSet::single(piece(
        2,
        vec![hs(&[0.0, 1.0], 0.0), hs(&[0.0, -1.0], 1.0)],
        vec![hp(&[1.0, 0.0], 0.0)],
    ));
    let prob = EquilibriumProblem::from_mp(f, s)
        .with_sample_box(&[0.0, -1.0], &[FRAC_PI_3, 1.0])
        .with_solution_set(sol)
        .unwrap();
    let sequence = seq(|n| {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        (0..n).map(|_| point(&[rng.gen_range(1e-3..=FRAC_PI_3), rng.gen_range(-1.0..=1.0)])).collect()
    });
    CorpusEntry {
        mapping: Some(MappingFamily { param: "lambda", default: 0.5, build: ex4_5_mapping }),
        sequence,
        alpha0: 0.5,
        expected: table(&[("solution_set", true), ("weak_sharp", true), ("augmented", true)]),
        ..bare("ex4_5", "nonconvex MP with a weakly sharp solution segment", prob)
    }
}

// φ(x, y) = x₁²y₁² + x₂²y₂² − x₁⁴ − y₂⁴ on [0, 1] × [−1, 1].
fn s4_p1() -> CorpusEntry {
    let phi = x(0).powi(2) * x(2).powi(2) + x(1).powi(2) * x(3).powi(2) - x(0).powi(4) - x(3).powi(4);
    let prob = EquilibriumProblem::general(phi, boxed(&[0.0, -1.0], &[1.0, 1.0]))
        .with_solution_set(points(&[&[0.0, 1.0], &[0.0, -1.0]]))
        .unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true)]),
        ..bare("s4_p1", "quartic bifunction on a box, two isolated solutions", prob)
    }
}

// φ(x, y) = e^{y₁²−x₁²} + y₂ − x₂ − 1 on the nonnegative orthant.
fn s4_p2() -> CorpusEntry {
    let phi = (x(2).powi(2) - x(0).powi(2)).exp() + x(3) - x(1) - 1.0;
    let s = boxed(&[0.0, 0.0], &[f64::INFINITY, f64::INFINITY]);
    let prob = EquilibriumProblem::general(phi, s).with_solution_set(points(&[&[0.0, 0.0]])).unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true)]),
        ..bare("s4_p2", "exponential bifunction on the orthant", prob)
    }
}

// min x₁ ln(1 + x₂) + ½(x₁ − 1)²(x₂ − 1)² over the quarter disk.
fn s4_p3() -> CorpusEntry {
    let f = PiecewiseFn::atom(x(0) * x(1).ln_1p() + 0.5 * (x(0) - 1.0).powi(2) * (x(1) - 1.0).powi(2));
    let disk = Ball::new(Point::zeros(2), 1.0).unwrap();
    let s = ConvexPiece::new(2, vec![hs(&[-1.0, 0.0], 0.0), hs(&[0.0, -1.0], 0.0)], vec![], Some(disk)).unwrap();
    let prob = EquilibriumProblem::from_mp(f, s).with_solution_set(points(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true)]),
        ..bare("s4_p3", "MP over the quarter disk x₁² + x₂² ≤ 1, x ≥ 0", prob)
    }
}

// min sin x₁ cos x₂ over [0, π/2]².
fn s4_p4() -> CorpusEntry {
    let f = PiecewiseFn::atom(x(0).sin() * x(1).cos());
    let s = boxed(&[0.0, 0.0], &[FRAC_PI_2, FRAC_PI_2]);
    let sol = ClosedSet::new(vec![
        piece(2, vec![hs(&[0.0, -1.0], 0.0), hs(&[0.0, 1.0], FRAC_PI_2)], vec![hp(&[1.0, 0.0], 0.0)]),
        piece(2, vec![hs(&[-1.0, 0.0], 0.0), hs(&[1.0, 0.0], FRAC_PI_2)], vec![hp(&[0.0, 1.0], FRAC_PI_2)]),
    ])
    .unwrap();
    let prob = EquilibriumProblem::from_mp(f, s).with_solution_set(sol).unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true)]),
        ..bare("s4_p4", "trigonometric MP whose solution set is two edges of the square", prob)
    }
}

// VIP with F(x) = (−x₁e^{1−x₁²}, x₂(x₂² − 1)) on [−1, 1]².
fn s4_p5() -> CorpusEntry {
    let f1 = -(x(0) * (c(1.0) - x(0).powi(2)).exp());
    let f2 = x(1) * (x(1).powi(2) - 1.0);
    let prob = EquilibriumProblem::from_vip(vec![f1, f2], boxed(&[-1.0, -1.0], &[1.0, 1.0]))
        .unwrap()
        .with_solution_set(points(&[&[-1.0, -1.0], &[-1.0, 1.0], &[1.0, -1.0], &[1.0, 1.0]]))
        .unwrap();
    CorpusEntry {
        expected: table(&[("solution_set", true)]),
        notes: vec!["the listed corners are solutions, but (0,0), (±1,0) and (0,±1) solve the problem too"],
        ..bare("s4_p5", "VIP on the square with the four corners listed as solutions", prob)
    }
}

// min max{0, x₁} over [−1, 1]².
fn mp_plus() -> CorpusEntry {
    let f = PiecewiseFn::pos(x(0));
    let prob = EquilibriumProblem::from_mp(f, boxed(&[-1.0, -1.0], &[1.0, 1.0]))
        .with_solution_set(ClosedSet::single(boxed(&[-1.0, -1.0], &[0.0, 1.0])))
        .unwrap()
        .with_theorem31(true);
    let sequence = seq(|n| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        (0..n).map(|_| point(&[rng.gen_range(1e-3..=1.0), rng.gen_range(-1.0..=1.0)])).collect()
    });
    CorpusEntry {
        sequence,
        alpha0: 0.5,
        expected: table(&[
            ("solution_set", true),
            ("weak_sharp", true),
            ("characterization", true),
            ("eq_3_10", false),
        ]),
        ..bare("mp_plus", "convex piecewise-linear MP, the convex part of the weakly sharp example", prob)
    }
}
