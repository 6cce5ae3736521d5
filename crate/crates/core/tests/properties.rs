use std::f64::consts::FRAC_PI_3;

use itertools::Itertools;
use nalgebra::DMatrix;
use proptest::prelude::*;
use sharpeq::analysis::{subdiff, Expr, PiecewiseFn};
use sharpeq::corpus;
use sharpeq::geometry::{
    ball_in_sum, dist, point, project_piece, unit_directions, ClosedSet, ConvexPiece, Halfspace, PolyCone, VPolytope,
};
use sharpeq::problems::{check_stationary, EquilibriumProblem};
use sharpeq::sharpness::{
    check_augmented_weak_sharp, check_weak_sharp, check_weak_sharp_mp, psi, psi_selection, solution_samples,
    AugmentedConfig, AugmentedMapping,
};
use sharpeq::solvers::{diag_subgradient_run, extragradient_run, proximal_point_run, rho, StepRule};
use sharpeq::Point;

fn problem(id: &str) -> &'static EquilibriumProblem {
    &corpus::get(id).unwrap().problem
}

fn vec_in(dim: usize, r: f64) -> impl Strategy<Value = Point> {
    prop::collection::vec(-r..r, dim).prop_map(Point::from_vec)
}

/// A dimension (2 or 3), a cone of 1..=n+2 rows in general position, and a
/// query vector.
fn cone_case() -> impl Strategy<Value = (PolyCone, Point)> {
    (2usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(vec_in(n, 1.0), 1..=n + 2), vec_in(n, 2.0)))
        .prop_filter("well-conditioned facets", |(_, rows, _)| {
            rows.iter().all(|r| r.norm() > 1e-3) && well_conditioned(rows, 1e-2)
        })
        .prop_map(|(n, rows, v)| (PolyCone::new(n, rows), v))
}

/// A nonempty polyhedral piece: halfspaces through points near a common witness.
fn piece_case() -> impl Strategy<Value = ConvexPiece> {
    (vec_in(2, 1.0), prop::collection::vec((vec_in(2, 1.0), 0.0..1.0), 1..5)).prop_filter_map(
        "nondegenerate normals",
        |(w, cuts)| {
            let hs = cuts
                .into_iter()
                .filter(|(a, _)| a.norm() > 1e-2)
                .map(|(a, slack)| Halfspace::new(a.clone(), a.dot(&w) + slack).unwrap())
                .collect::<Vec<_>>();
            ConvexPiece::new(2, hs, Vec::new(), None).ok()
        },
    )
}

/// Every `min(m, n)` normalized rows have smallest singular value at least
/// `floor`; by interlacing the same then holds for every smaller subset.
fn well_conditioned(rows: &[Point], floor: f64) -> bool {
    let n = rows[0].len();
    let unit: Vec<Point> = rows.iter().map(|r| r / r.norm()).collect();
    unit.iter().combinations(unit.len().min(n)).all(|sub| {
        let m = DMatrix::from_fn(sub.len(), n, |i, j| sub[i][j]);
        m.svd(false, false).singular_values.iter().cloned().fold(f64::INFINITY, f64::min) >= floor
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moreau_decomposition((k, v) in cone_case()) {
        let p = k.project(&v);
        let q = k.polar().project(&v);
        prop_assert!((v.norm_squared() - p.norm_squared() - q.norm_squared()).abs() <= 1e-8);
        prop_assert!(p.dot(&q).abs() <= 1e-8);
        prop_assert!((&v - &p - &q).norm() <= 1e-8);
    }

    #[test]
    fn face_enumeration_matches_dykstra((k, v) in cone_case()) {
        prop_assert!((k.project(&v) - k.project_dykstra(&v)).norm() <= 1e-8);
    }

    #[test]
    fn bipolar_generators((k, _v) in cone_case()) {
        let kk = k.polar().polar();
        for g in k.generators() {
            prop_assert!(kk.contains(g, 1e-9));
        }
        for g in kk.generators() {
            prop_assert!(k.contains(g, 1e-9));
        }
    }

    #[test]
    fn piece_projection_idempotent(piece in piece_case(), x in vec_in(2, 3.0)) {
        let p = project_piece(&piece, &x);
        prop_assert!(piece.contains(&p, 1e-9));
        prop_assert!((project_piece(&piece, &p) - &p).norm() <= 1e-10);
    }

    #[test]
    fn piece_projection_nonexpansive(piece in piece_case(), x in vec_in(2, 3.0), y in vec_in(2, 3.0)) {
        let d = (project_piece(&piece, &x) - project_piece(&piece, &y)).norm();
        prop_assert!(d <= (&x - &y).norm() + 1e-9);
    }

    #[test]
    fn zero_distance_iff_contained(
        lo in prop::collection::vec(-1.0..0.0, 2),
        width in prop::collection::vec(0.1..1.0, 2),
        shift in vec_in(2, 1.0),
        x in vec_in(2, 3.0),
    ) {
        let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
        let a = ConvexPiece::from_box(&lo, &hi).unwrap();
        let lo2: Vec<f64> = lo.iter().zip(shift.iter()).map(|(l, s)| l + s).collect();
        let hi2: Vec<f64> = hi.iter().zip(shift.iter()).map(|(h, s)| h + s).collect();
        let b = ConvexPiece::from_box(&lo2, &hi2).unwrap();
        let set = ClosedSet::new(vec![a, b]).unwrap();
        let d = dist(&set, &x);
        let inside = set.pieces().iter().any(|p| p.contains(&x, 1e-8));
        if d <= 1e-8 {
            prop_assert!(inside);
        } else if d > 1e-6 {
            prop_assert!(!inside);
        }
        let (p, _) = set.project(&x);
        prop_assert!(dist(&set, &p) <= 1e-8 && set.pieces().iter().any(|q| q.contains(&p, 1e-8)));
    }

    #[test]
    fn convex_subgradient_inequality(x in vec_in(2, 1.0), y in vec_in(2, 1.0)) {
        let f_plus = problem("mp_plus").objective().unwrap();
        let a = Expr::var(0);
        let b = Expr::var(1);
        let g = PiecewiseFn::max(vec![
            PiecewiseFn::atom(&a + &b),
            PiecewiseFn::atom(a.powi(2)),
            PiecewiseFn::abs(b.clone()),
        ]);
        for f in [f_plus, &g] {
            let fx = f.value(x.as_slice());
            let fy = f.value(y.as_slice());
            for u in subdiff(f, &x).vertices() {
                prop_assert!(fy >= fx + u.dot(&(&y - &x)) - 1e-7);
            }
        }
    }

    #[test]
    fn continuous_across_kinks(t in -1.0..1.0f64, s in -1.0..1.0f64, h in 1e-6..1e-2f64) {
        let f = problem("ex4_1").objective().unwrap();
        for (a, b) in [(point(&[-h, t]), point(&[h, t])), (point(&[s, -h]), point(&[s, h]))] {
            let mid = (&a + &b) / 2.0;
            let lip = [&a, &b, &mid]
                .iter()
                .flat_map(|p| subdiff(f, p).vertices().iter().map(|v| v.norm()).collect::<Vec<_>>())
                .fold(0.0, f64::max);
            let jump = (f.value(a.as_slice()) - f.value(b.as_slice())).abs();
            // slack for the curvature of x₁x₂ over the segment
            prop_assert!(jump <= (lip + 2.0 * h) * (&a - &b).norm() + 1e-12);
        }
    }

    #[test]
    fn bifunction_vanishes_on_diagonal(idx in 0usize..64, u in prop::collection::vec(0.0..1.0, 4)) {
        let entries = corpus::entries();
        let e = &entries[idx % entries.len()];
        let prob = &e.problem;
        let (lo, hi) = prob.sample_box();
        let y = Point::from_iterator(prob.dim(), (0..prob.dim()).map(|i| lo[i] + u[i] * (hi[i] - lo[i])));
        let x = prob.feasible().project(&y);
        prop_assert!(prob.phi(&x, &x).abs() <= 1e-10, "{}", e.id);
    }

    #[test]
    fn diagonal_oracles_match_finite_differences(u in 0.0..1.0f64, v in 0.0..1.0f64) {
        for (id, x) in [("ex4_3", point(&[u, 2.0 * v - 1.0])), ("ex4_4", point(&[u, v]))] {
            let prob = problem(id);
            let sub = prob.diag_subdiff(&x);
            prop_assert!(sub.is_singleton());
            let g = &sub.vertices()[0];
            for i in 0..2 {
                let h = 1e-6;
                let mut yp = x.clone();
                let mut ym = x.clone();
                yp[i] += h;
                ym[i] -= h;
                let fd = (prob.phi(&x, &yp) - prob.phi(&x, &ym)) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-6, "{id}");
            }
        }
    }

    #[test]
    fn psi_selection_within_bounds(
        x in vec_in(2, 1.0),
        wu in prop::collection::vec(0.0..1.0, 4),
        wv in prop::collection::vec(0.0..1.0, 4),
    ) {
        let entry = corpus::get("ex4_1").unwrap();
        let prob = &entry.problem;
        prop_assume!(prob.dist_solution(&x).unwrap() > 1e-6);
        let h = entry.mapping.as_ref().unwrap().build(Some(0.1));
        let (lo, hi) = psi(prob, &h, &x).unwrap();
        let mix = |verts: &[Point], w: &[f64]| {
            let total: f64 = w[..verts.len()].iter().sum::<f64>().max(1e-12);
            verts.iter().zip(w).fold(Point::zeros(2), |acc, (p, c)| acc + p * (*c / total))
        };
        let u = mix(prob.diag_subdiff(&x).vertices(), &wu);
        let z = prob.project_solution(&x).unwrap();
        let v = mix(h.eval(prob, &z).unwrap().vertices(), &wv);
        let s = psi_selection(prob, &x, &u, &v).unwrap();
        prop_assert!(lo - 1e-9 <= s && s <= hi + 1e-9);
    }

    #[test]
    fn ball_inclusion_scales(r in 0.01..2.0f64, verts in prop::collection::vec(vec_in(2, 1.0), 1..4), (k, _v) in cone_case()) {
        prop_assume!(k.dim() == 2);
        let p = VPolytope::new(verts).unwrap();
        let dirs = unit_directions(2);
        prop_assert_eq!(ball_in_sum(r, &p, &k, &dirs), ball_in_sum(2.0 * r, &p.scale(2.0), &k, &dirs));
    }

    #[test]
    fn iterates_stay_feasible(a in 0.0..FRAC_PI_3, b in -1.0..1.0f64, t in 0.01..0.3f64) {
        let p45 = problem("ex4_5");
        let x0 = point(&[a, b]);
        for rec in [
            diag_subgradient_run(p45, &x0, StepRule::Constant { t }, 60).unwrap(),
            diag_subgradient_run(p45, &x0, StepRule::Diminishing { c: t }, 60).unwrap(),
            proximal_point_run(p45, &x0, t, 10, 50).unwrap(),
        ] {
            for x in &rec.iterates {
                prop_assert!(p45.feasible().violation(x) <= 1e-9);
            }
        }
        let p42 = problem("ex4_2");
        let y0 = point(&[a, b.abs()]);
        for x in &extragradient_run(p42, &y0, t, 60).unwrap().iterates {
            prop_assert!(p42.feasible().violation(x) <= 1e-9);
        }
    }

    #[test]
    fn runs_are_deterministic(a in 0.0..FRAC_PI_3, b in -1.0..1.0f64) {
        let p = problem("ex4_5");
        let x0 = point(&[a, b]);
        let r1 = diag_subgradient_run(p, &x0, StepRule::Polyak { f_star: 0.0 }, 80).unwrap();
        let r2 = diag_subgradient_run(p, &x0, StepRule::Polyak { f_star: 0.0 }, 80).unwrap();
        prop_assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
        let q1 = proximal_point_run(p, &x0, 0.5, 10, 50).unwrap();
        let q2 = proximal_point_run(p, &x0, 0.5, 10, 50).unwrap();
        prop_assert_eq!(q1, q2);
    }

    #[test]
    fn residual_vanishes_inside_solution_set(idx in 0usize..64, seed in 0u64..8) {
        let entries = corpus::entries();
        let e = &entries[idx % entries.len()];
        prop_assume!(e.problem.local_lipschitz());
        for z in solution_samples(&e.problem, seed).unwrap() {
            prop_assert!(rho(&e.problem, &z).unwrap() <= 1e-8, "{} at {:?}", e.id, z.as_slice());
            prop_assert!(check_stationary(&e.problem, &z).unwrap().is_stationary);
        }
    }

    #[test]
    fn polyak_distance_nonincreasing_on_mp_plus(a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let p = problem("mp_plus");
        let rec = diag_subgradient_run(p, &point(&[a, b]), StepRule::Polyak { f_star: 0.0 }, 50).unwrap();
        let d = rec.dist_solution.as_ref().unwrap();
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

#[test]
fn weak_sharp_with_monotone_diagonal_is_augmented() {
    let entry = corpus::get("mp_plus").unwrap();
    let prob = &entry.problem;
    let z = solution_samples(prob, 0).unwrap();
    let dirs = unit_directions(2);
    assert!(check_weak_sharp(prob, &z, &dirs, 0.5).unwrap().verdict);
    assert!(sharpeq::problems::subdiff_monotone_sample(prob, 1000, 0).monotone());
    let h = AugmentedMapping::diagonal();
    let cfg = AugmentedConfig { alpha0: 0.5, ..Default::default() };
    let mut sequences = vec![entry.builtin_sequence(500).unwrap()];
    for spec in corpus::battery_specs().into_iter().filter(|s| s.problem == "mp_plus") {
        sequences.push(corpus::execute(&spec).unwrap().record.iterates);
    }
    for seq in sequences {
        let rep = check_augmented_weak_sharp(prob, &h, &seq, &cfg).unwrap();
        assert!(rep.passed, "{:?}", rep.notes);
    }
}

#[test]
fn primal_and_dual_weak_sharpness_agree_on_mp_plus() {
    let prob = problem("mp_plus");
    let z = solution_samples(prob, 0).unwrap();
    let ys = sharpeq::problems::sample_points(prob, 1000);
    let dirs = unit_directions(2);
    for alpha in [0.25, 0.5, 0.9, 1.1, 1.5] {
        let dual = check_weak_sharp(prob, &z, &dirs, alpha).unwrap().verdict;
        let primal = check_weak_sharp_mp(prob, &ys, alpha).unwrap();
        assert_eq!(dual, primal, "α₀ = {alpha}");
    }
}

#[test]
fn every_declared_mapping_is_in_range() {
    for e in corpus::entries() {
        if let Some(m) = &e.mapping {
            assert!(m.build(None).params_in_range(), "{}", e.id);
        }
    }
}
