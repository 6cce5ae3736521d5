//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Closed forms below are written out by hand from the worked examples and act
//! as oracles independent of the library's projection and subdifferential code.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpeq::analysis::subdiff;
use sharpeq::corpus::{self, battery_specs, execute, run_check, Check, CheckParams, TheoremOutcome};
use sharpeq::geometry::{point, project_set, unit_directions, PolyCone, VPolytope};
use sharpeq::problems::{
    characterization_check, check_stationary, convexity_sample, monotone_sample, stationary_intersection,
    subdiff_monotone_sample, EquilibriumProblem,
};
use sharpeq::sharpness::{
    check_augmented_weak_sharp, check_strong_nondegenerate, check_weak_sharp, local_modulus, psi, psi_selection,
    solution_samples, AugmentedConfig,
};
use sharpeq::solvers::{
    diag_subgradient_run, verify_theorem_5_1, Consistency, RunRecord, StepRule, TheoremConfig,
};
use sharpeq::Point;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn problem(id: &str) -> &'static EquilibriumProblem {
    &corpus::get(id).expect("corpus id").problem
}

/// Hausdorff distance between two finite vertex lists.
fn vertex_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let one_way = |p: &[Point], q: &[Point]| {
        p.iter().map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn pruned(p: &VPolytope) -> Vec<Point> {
    p.pruned().vertices().to_vec()
}

fn seg(a: [f64; 2], b: [f64; 2]) -> Vec<Point> {
    vec![point(&a), point(&b)]
}

fn rect(x: [f64; 2], y: [f64; 2]) -> Vec<Point> {
    vec![point(&[x[0], y[0]]), point(&[x[1], y[0]]), point(&[x[0], y[1]]), point(&[x[1], y[1]])]
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

const MIN_SINGULAR: f64 = 1e-2;

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

// 1. Cone projections by face enumeration vs Dykstra, Moreau, bipolar.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_dyk, mut worst_moreau, mut worst_bipolar) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut redrawn = 0;
    for case in 0..1000 {
        let n = if case % 2 == 0 { 2 } else { 3 };
        let m = rng.gen_range(1..=n + 2);
        // Dykstra's sweeps grow like 1/σ² for nearly dependent facet normals,
        // so such cones are redrawn.
        let rows = loop {
            let rows: Vec<Point> =
                (0..m).map(|_| Point::from_iterator(n, (0..n).map(|_| uniform(&mut rng, -1.0, 1.0)))).collect();
            if rows.iter().all(|r| r.norm() > 1e-3) && well_conditioned(&rows, MIN_SINGULAR) {
                break rows;
            }
            redrawn += 1;
        };
        let k = PolyCone::new(n, rows);
        let v = Point::from_iterator(n, (0..n).map(|_| uniform(&mut rng, -2.0, 2.0)));
        let p = k.project(&v);
        worst_dyk = worst_dyk.max((&p - k.project_dykstra(&v)).norm());
        let q = k.polar().project(&v);
        worst_moreau = worst_moreau.max((&v - &p - &q).norm()).max(p.dot(&q).abs());
        let kk = k.polar().polar();
        let w = Point::from_iterator(n, (0..n).map(|_| uniform(&mut rng, -2.0, 2.0)));
        worst_bipolar = worst_bipolar.max((k.project(&w) - kk.project(&w)).norm());
        let margin = k.excess(&w);
        if margin > 1e-6 || k.contains(&w, 0.0) {
            ensure!(kk.contains(&w, 1e-9) == k.contains(&w, 1e-9), "bipolar membership differs at case {case}");
        }
    }
    ensure!(worst_dyk <= 1e-8, "face enumeration vs Dykstra {worst_dyk:.2e}");
    ensure!(worst_moreau <= 1e-8, "Moreau residual {worst_moreau:.2e}");
    ensure!(worst_bipolar <= 1e-9, "bipolar round trip {worst_bipolar:.2e}");
    Ok(format!(
        "1000 cases ({redrawn} ill-conditioned draws replaced); Dykstra gap {worst_dyk:.1e}, Moreau residual {worst_moreau:.1e}, bipolar {worst_bipolar:.1e}"
    ))
}

// 2. Projections onto the solution sets against the closed forms.
fn criterion_2() -> Outcome {
    let grid: Vec<f64> = (0..100).map(|i| -1.0 + (i as f64 + 0.5) * 0.02).collect();
    type Oracle = fn(f64, f64) -> Option<[f64; 2]>;
    let cases: [(&str, Oracle); 4] = [
        ("ex4_1", |a, b| {
            if a == b && a < 0.0 {
                None
            } else if a >= 0.0 && b >= 0.0 {
                Some([0.0, 0.0])
            } else if (a > 0.0 && b < 0.0) || (b <= a && a < 0.0) {
                Some([0.0, b])
            } else {
                Some([a, 0.0])
            }
        }),
        ("ex4_2", |a, _| Some(if a <= FRAC_PI_4 { [0.0, 0.0] } else { [FRAC_PI_2, 0.0] })),
        ("ex4_3", |_, b| Some(if b >= 0.0 { [0.0, 1.0] } else { [0.0, -1.0] })),
        ("ex4_5", |_, b| Some(if b > 0.0 { [0.0, 0.0] } else { [0.0, b] })),
    ];
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (id, oracle) in cases {
        let set = problem(id).solution_set().expect("solution set");
        for &a in &grid {
            for &b in &grid {
                let Some(want) = oracle(a, b) else { continue };
                let (got, _) = project_set(set, &point(&[a, b]));
                let err = (got - point(&want)).amax();
                ensure!(err <= 1e-12, "{id} at ({a}, {b}): error {err:.2e}");
                worst = worst.max(err);
                count += 1;
            }
        }
    }
    Ok(format!("{count} grid points on four instances, max coordinate error {worst:.1e}"))
}

// 3. Subdifferentials and diagonal gradients against the closed forms.
fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    let mut check = |f: &sharpeq::analysis::PiecewiseFn, x: Point, want: Vec<Point>, tag: &str| -> Result<(), String> {
        let got = pruned(&subdiff(f, &x));
        let h = vertex_hausdorff(&got, &want);
        ensure!(h <= 1e-9, "{tag} at {:?}: Hausdorff {h:.2e}", x.as_slice());
        worst = worst.max(h);
        Ok(())
    };

    let f41 = problem("ex4_1").objective().expect("MP");
    let pos = |t: f64| if t > 0.0 { 1.0 } else { 0.0 };
    for _ in 0..100 {
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (a, b) = (s * uniform(&mut rng, 0.01, 1.0), s * uniform(&mut rng, 0.01, 1.0));
        check(f41, point(&[a, b]), vec![point(&[b + pos(a), a + pos(b)])], "ex4_1 x1x2>0")?;
        let (a, b) = (s * uniform(&mut rng, 0.01, 1.0), -s * uniform(&mut rng, 0.01, 1.0));
        check(f41, point(&[a, b]), vec![point(&[pos(a), pos(b)])], "ex4_1 x1x2<0")?;
        let t = uniform(&mut rng, 0.01, 1.0);
        // on an axis with x1 + x2 > 0: u1 ∈ [x1/|x|, x2 + 1], u2 ∈ [x2/|x|, x1 + 1]
        check(f41, point(&[0.0, t]), seg([0.0, 1.0], [t + 1.0, 1.0]), "ex4_1 x1=0<x2")?;
        check(f41, point(&[t, 0.0]), seg([1.0, 0.0], [1.0, t + 1.0]), "ex4_1 x2=0<x1")?;
        let t = -uniform(&mut rng, 0.01, 1.0);
        check(f41, point(&[0.0, t]), seg([t, 0.0], [1.0, 0.0]), "ex4_1 x1=0>x2")?;
        check(f41, point(&[t, 0.0]), seg([0.0, t], [0.0, 1.0]), "ex4_1 x2=0>x1")?;
    }
    check(f41, point(&[0.0, 0.0]), rect([0.0, 1.0], [0.0, 1.0]), "ex4_1 origin")?;

    let f45 = problem("ex4_5").objective().expect("MP");
    for _ in 0..100 {
        let a = uniform(&mut rng, 0.0, FRAC_PI_3);
        let b = uniform(&mut rng, 0.01, 1.0);
        check(f45, point(&[a, b]), vec![point(&[a.cos(), 1.0])], "ex4_5 x2>0")?;
        check(f45, point(&[a, 0.0]), seg([a.cos(), 0.0], [a.cos(), 1.0]), "ex4_5 x2=0")?;
        check(f45, point(&[a, -b]), vec![point(&[a.cos(), 0.0])], "ex4_5 x2<0")?;
        check(f45, point(&[0.0, -b]), vec![point(&[1.0, 0.0])], "ex4_5 on the segment")?;
    }
    check(f45, point(&[0.0, 0.0]), seg([1.0, 0.0], [1.0, 1.0]), "ex4_5 origin")?;

    // Diagonal gradients: closed form and central differences of y ↦ φ(x, y).
    let mut worst_diag = 0.0_f64;
    let mut worst_fd = 0.0_f64;
    let mut diag = |id: &str, x: Point, want: [f64; 2]| -> Result<(), String> {
        let prob = problem(id);
        let sub = prob.diag_subdiff(&x);
        ensure!(sub.is_singleton(), "{id}: nonsmooth at {:?}", x.as_slice());
        let g = &sub.vertices()[0];
        let e = (g - point(&want)).amax();
        ensure!(e <= 1e-10, "{id} at {:?}: gradient error {e:.2e}", x.as_slice());
        worst_diag = worst_diag.max(e);
        let h = 1e-6;
        for i in 0..2 {
            let mut yp = x.clone();
            let mut ym = x.clone();
            yp[i] += h;
            ym[i] -= h;
            let fd = (prob.phi(&x, &yp) - prob.phi(&x, &ym)) / (2.0 * h);
            let e = (fd - g[i]).abs();
            ensure!(e <= 1e-6, "{id} at {:?}: finite difference error {e:.2e}", x.as_slice());
            worst_fd = worst_fd.max(e);
        }
        Ok(())
    };
    for _ in 0..100 {
        let (a, b) = (uniform(&mut rng, 0.0, 1.0), uniform(&mut rng, -1.0, 1.0));
        diag("ex4_3", point(&[a, b]), [2.0 * a * (a * a).exp(), -2.0 * b])?;
        let (a, b) = (uniform(&mut rng, 0.0, 1.0), uniform(&mut rng, 0.0, 1.0));
        diag("ex4_4", point(&[a, b]), [(a - b).exp() + (b - a).exp(), 2.0 * b * (b * b - a * a).exp()])?;
    }
    diag("ex4_4", point(&[0.0, 0.0]), [2.0, 0.0])?;
    Ok(format!(
        "subdifferential Hausdorff {worst:.1e}; diagonal gradients {worst_diag:.1e}, finite differences {worst_fd:.1e}"
    ))
}

fn verdict(id: &str, check: Check) -> Result<bool, String> {
    let entry = corpus::get(id).map_err(|e| e.to_string())?;
    let out = run_check(entry, check, &CheckParams::default()).map_err(|e| e.to_string())?;
    Ok(out.verdict)
}

// 4. Weak sharpness and strong non-degeneracy verdicts.
fn criterion_4() -> Outcome {
    let dirs = unit_directions(2);
    let p41 = problem("ex4_1");
    ensure!(!verdict("ex4_1", Check::WeakSharp)?, "ex4_1 reported weakly sharp");
    let mut moduli = Vec::new();
    for t in [0.5, 0.1, 0.01] {
        // ∂f + N̂° = [−t, 1] × ℝ at (0, −t), so the inscribed radius is t.
        let a = local_modulus(p41, &point(&[0.0, -t]), &dirs, None).map_err(|e| e.to_string())?;
        ensure!((a - t).abs() <= 1e-4, "ex4_1 modulus at (0,-{t}) = {a}");
        moduli.push(a);
    }
    ensure!(!verdict("ex4_2", Check::WeakSharp)?, "ex4_2 reported weakly sharp");
    ensure!(!verdict("ex4_3", Check::WeakSharp)?, "ex4_3 reported weakly sharp");
    let p43 = problem("ex4_3");
    for z in [[0.0, 1.0], [0.0, -1.0]] {
        let s = check_strong_nondegenerate(p43, &point(&z), 1e-6).map_err(|e| e.to_string())?;
        ensure!(!s, "ex4_3 strongly non-degenerate at {z:?}");
    }
    let s44 = check_strong_nondegenerate(problem("ex4_4"), &point(&[0.0, 0.0]), 1e-6).map_err(|e| e.to_string())?;
    ensure!(!s44, "ex4_4 strongly non-degenerate at the origin");
    let p45 = problem("ex4_5");
    let z = solution_samples(p45, 0).map_err(|e| e.to_string())?;
    let rep = check_weak_sharp(p45, &z, &dirs, 0.5).map_err(|e| e.to_string())?;
    ensure!(rep.verdict, "ex4_5 not weakly sharp");
    ensure!((0.95..=1.05).contains(&rep.inf_alpha), "ex4_5 inf modulus {}", rep.inf_alpha);
    Ok(format!(
        "ex4_1 moduli {:.4} {:.4} {:.4}; ex4_5 inf modulus {:.6} over {} samples",
        moduli[0],
        moduli[1],
        moduli[2],
        rep.inf_alpha,
        z.len()
    ))
}

// 5. Augmented weak sharpness along the instance sequences.
fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for (id, value) in [("ex4_1", 0.1), ("ex4_2", 0.25), ("ex4_3", 0.5), ("ex4_4", 0.25), ("ex4_5", 0.5)] {
        let entry = corpus::get(id).map_err(|e| e.to_string())?;
        let h = entry.mapping.as_ref().expect("mapping").build(Some(value));
        ensure!(h.params_in_range(), "{id}: parameter {value} out of range");
        let seq = entry.builtin_sequence(500).expect("sequence");
        ensure!(entry.in_sequence_domain(&seq), "{id}: sequence leaves its domain");
        let cfg = AugmentedConfig { alpha0: 0.1, ..Default::default() };
        let rep = check_augmented_weak_sharp(&entry.problem, &h, &seq, &cfg).map_err(|e| e.to_string())?;
        ensure!(rep.condition_a.verdict, "{id}: condition (a) fails, inf {}", rep.condition_a.inf_alpha);
        ensure!(!rep.vacuous, "{id}: vacuous");
        let tail = rep.tail_max_psi_min.unwrap_or(f64::NEG_INFINITY);
        ensure!(tail >= -1e-6 && rep.passed, "{id}: tail ψ_min {tail:.3e}");
        parts.push(format!("{id} ψ {tail:.3e}"));
    }
    Ok(parts.join(", "))
}

// 6. ψ at one point of Ex 4.1, by hand.
fn criterion_6() -> Outcome {
    // x = (−0.2, −0.5): x₁x₂ > 0, so ∂f(x) = {(x₂, x₁)} = {(−0.5, −0.2)}.
    // x₂ ≤ x₁ < 0 gives P(x) = (0, −0.5), unit displacement g = (−1, 0).
    // ψ = ⟨(−0.5, −0.2) − (0, 0), (−1, 0)⟩ = 0.5.
    let entry = corpus::get("ex4_1").map_err(|e| e.to_string())?;
    let x = point(&[-0.2, -0.5]);
    let got = psi_selection(&entry.problem, &x, &point(&[-0.5, -0.2]), &point(&[0.0, 0.0])).map_err(|e| e.to_string())?;
    ensure!((got - 0.5).abs() <= 1e-9, "ψ = {got}");
    // Over H(0, −0.5) = [−0.1, 0.1] × {0} the range is [0.4, 0.6].
    let h = entry.mapping.as_ref().expect("mapping").build(Some(0.1));
    let (lo, hi) = psi(&entry.problem, &h, &x).map_err(|e| e.to_string())?;
    ensure!((lo - 0.4).abs() <= 1e-9 && (hi - 0.6).abs() <= 1e-9, "ψ range [{lo}, {hi}]");
    Ok(format!("ψ = {got:.12} (hand value 0.5), range over H [{lo:.3}, {hi:.3}]"))
}

// 7. Termination harness over the battery, random starts and a frozen control.
fn criterion_7() -> Outcome {
    let specs = battery_specs();
    ensure!(specs.len() >= 20, "battery has {} runs", specs.len());
    let (mut checked, mut refused, mut out_of_scope) = (0, 0, 0);
    for spec in &specs {
        let out = execute(spec).map_err(|e| format!("{}: {e}", spec.problem))?;
        match &out.summary.theorem {
            TheoremOutcome::Checked(v) => {
                ensure!(
                    v.consistency == Consistency::Agree,
                    "{} {}: {:?}",
                    spec.problem,
                    spec.solver,
                    v.consistency
                );
                checked += 1;
            }
            TheoremOutcome::Refused { .. } => refused += 1,
            TheoremOutcome::OutOfScope { .. } => out_of_scope += 1,
        }
    }

    let p45 = problem("ex4_5");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_k0 = 0;
    for _ in 0..20 {
        let x0 = point(&[uniform(&mut rng, 0.0, FRAC_PI_3), uniform(&mut rng, -1.0, 1.0)]);
        let rec = diag_subgradient_run(p45, &x0, StepRule::Polyak { f_star: 0.0 }, 600).map_err(|e| e.to_string())?;
        let k0 = rec.identification_index;
        ensure!(k0.is_some_and(|k| k <= 500), "ex4_5 from {:?}: k0 = {k0:?}", x0.as_slice());
        worst_k0 = worst_k0.max(k0.unwrap_or(0));
    }

    let entry = corpus::get("ex4_2").map_err(|e| e.to_string())?;
    let frozen = vec![point(&[FRAC_PI_4, 0.0]); 200];
    let rec = RunRecord::assemble(&entry.problem, "frozen", None, frozen).map_err(|e| e.to_string())?;
    let h = entry.mapping.as_ref().expect("mapping").build(Some(0.25));
    let v = verify_theorem_5_1(&entry.problem, &h, &rec, &TheoremConfig::default()).map_err(|e| e.to_string())?;
    ensure!(v.consistency == Consistency::Agree, "frozen control: {:?}", v.consistency);
    ensure!(!v.identified && !v.residual_vanishes, "frozen control sides {} {}", v.identified, v.residual_vanishes);
    ensure!((v.rho_tail_max - SQRT_2 / 2.0).abs() <= 1e-9, "frozen ρ = {}", v.rho_tail_max);
    Ok(format!(
        "{} runs: {checked} agree, {refused} refused, {out_of_scope} out of scope; 20 Polyak starts, max k0 {worst_k0}; frozen ρ {:.12}",
        specs.len(),
        v.rho_tail_max
    ))
}

// 8. Monotonicity and convexity samplers on the generic instances.
fn criterion_8() -> Outcome {
    let ex31 = problem("ex3_1");
    let d = subdiff_monotone_sample(ex31, 1000, 0);
    ensure!(d.pairs == 1000 && d.violation <= 1e-12, "ex3_1 diagonal violation {:.2e}", d.violation);
    let cx = convexity_sample(ex31, 1000, 0);
    ensure!(!cx.convex() && cx.witness_x.is_some(), "ex3_1 convexity not violated");

    let ex32 = problem("ex3_2");
    let d = subdiff_monotone_sample(ex32, 1000, 0);
    ensure!(d.violation <= 1e-12, "ex3_2 diagonal violation {:.2e}", d.violation);
    let m = monotone_sample(ex32, 1000, 0);
    let w = m.monotone_witness.as_ref().ok_or("ex3_2 bifunction monotone")?;
    ensure!(ex32.phi(&w.x, &w.y) + ex32.phi(&w.y, &w.x) > 0.0, "ex3_2 witness does not violate");

    let rem51 = problem("rem5_1");
    let d = subdiff_monotone_sample(rem51, 1000, 0);
    let w = d.witness.as_ref().ok_or("rem5_1 diagonal monotone")?;
    Ok(format!(
        "ex3_1 midpoint violation {:.3e} at x = {:?}; ex3_2 witness ({:.3}, {:.3}); rem5_1 witness ({:.3}, {:.3}) violation {:.3e}",
        cx.violation,
        cx.witness_x.as_ref().map(|p| p.as_slice().to_vec()).unwrap_or_default(),
        m.monotone_witness.as_ref().unwrap().x[0],
        m.monotone_witness.as_ref().unwrap().y[0],
        w.x[0],
        w.y[0],
        d.violation
    ))
}

// 9. Characterization on the convex piecewise-linear instance.
fn criterion_9() -> Outcome {
    let prob = problem("mp_plus");
    let x_bar = point(&[-0.5, 0.0]);
    let axis: Vec<f64> = (0..50).map(|i| -1.0 + 2.0 * i as f64 / 49.0).collect();
    let mut hits = 0;
    for &a in &axis {
        for &b in &axis {
            let x = point(&[a, b]);
            let predicted = characterization_check(prob, &x_bar, &x).map_err(|e| e.to_string())?;
            let analytic = a <= 0.0;
            ensure!(predicted == analytic, "classification differs at ({a}, {b})");
            hits += 1;
        }
    }
    // On S̄ the intersection ∂f ∩ (−N_S) is {0}.
    let zero = [point(&[0.0, 0.0])];
    for z in [[-0.5, 0.0], [0.0, 0.0], [-1.0, 1.0], [0.0, -1.0]] {
        let set = stationary_intersection(prob, &point(&z)).map_err(|e| e.to_string())?.ok_or("empty intersection")?;
        let h = vertex_hausdorff(&pruned(&set), &zero);
        ensure!(h <= 1e-8, "intersection at {z:?} off by {h:.2e}");
    }
    Ok(format!("{hits} grid points classified as the analytic set"))
}

// 10. Stationarity inclusion at sampled solutions.
fn criterion_10() -> Outcome {
    let (mut entries, mut points, mut worst) = (0, 0, 0.0_f64);
    for e in corpus::entries() {
        if !e.problem.local_lipschitz() || e.problem.solution_set().is_none() {
            continue;
        }
        entries += 1;
        for z in solution_samples(&e.problem, 0).map_err(|er| er.to_string())? {
            let v = check_stationary(&e.problem, &z).map_err(|er| er.to_string())?;
            ensure!(v.is_stationary && v.gap <= 1e-8, "{} at {:?}: gap {:.2e}", e.id, z.as_slice(), v.gap);
            worst = worst.max(v.gap);
            points += 1;
        }
    }
    Ok(format!("{points} solution samples over {entries} instances, max gap {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("geometry oracle battery", criterion_1),
        ("closed-form projectors", criterion_2),
        ("subdifferential closed forms", criterion_3),
        ("sharpness verdicts", criterion_4),
        ("augmented certificates", criterion_5),
        ("psi spot value", criterion_6),
        ("termination harness", criterion_7),
        ("monotonicity samplers", criterion_8),
        ("characterization", criterion_9),
        ("stationarity inclusion", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let ms = start.elapsed().as_millis();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({ms} ms): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({ms} ms): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
