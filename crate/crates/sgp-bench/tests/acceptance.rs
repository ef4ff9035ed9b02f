//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `-- --nocapture` to see them).
//!
//! Criteria 1-5 exercise the solver core against independent oracles
//! (clamp-vs-KKT enumeration, accepted-steplength bounds, summable-schedule
//! monitors); 6-8 validate the imaging operators against finite differences
//! and a dense matrix; 9-12 reproduce the benchmark protocols at desk scale
//! (ordinal method ordering, discrepancy totals, stub root finding,
//! byte-identical reruns).

use std::fs;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sgp_bench::config::BenchConfig;
use sgp_bench::{run_autoparam, run_benchmark};
use sgp_core::{
    sgp_solve, BbAlternation, BoundSchedule, ClampedDiagonal, DiagonalMetric, FeasibleRegion,
    IdentityMetric, LineSearchParams, Quadratic, SmoothObjective, SteplengthConfig, StoppingRule,
    ThetaMonitor,
};
use sgp_imaging::{
    gaussian_psf, solve_for_nu, BlurOperator, DenseBlurOperator, DiscrepancyConfig,
    HsRegularizer, ImagingError, LinearOperator, NuEvaluation, NuProblem,
};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Random SPD matrix with pinned extreme eigenvalues (orthonormal basis by
/// Gram-Schmidt over random vectors).
fn random_spd(n: usize, eig_lo: f64, eig_hi: f64, r: &mut StdRng) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        for b in &basis {
            let proj = dot(&v, b);
            for i in 0..n {
                v[i] -= proj * b[i];
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|_| r.random_range(eig_lo..eig_hi)).collect();
    eigs[0] = eig_lo;
    eigs[n - 1] = eig_hi;
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = (0..n).map(|k| basis[k][i] * eigs[k] * basis[k][j]).sum();
        }
    }
    q
}

/// Gaussian elimination with partial pivoting for small dense systems.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i * n + col]
                .abs()
                .partial_cmp(&a[j * n + col].abs())
                .unwrap()
        })?;
        if a[pivot * n + col].abs() < 1e-12 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Some(x)
}

/// Brute-force KKT oracle for `min 1/2 x'Qx + c'x  s.t. x >= lo`: enumerate
/// all 2^n active sets, solve the reduced system, keep the KKT point.
fn kkt_oracle(q: &[f64], c: &[f64], lo: &[f64], n: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << n) {
        let free: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        let active: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let m = free.len();
        let mut x = vec![0.0; n];
        for &i in &active {
            x[i] = lo[i];
        }
        if m > 0 {
            let mut sub = vec![0.0; m * m];
            let mut rhs = vec![0.0; m];
            for (r, &i) in free.iter().enumerate() {
                rhs[r] = -c[i] - active.iter().map(|&j| q[i * n + j] * lo[j]).sum::<f64>();
                for (s, &j) in free.iter().enumerate() {
                    sub[r * m + s] = q[i * n + j];
                }
            }
            match solve_dense(&mut sub, &mut rhs, m) {
                Some(sol) => {
                    for (r, &i) in free.iter().enumerate() {
                        x[i] = sol[r];
                    }
                }
                None => continue,
            }
        }
        // Feasibility of free coordinates and multiplier signs on actives.
        if free.iter().any(|&i| x[i] < lo[i] - 1e-10) {
            continue;
        }
        let grad: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| q[i * n + j] * x[j]).sum::<f64>() + c[i])
            .collect();
        if active.iter().any(|&i| grad[i] < -1e-8) {
            continue;
        }
        let value = 0.5 * dot(&x, &grad.iter().zip(c).map(|(g, ci)| g + ci).collect::<Vec<_>>())
            - 0.0; // 1/2 x'(Qx + c) + 1/2 c'x = 1/2 x'Qx + c'x
        if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best = Some((value, x));
        }
    }
    best.expect("strongly convex problem has a KKT point").1
}

#[test]
fn criterion_01_descent_inequality_suite() {
    // 200 random instances, n in {2, 5, 50}, random D in M_mu, random alpha
    // in [1e-5, 1e5]: grad'd <= -|d|^2_{D^-1}/alpha + 1e-10.
    let mut r = rng(101);
    let mut worst: f64 = f64::NEG_INFINITY;
    for trial in 0..200 {
        let n = [2, 5, 50][trial % 3];
        let lower: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..0.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|lo| lo + r.random_range(0.2..10.0)).collect();
        let region = FeasibleRegion::new(lower.clone(), upper.clone()).unwrap();
        let x: Vec<f64> = lower
            .iter()
            .zip(&upper)
            .map(|(&lo, &hi)| r.random_range(lo..hi))
            .collect();
        let grad: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let mu = 10f64.powf(r.random_range(0.0..2.0));
        let suggestion: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..(mu * 1.5))).collect();
        let metric = DiagonalMetric::clamped(&suggestion, mu).unwrap();
        let alpha = 10f64.powf(r.random_range(-5.0..5.0));

        let (d, cert) = sgp_core::descent_direction(&x, &grad, alpha, &metric, &region).unwrap();
        let bound = -metric.inv_norm_sq(&d) / alpha;
        worst = worst.max(cert - bound);
        assert!(
            cert <= bound + 1e-10,
            "trial {trial}: certificate {cert} vs bound {bound}"
        );
    }
    println!("criterion 1 (descent inequality suite): PASS — worst slack {worst:.3e} <= 1e-10");
}

#[test]
fn criterion_02_armijo_lambda_lower_bound() {
    // Accepted lambda >= min(1, mu*alpha_max*(1-beta)*delta/L) across 100
    // box-quadratic runs; configured with mu * alpha_max <= sqrt(2), the
    // regime where that bound is provable from the descent lemma.
    let mut r = rng(202);
    let n = 6;
    let beta = 1e-4;
    let delta = 0.5;
    let alpha_max = 1.2;
    let ls = LineSearchParams::new(beta, delta, 60).unwrap();
    let mut min_margin = f64::INFINITY;
    for run in 0..100 {
        let l = r.random_range(5.0..200.0);
        let q = random_spd(n, 0.5, l, &mut r);
        let c: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let objective = Quadratic::new(q, c).unwrap().with_lipschitz(l);
        let region = FeasibleRegion::uniform(n, -2.0, 2.0).unwrap();
        let x0: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let mut rule = BbAlternation::new(SteplengthConfig {
            alpha_min: 1e-5,
            alpha_max,
            alpha_0: 1.0,
            ..SteplengthConfig::default()
        })
        .unwrap();
        // Stop before f-changes reach machine noise; the bound is an
        // exact-arithmetic property of the backtracking loop.
        let stop = StoppingRule::max_iters(80).or_relative_f_change(1e-9);
        let out = sgp_solve(
            &objective,
            &region,
            &mut IdentityMetric,
            &mut rule,
            &ls,
            &stop,
            &x0,
        )
        .unwrap();
        let lambda_min = 1f64.min(1.0 * alpha_max * (1.0 - beta) * delta / l);
        for e in &out.record.entries {
            min_margin = min_margin.min(e.lambda - lambda_min);
            assert!(
                e.lambda >= lambda_min,
                "run {run}: lambda {} < bound {lambda_min} (L = {l})",
                e.lambda
            );
        }
    }
    println!(
        "criterion 2 (Armijo lambda lower bound): PASS — min margin above bound {min_margin:.3e}"
    );
}

/// Deterministic instance set shared by criteria 3 and 4.
fn quadratic_instances() -> Vec<(Quadratic<f64>, Vec<f64>, Vec<f64>)> {
    let n = 10;
    let mut r = rng(303);
    (0..50)
        .map(|_| {
            let q = random_spd(n, 1.0, 20.0, &mut r);
            let c: Vec<f64> = (0..n).map(|_| r.random_range(-5.0..5.0)).collect();
            let lo: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
            let x0: Vec<f64> = lo.iter().map(|&l| l + r.random_range(0.0..2.0)).collect();
            (Quadratic::new(q, c).unwrap(), lo, x0)
        })
        .collect()
}

fn solve_quadratic_mode(
    objective: &Quadratic<f64>,
    region: &FeasibleRegion<f64>,
    x0: &[f64],
    mode: usize,
    max_iters: usize,
    residual_stop: Option<f64>,
) -> sgp_core::SgpOutcome<f64> {
    let ls = LineSearchParams::default();
    let mut stop = StoppingRule::max_iters(max_iters);
    if let Some(tol) = residual_stop {
        stop = stop.or_residual_below(tol);
    }
    let mut rule = BbAlternation::new(SteplengthConfig::default()).unwrap();
    let n = objective.dimension();
    let jacobi: Vec<f64> = (0..n).map(|i| 1.0 / objective.matrix()[i * n + i]).collect();
    match mode {
        0 => sgp_solve(objective, region, &mut IdentityMetric, &mut rule, &ls, &stop, x0),
        1 => {
            let mut provider = ClampedDiagonal::new(
                BoundSchedule::fixed(1e5).unwrap(),
                move |_k, _x: &[f64], _g: &[f64]| jacobi.clone(),
            );
            sgp_solve(objective, region, &mut provider, &mut rule, &ls, &stop, x0)
        }
        _ => {
            let mut provider = ClampedDiagonal::new(
                BoundSchedule::summable(1e10).unwrap(),
                move |_k, _x: &[f64], _g: &[f64]| jacobi.clone(),
            );
            sgp_solve(objective, region, &mut provider, &mut rule, &ls, &stop, x0)
        }
    }
    .unwrap()
}

#[test]
fn criterion_03_oracle_equivalence_on_box_quadratics() {
    // 50 random strongly convex quadratics (n = 10), lower-bounded boxes:
    // all three metric modes reach the 2^10-pattern KKT enumeration optimum
    // to 1e-6 within 5000 iterations.
    let n = 10;
    let mut worst: f64 = 0.0;
    for (idx, (objective, lo, x0)) in quadratic_instances().iter().enumerate() {
        let region =
            FeasibleRegion::new(lo.clone(), vec![f64::INFINITY; n]).unwrap();
        let reference = kkt_oracle(objective.matrix(), objective.linear(), lo, n);
        for mode in 0..3 {
            let out = solve_quadratic_mode(objective, &region, x0, mode, 5000, Some(1e-9));
            let err: f64 = out
                .x
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(err);
            assert!(
                err <= 1e-6,
                "instance {idx} mode {mode}: |x - x*| = {err:.3e}"
            );
        }
    }
    println!(
        "criterion 3 (KKT oracle equivalence, 3 metric modes): PASS — worst |x - x*| {worst:.3e} <= 1e-6"
    );
}

#[test]
fn criterion_04_rate_envelope_is_bounded() {
    // Running max of k (f(x_k) - f*) over k in [50, 5000] never exceeds
    // 10x its value at k = 50 for the summable schedule; a machine-noise
    // floor covers runs that converge exactly before the window ends,
    // where the product is pure float noise around zero.
    let n = 10;
    let mut checked = 0;
    for (objective, lo, x0) in quadratic_instances() {
        let region = FeasibleRegion::new(lo.clone(), vec![f64::INFINITY; n]).unwrap();
        let reference = kkt_oracle(objective.matrix(), objective.linear(), &lo, n);
        let f_star = objective.value(&reference);
        let out = solve_quadratic_mode(&objective, &region, &x0, 2, 5000, None);
        let env_at = |k: usize, f: f64| k as f64 * (f - f_star);
        let mut at_50 = None;
        let mut running_max = f64::NEG_INFINITY;
        for e in &out.record.entries {
            if e.k < 50 {
                continue;
            }
            let v = env_at(e.k, e.f);
            if e.k == 50 {
                at_50 = Some(v);
            }
            running_max = running_max.max(v);
        }
        let Some(at_50) = at_50 else {
            continue; // converged exactly before the window opened
        };
        let noise_floor = 5000.0 * 128.0 * f64::EPSILON * 1f64.max(f_star.abs());
        let allowed = (10.0 * at_50).max(noise_floor);
        assert!(
            running_max <= allowed,
            "envelope {running_max:.3e} above allowance {allowed:.3e} (at_50 = {at_50:.3e})"
        );
        checked += 1;
    }
    assert!(checked >= 40, "too few instances reached the window");
    println!(
        "criterion 4 (O(1/k) rate envelope): PASS — bounded on {checked} of 50 instances reaching k = 50"
    );
}

#[test]
fn criterion_05_theta_monitor() {
    // log theta_k <= truncated series bound at every k <= 1e5 for
    // c in {1, 1e4, 1e10}; a fixed mu = 1e5 schedule is flagged within 10
    // steps.
    for c in [1.0, 1e4, 1e10] {
        let schedule = BoundSchedule::summable(c).unwrap();
        let bound = schedule.log_theta_bound(1_000_000);
        let mut monitor = ThetaMonitor::new();
        for k in 1..=100_000usize {
            monitor.update(schedule.mu_at(k).unwrap());
            assert!(
                monitor.log_theta() <= bound + 1e-9,
                "c = {c}: log theta {} above {} at k = {k}",
                monitor.log_theta(),
                bound
            );
        }
        assert!(!monitor.summability_warning(), "c = {c} flagged spuriously");
    }

    let mut fixed = ThetaMonitor::new();
    let mut flagged_at = None;
    for k in 1..=10 {
        fixed.update(1e5);
        if fixed.summability_warning() {
            flagged_at = Some(k);
            break;
        }
    }
    let flagged_at = flagged_at.expect("fixed mu = 1e5 must be flagged within 10 steps");
    println!(
        "criterion 5 (theta monitor): PASS — summable schedules bounded, fixed bound flagged at step {flagged_at}"
    );
}

/// Central differences with per-pixel step 1e-5 * (1 + |x_i|).
fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut work = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-5 * (1.0 + x[i].abs());
        work[i] = x[i] + h;
        let fp = f(&work);
        work[i] = x[i] - h;
        let fm = f(&work);
        work[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

fn max_rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = 1f64.max(numeric.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max)
        / scale
}

#[test]
fn criterion_06_gradient_correctness() {
    // KL and HS gradients against central differences, 20 trials each on
    // 16x16 random positive images, relative error <= 1e-5.
    let mut r = rng(606);
    let truth = sgp_imaging::disk_phantom::<f64>(16, 16).scaled(200.0);
    let psf = gaussian_psf(5, 2.0).unwrap();
    let (model, _) = sgp_imaging::simulate_problem(
        &truth,
        &psf,
        10.0,
        1.0,
        6,
        sgp_imaging::NoiseModel::Poisson,
    )
    .unwrap();
    let reg = HsRegularizer::new(16, 16, 1.0).unwrap();

    let mut worst_kl: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..256).map(|_| r.random_range(1.0..40.0)).collect();
        let f = |p: &[f64]| sgp_imaging::kl_value(&model, p).unwrap();
        let numeric = fd_gradient(&f, &x);
        let mut analytic = vec![0.0; 256];
        sgp_imaging::kl_gradient(&model, &x, &mut analytic).unwrap();
        worst_kl = worst_kl.max(max_rel_err(&analytic, &numeric));
    }
    assert!(worst_kl <= 1e-5, "KL gradient error {worst_kl:.3e}");

    let mut worst_hs: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..256).map(|_| r.random_range(0.5..10.0)).collect();
        let f = |p: &[f64]| reg.value(p).unwrap();
        let numeric = fd_gradient(&f, &x);
        let mut analytic = vec![0.0; 256];
        reg.gradient(&x, &mut analytic).unwrap();
        worst_hs = worst_hs.max(max_rel_err(&analytic, &numeric));
    }
    assert!(worst_hs <= 1e-5, "HS gradient error {worst_hs:.3e}");
    println!(
        "criterion 6 (gradient correctness): PASS — max relative FD error: KL {worst_kl:.3e}, HS {worst_hs:.3e}"
    );
}

#[test]
fn criterion_07_split_gradient_identity() {
    // |(V - U) - grad HS|_inf <= 1e-12 with V, U >= 0 on 20 random
    // nonnegative 16x16 images.
    let mut r = rng(707);
    let reg = HsRegularizer::new(16, 16, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..256).map(|_| r.random_range(0.0..8.0)).collect();
        let (v, u) = reg.split_gradient(&x).unwrap();
        let mut grad = vec![0.0; 256];
        reg.gradient(&x, &mut grad).unwrap();
        for i in 0..256 {
            assert!(v[i] >= 0.0 && u[i] >= 0.0, "negative split component");
            worst = worst.max(((v[i] - u[i]) - grad[i]).abs());
        }
    }
    assert!(worst <= 1e-12, "split error {worst:.3e}");
    println!("criterion 7 (split-gradient identity): PASS — max |(V-U) - grad| {worst:.3e} <= 1e-12");
}

#[test]
fn criterion_08_operator_suite() {
    // Adjointness to 1e-10 and flux normalization to 1e-12 on the FFT
    // operator, cross-validated against the dense matrix at 16x16.
    let psf = gaussian_psf::<f64>(7, 2.5).unwrap();
    let fft = BlurOperator::new(&psf, 16, 16).unwrap();
    let dense = DenseBlurOperator::new(&psf, 16, 16).unwrap();
    let n = 256;
    let mut r = rng(808);

    let mut worst_adj: f64 = 0.0;
    let mut au = vec![0.0; n];
    let mut atv = vec![0.0; n];
    for _ in 0..50 {
        let u: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        fft.apply(&u, &mut au);
        fft.apply_adjoint(&v, &mut atv);
        let defect = (dot(&au, &v) - dot(&u, &atv)).abs() / (norm(&u) * norm(&v));
        worst_adj = worst_adj.max(defect);
    }
    assert!(worst_adj <= 1e-10, "adjointness defect {worst_adj:.3e}");

    let ones = vec![1.0; n];
    let mut out = vec![0.0; n];
    let mut worst_flux: f64 = 0.0;
    fft.apply(&ones, &mut out);
    for &v in &out {
        worst_flux = worst_flux.max((v - 1.0).abs());
    }
    fft.apply_adjoint(&ones, &mut out);
    for &v in &out {
        worst_flux = worst_flux.max((v - 1.0).abs());
    }
    assert!(worst_flux <= 1e-12, "normalization defect {worst_flux:.3e}");

    let mut worst_cross: f64 = 0.0;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for _ in 0..10 {
        let x: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        fft.apply(&x, &mut a);
        dense.apply(&x, &mut b);
        for i in 0..n {
            worst_cross = worst_cross.max((a[i] - b[i]).abs());
        }
        fft.apply_adjoint(&x, &mut a);
        dense.apply_adjoint(&x, &mut b);
        for i in 0..n {
            worst_cross = worst_cross.max((a[i] - b[i]).abs());
        }
    }
    assert!(worst_cross <= 1e-10, "dense cross-validation {worst_cross:.3e}");
    println!(
        "criterion 8 (operator suite): PASS — adjointness {worst_adj:.3e}, flux {worst_flux:.3e}, dense cross-check {worst_cross:.3e}"
    );
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sgp_acceptance_{}_{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn figure2_config(seed: u64, out: PathBuf) -> BenchConfig {
    // 64x64 disk phantom at intensity 500, Gaussian blur of variance 9
    // truncated to 33x33, b = 10, (nu, rho) = (0.0415, 1): the desk-scale
    // deblurring protocol. Timing columns are disabled for reproducibility.
    let mut cfg = BenchConfig::parse(
        "run.max_iters = 3000\nrun.rel_tol = 1e-14\nrun.record_time = false\n",
    )
    .unwrap();
    cfg.problem.seed = seed;
    cfg.output.dir = out;
    cfg
}

#[test]
fn criterion_09_figure_two_ordering_at_desk_scale() {
    // Iterations to relative gap <= 1e-6 against a 1500-iteration reference
    // must order SGP(summable) <= SGP(fixed) <= GP in at least 4 of 5 seeds.
    let mut ordered = 0;
    let mut lines = Vec::new();
    for seed in 1..=5u64 {
        let cfg = figure2_config(seed, scratch_dir(&format!("c9_seed{seed}")));
        let report = run_benchmark(&cfg).unwrap();
        assert!(!report.any_failure(), "seed {seed}: a solver failed");

        // Rate envelope on the summable run: the running max of
        // k (f(x_k) - f_ref) over k >= 50 stays within 10x its value at
        // k = 50 (bounded-sequence check of the O(1/k) decay).
        let record = report
            .runs
            .iter()
            .find(|r| r.name == "sgp_summable")
            .and_then(|r| r.record.as_ref())
            .unwrap();
        let mut at_50 = None;
        let mut running_max = f64::NEG_INFINITY;
        for e in &record.entries {
            if e.k < 50 {
                continue;
            }
            let v = e.k as f64 * (e.f - report.ground_truth_f);
            if e.k == 50 {
                at_50 = Some(v);
            }
            running_max = running_max.max(v);
        }
        let at_50 = at_50.expect("summable run reaches k = 50");
        let floor = 5000.0 * 128.0 * f64::EPSILON * report.ground_truth_f.abs().max(1.0);
        assert!(
            running_max <= (10.0 * at_50).max(floor),
            "seed {seed}: envelope {running_max:.3e} above 10x its k=50 value {at_50:.3e}"
        );
        let iters = |name: &str| -> usize {
            report
                .runs
                .iter()
                .find(|r| r.name == name)
                .and_then(|r| r.result.as_ref().ok())
                .and_then(|s| s.iters_to_gap)
                .unwrap_or(usize::MAX)
        };
        let (gp, fixed, summable) = (iters("gp"), iters("sgp_fixed"), iters("sgp_summable"));
        let ok = summable <= fixed && fixed <= gp;
        if ok {
            ordered += 1;
        }
        lines.push(format!(
            "seed {seed}: sgp={summable} sgp*={fixed} gp={gp} {}",
            if ok { "ordered" } else { "violated" }
        ));
    }
    for l in &lines {
        println!("  {l}");
    }
    assert!(
        ordered >= 4,
        "ordering held in only {ordered} of 5 seeds:\n{}",
        lines.join("\n")
    );
    println!(
        "criterion 9 (desk-scale convergence ordering): PASS — SGP <= SGP* <= GP in {ordered} of 5 seeds"
    );
}

#[test]
fn criterion_10_discrepancy_totals_at_desk_scale() {
    // The autoparam pipeline terminates with its declared predicate and
    // SGP(summable) uses strictly fewer total inner iterations than GP in
    // at least 4 of 5 seeds. eta = 1, eps = 5e-8, eps1 = 5e-4, eps2 = 5e-3,
    // inner cap 5000 (the config defaults, pinned here).
    let mut fewer = 0;
    let mut lines = Vec::new();
    for seed in 1..=5u64 {
        let mut cfg = BenchConfig::parse(
            "solver.methods = gp, sgp_summable\nrun.record_time = false\ndiscrepancy.eta = 1\ndiscrepancy.eps_inner = 5e-8\ndiscrepancy.eps1 = 5e-4\ndiscrepancy.eps2 = 5e-3\ndiscrepancy.max_inner = 5000\n",
        )
        .unwrap();
        cfg.problem.seed = seed;
        cfg.output.dir = scratch_dir(&format!("c10_seed{seed}"));
        let report = run_autoparam(&cfg).unwrap();
        assert!(!report.any_failure(), "seed {seed}: autoparam failed");
        let total = |name: &str| -> usize {
            report
                .runs
                .iter()
                .find(|r| r.name == name)
                .and_then(|r| r.result.as_ref().ok())
                .map(|s| s.k_tot)
                .unwrap()
        };
        // Termination predicate honored (checked inside solve_for_nu, and
        // verified here against the reported discrepancy).
        for run in &report.runs {
            let summary = run.result.as_ref().unwrap();
            let gap = (summary.discrepancy - 1.0).abs();
            match summary.predicate {
                sgp_imaging::StopPredicate::DiscrepancyWithinEps1 => assert!(gap <= 5e-4),
                sgp_imaging::StopPredicate::NuStallWithinTenEps1 => assert!(gap <= 5e-3),
            }
        }
        let (gp, sgp) = (total("gp"), total("sgp_summable"));
        let ok = sgp < gp;
        if ok {
            fewer += 1;
        }
        lines.push(format!(
            "seed {seed}: k_tot sgp={sgp} gp={gp} {}",
            if ok { "fewer" } else { "violated" }
        ));
    }
    for l in &lines {
        println!("  {l}");
    }
    assert!(fewer >= 4, "SGP beat GP in only {fewer} of 5 seeds");
    println!(
        "criterion 10 (discrepancy pipeline totals): PASS — SGP k_tot < GP k_tot in {fewer} of 5 seeds"
    );
}

#[test]
fn criterion_11_discrepancy_stub_root() {
    // D(nu) = 2 - 1/(1 + nu), eta = 1.5: root nu* = 1 found with
    // |D - eta| <= 5e-4 in at most 8 secant steps.
    struct Stub;
    impl NuProblem<f64> for Stub {
        type Solution = ();
        fn initial_solution(&self) {}
        fn solve(&mut self, nu: f64, _w: &()) -> Result<NuEvaluation<f64, ()>, ImagingError> {
            Ok(NuEvaluation {
                solution: (),
                discrepancy: 2.0 - 1.0 / (1.0 + nu),
                objective: 0.0,
                inner_iterations: 1,
            })
        }
    }
    let config = DiscrepancyConfig {
        eta: 1.5,
        ..DiscrepancyConfig::default()
    };
    let out = solve_for_nu(&mut Stub, &config).unwrap();
    assert!(
        (out.discrepancy - 1.5).abs() <= 5e-4,
        "|D - eta| = {:.3e}",
        (out.discrepancy - 1.5).abs()
    );
    assert!(out.secant_steps <= 8, "{} secant steps", out.secant_steps);
    assert!((out.nu - 1.0).abs() <= 2e-3, "nu = {}", out.nu);
    println!(
        "criterion 11 (secant stub): PASS — nu = {} after {} secant steps, |D - eta| = {:.3e}",
        out.nu,
        out.secant_steps,
        (out.discrepancy - 1.5).abs()
    );
}

#[test]
fn criterion_12_byte_identical_reruns() {
    // Two runs of the criterion-9 configuration with the same seed produce
    // byte-identical CSV outputs (timing columns disabled).
    let dir_a = scratch_dir("c12_a");
    let dir_b = scratch_dir("c12_b");
    run_benchmark(&figure2_config(1, dir_a.clone())).unwrap();
    run_benchmark(&figure2_config(1, dir_b.clone())).unwrap();

    let mut compared = 0;
    for name in [
        "history_gp.csv",
        "history_sgp_fixed.csv",
        "history_sgp_summable.csv",
        "summary.csv",
        "plotdata.csv",
    ] {
        let a = fs::read(dir_a.join(name)).unwrap();
        let b = fs::read(dir_b.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between identical runs");
        compared += 1;
    }
    println!("criterion 12 (determinism): PASS — {compared} CSV files byte-identical across reruns");
}

#[test]
fn documented_defaults_sanity() {
    // The summable schedule with c = 1e10 starts at the fixed-bound value:
    // mu_1 = sqrt(1 + 1e10) ~ 1e5.
    let s = BoundSchedule::<f64>::summable(1e10).unwrap();
    let mu1 = s.mu_at(1).unwrap();
    assert!((mu1 - 1e5).abs() < 1.0);
    // Defaults pin the documented tolerances.
    let d = DiscrepancyConfig::<f64>::default();
    assert_eq!(d.eta, 1.0);
    assert_eq!(d.eps_inner, 5e-8);
    assert_eq!(d.eps1, 5e-4);
    assert_eq!(d.eps2, 5e-3);
    assert_eq!(d.max_inner, 5000);
    let cfg = BenchConfig::default();
    assert_eq!(cfg.objective.nu, 0.0415);
    assert_eq!(cfg.run.groundtruth_iters, 1500);
    println!("documented-defaults sanity: PASS");
}
