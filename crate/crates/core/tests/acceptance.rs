//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Known construction defects are
//! reproduced as expected flags, not failures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use witnesskit::operator::ZERO_EIG_RTOL;
use witnesskit::productopt::{
    alternating_descent, OptConfig, DEFAULT_DEN_FLOOR, DESCENT_TOL, MAX_SWEEPS,
};
use witnesskit::*;

fn pass(name: &str, detail: &str) {
    println!("PASS {name}: {detail}");
}

fn flag(name: &str, detail: &str) {
    println!("FLAG-expected {name}: {detail}");
}

fn eq17_parts() -> (TensorOperator, TensorOperator) {
    let s = TensorSpace::bipartite(2, 4).unwrap();
    let a = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 2]);
    let b1 = basis_ket(&s, &[0, 3]) + basis_ket(&s, &[1, 2]);
    let b2 = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 0]);
    let p = TensorOperator::projector_sum(s.clone(), &[a], false).unwrap();
    let q = TensorOperator::projector_sum(s, &[b1, b2], false).unwrap();
    (p, q)
}

fn eq20_parts() -> (TensorOperator, TensorOperator) {
    let s = TensorSpace::new(&[2, 2, 2]).unwrap();
    let ker = basis_ket(&s, &[1, 1, 1]) - basis_ket(&s, &[0, 0, 0]);
    let pt_ker = basis_ket(&s, &[1, 1, 0]) - basis_ket(&s, &[0, 0, 1]);
    let p = TensorOperator::projector_sum(s.clone(), &[ker], false).unwrap();
    let q = TensorOperator::projector_sum(s, &[pt_ker], false).unwrap();
    (p, q)
}

fn bell_in_qutrits() -> DensityState {
    let s = TensorSpace::bipartite(3, 3).unwrap();
    pure_bipartite(
        &[
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ],
        &s,
    )
    .unwrap()
}

fn random_hermitian(space: &TensorSpace, rng: &mut ChaCha8Rng) -> TensorOperator {
    let n = space.total();
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    TensorOperator::new(space.clone(), (&a + a.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

#[test]
fn criterion_01_golden_matrices() {
    let name = "criterion 1 (golden matrices)";
    let (p17, q17) = eq17_parts();
    let s24 = TensorSpace::bipartite(2, 4).unwrap();
    for eps in [0.1, 0.25, 0.5] {
        let w = edge_witness(&p17, &q17, eps, 0).unwrap();
        let diag = [
            -eps,
            2.0 - eps,
            -eps,
            1.0 - eps,
            1.0 - eps,
            -eps,
            2.0 - eps,
            -eps,
        ];
        let mut rows = vec![vec![0.0f64; 8]; 8];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = *d;
        }
        for (i, j) in [(0, 5), (1, 6), (2, 7)] {
            rows[i][j] = 1.0;
            rows[j][i] = 1.0;
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let expected = TensorOperator::from_real(s24.clone(), &refs).unwrap();
        assert_eq!(
            w.operator().entries(),
            expected.entries(),
            "edge witness at eps={eps} must match entry-for-entry"
        );
    }

    let (p20, q20) = eq20_parts();
    let s222 = TensorSpace::new(&[2, 2, 2]).unwrap();
    for k in [0.1, 0.25, 0.5] {
        let w = w1_witness(&q20, &p20, k, 2).unwrap();
        let diag = [0.0, 1.0 - k, -k, -k, -k, -k, 1.0 - k, 0.0];
        let mut rows = vec![vec![0.0f64; 8]; 8];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = *d;
        }
        rows[0][7] = -k - 1.0;
        rows[7][0] = -k - 1.0;
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let expected = TensorOperator::from_real(s222.clone(), &refs).unwrap();
        assert_eq!(
            w.operator().entries(),
            expected.entries(),
            "tripartite witness at k={k} must match entry-for-entry"
        );
    }
    pass(name, "both literal matrices reproduced exactly at eps,k in {0.1, 0.25, 0.5}");
}

#[test]
fn criterion_02_shared_eigenvector_traces() {
    let name = "criterion 2 (shared-eigenvector traces)";
    let rho1 = bell_in_qutrits();
    let rho2 = max_entangled(3).unwrap();
    let r = common_npt_witness(&rho1, &rho2, 0, ZERO_EIG_RTOL).unwrap();
    assert_eq!(r.method, CommonMethod::Theorem1);
    assert!(
        (r.evidence[0] + 0.5).abs() < 1e-10,
        "trace on the rank-2 state: {}",
        r.evidence[0]
    );
    assert!(
        (r.evidence[1] + 1.0 / 3.0).abs() < 1e-10,
        "trace on the rank-3 state: {}",
        r.evidence[1]
    );
    pass(
        name,
        &format!(
            "traces ({:.12}, {:.12}) match (-1/2, -1/3)",
            r.evidence[0], r.evidence[1]
        ),
    );
}

#[test]
fn criterion_03_tripartite_traces() {
    let name = "criterion 3 (tripartite traces)";
    let (p, q) = eq20_parts();
    let k = 0.3;
    let w = w1_witness(&q, &p, k, 2).unwrap();
    let d1 = delta_tri(1.0, 1.0, 1.0).unwrap();
    let d2 = delta_tri(1.0, 2.0, 2.0).unwrap();
    let t1 = evaluate(&w, &d1).unwrap();
    let t2 = evaluate(&w, &d2).unwrap();
    assert!((t1 + k).abs() < 1e-10, "trace on (1,1,1): {t1}");
    assert!((t2 + k).abs() < 1e-10, "trace on (1,2,2): {t2}");
    pass(name, &format!("both traces equal -k at k = {k}"));
}

#[test]
fn criterion_04_isotropic_threshold() {
    let name = "criterion 4 (isotropic threshold)";
    let w2 = schmidt_witness(3, 2).unwrap();
    let step = 1e-3;
    let mut previous: Option<(f64, f64)> = None;
    let mut bracket = None;
    let mut alpha: f64 = -0.125;
    while alpha <= 1.0 + 1e-12 {
        let a = alpha.min(1.0);
        let omega = isotropic(a).unwrap();
        let trace = evaluate(&w2, &omega).unwrap();
        let formula = (2.0 - 8.0 * a) / 3.0;
        assert!(
            (trace - formula).abs() < 1e-12,
            "alpha={a}: trace {trace} vs formula {formula}"
        );
        if let Some((pa, pt)) = previous {
            if pt > 0.0 && trace <= 0.0 {
                bracket = Some((pa, a));
            }
        }
        previous = Some((a, trace));
        alpha += step;
    }
    let (lo, hi) = bracket.expect("a sign change exists");
    assert!(
        lo <= 0.25 + step && 0.25 - step <= hi,
        "sign change bracket [{lo}, {hi}] must contain 0.25"
    );
    pass(
        name,
        &format!("trace matches (2-8a)/3 on the grid; sign change bracketed in [{lo:.4}, {hi:.4}]"),
    );
}

#[test]
fn criterion_05_family_scan_boundaries() {
    let name = "criterion 5 (family scan boundaries)";
    let grid = 1001;
    let step = 1.0 / (grid - 1) as f64;
    for (alpha, gamma) in [(3.5, 4.5), (3.2, 5.0), (3.9, 4.1)] {
        let u1 = horodecki_alpha(alpha).unwrap();
        let u2 = horodecki_alpha(gamma).unwrap();
        let report = lambda_scan(&u1, &u2, grid, 1, None).unwrap();
        let expected = (gamma - 4.0) / (gamma - alpha);
        let (lo, hi) = report.first_boundary().expect("one transition");
        assert!(
            lo <= expected + step && expected - step <= hi,
            "(alpha, gamma) = ({alpha}, {gamma}): bracket [{lo}, {hi}] vs {expected}"
        );
    }
    pass(name, "NPT/PPT transition brackets (gamma-4)/(gamma-alpha) for all three pairs");
}

#[test]
fn criterion_06_spot_classification() {
    let name = "criterion 6 (spot classification)";
    let s = TensorSpace::bipartite(3, 3).unwrap();

    let rho1 = horodecki_alpha(3.5).unwrap();
    let rho2 = pure_bipartite(&[0.5, 0.75f64.sqrt()], &s).unwrap();
    let mix = mix_pair(&rho1, &rho2, 0.5).unwrap();
    let eig_npt = mix.pt_min_eigenvalue(1).unwrap();
    assert!(eig_npt < -1e-10, "lambda=0.5, beta=0.5 must be NPT: {eig_npt}");

    let beta = 0.005;
    let rho2 = pure_bipartite(&[beta, (1.0 - beta * beta).sqrt()], &s).unwrap();
    let mix = mix_pair(&rho1, &rho2, 0.9).unwrap();
    let eig_ppt = mix.pt_min_eigenvalue(1).unwrap();
    assert!(
        eig_ppt >= -1e-10,
        "lambda=0.9, beta=0.005 must be PPT: {eig_ppt}"
    );
    pass(
        name,
        &format!("min PT eigenvalues {eig_npt:.3e} (NPT) and {eig_ppt:.3e} (PPT)"),
    );
}

#[test]
fn criterion_07_schmidt_witness_ranges() {
    let name = "criterion 7 (schmidt witness ranges)";
    let s = TensorSpace::bipartite(3, 3).unwrap();
    let w3 = schmidt_witness(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let a = rng.gen_range(0.25..=0.65);
        let b = rng.gen_range(0.25..=0.65);
        let x = rng.gen_range(0.25..=0.65);
        let y = rng.gen_range(0.25..=0.65);
        let phi1 = pure_bipartite(&[a, b, (1.0 - a * a - b * b).sqrt()], &s).unwrap();
        let phi2 = pure_bipartite(&[x, y, (1.0 - x * x - y * y).sqrt()], &s).unwrap();
        let t1 = evaluate(&w3, &phi1).unwrap();
        let t2 = evaluate(&w3, &phi2).unwrap();
        assert!(t1 < 0.0, "({a}, {b}): trace {t1}");
        assert!(t2 < 0.0, "({x}, {y}): trace {t2}");
    }
    pass(name, "class-3 witness negative on both states for 100 draws in [0.25, 0.65]^4");
}

#[test]
fn criterion_08_optimizer_soundness() {
    let name = "criterion 8 (optimizer soundness)";
    let cfg = OptConfig::default();

    // random operators on 2x2 against a 16-step oracle
    let s22 = TensorSpace::bipartite(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..20 {
        let op = random_hermitian(&s22, &mut rng);
        let opt = min_product_expectation(&op, &cfg);
        let oracle = grid_min_expectation(&op, 16).unwrap();
        let bound = grid_resolution_bound(&op, 16);
        assert!(
            (opt.value - oracle).abs() <= 1e-3 + bound,
            "random op {i}: optimizer {} vs oracle {} (bound {})",
            opt.value,
            oracle,
            bound
        );
    }

    // the 2x4 construction against a 12-step oracle
    let (p17, q17) = eq17_parts();
    let base17 = p17.add(&q17.partial_transpose(0).unwrap()).unwrap();
    let opt17 = min_product_expectation(&base17, &cfg);
    let oracle17 = grid_min_expectation(&base17, 12).unwrap();
    assert!(oracle17.abs() <= 1e-3);
    assert!((opt17.value - oracle17).abs() <= 1e-3 + grid_resolution_bound(&base17, 12));

    // the assembled tripartite witness against a 12-step oracle
    let (p20, q20) = eq20_parts();
    let w20 = w1_witness(&q20, &p20, 0.3, 2).unwrap();
    let opt20 = min_product_expectation(w20.operator(), &cfg);
    let oracle20 = grid_min_expectation(w20.operator(), 12).unwrap();
    assert!(
        (opt20.value - oracle20).abs() <= 1e-3 + grid_resolution_bound(w20.operator(), 12)
    );

    // alternating updates are monotone on every sweep
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in [&base17, w20.operator()] {
            let start = ProductVector::random(op.space(), &mut rng);
            let run = alternating_descent(op, start, MAX_SWEEPS, DESCENT_TOL);
            let slack = 1e-12 * (1.0 + op.max_abs());
            for w in run.objectives.windows(2) {
                assert!(w[1] <= w[0] + slack, "sweep objective increased");
            }
        }
    }
    pass(
        name,
        &format!(
            "optimizer/oracle gaps within bounds; monotone sweeps (edge base min {:.3e}, tripartite min {:.3e})",
            opt17.value, opt20.value
        ),
    );
}

#[test]
fn criterion_09_property_suites() {
    let name = "criterion 9 (property suites)";
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s33 = TensorSpace::bipartite(3, 3).unwrap();

    // partial-transpose involution is exact
    for _ in 0..50 {
        let op = random_hermitian(&s33, &mut rng);
        let back = op
            .partial_transpose(0)
            .unwrap()
            .partial_transpose(0)
            .unwrap();
        assert_eq!(back.entries(), op.entries());
    }

    // eigendecomposition reconstructs 1000 random Hermitian operators
    for _ in 0..1000 {
        let op = random_hermitian(&s33, &mut rng);
        let spectrum = op.eigh();
        let rebuilt = spectrum.reconstruct(&s33);
        let tol = 1e-9 * spectrum.max_abs().max(1e-300);
        assert!(rebuilt.approx_eq(&op, tol), "reconstruction drift above 1e-9 * max|lambda|");
    }

    // 1000 in-range zoo draws satisfy the density-state invariants
    // (constructors re-validate trace and positivity on every call)
    for i in 0..1000 {
        let state = match i % 5 {
            0 => tau(rng.gen_range(0.05..0.95), 0.0).unwrap(),
            1 => {
                let b = rng.gen_range(0.05..0.95);
                tau(b, rng.gen_range(-b..b) * 0.99).unwrap()
            }
            2 => delta_tri(
                rng.gen_range(0.1..5.0),
                rng.gen_range(0.1..5.0),
                rng.gen_range(0.1..5.0),
            )
            .unwrap(),
            3 => horodecki_alpha(rng.gen_range(0.0..=5.0)).unwrap(),
            _ => isotropic(rng.gen_range(-0.125..=1.0)).unwrap(),
        };
        assert!((state.op().trace() - 1.0).abs() <= 1e-12);
        assert!(state.op().min_eigenvalue() >= -1e-10);
    }

    // evaluate is linear in the state argument
    let w = schmidt_witness(3, 2).unwrap();
    for _ in 0..100 {
        let a = isotropic(rng.gen_range(-0.125..=1.0)).unwrap();
        let b = horodecki_alpha(rng.gen_range(0.0..=5.0)).unwrap();
        let lambda = rng.gen_range(0.0..=1.0);
        let mix = mix_pair(&a, &b, lambda).unwrap();
        let lhs = evaluate(&w, &mix).unwrap();
        let rhs =
            lambda * evaluate(&w, &a).unwrap() + (1.0 - lambda) * evaluate(&w, &b).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12);
    }
    pass(name, "PT involution exact; eigh reconstruction <= 1e-9; 1000 zoo draws valid; linearity <= 1e-12");
}

#[test]
fn criterion_10_construction_defects_reproduced() {
    let name = "criterion 10 (construction-defect flags)";
    let cfg = OptConfig::default();

    // the edge witness at eps = 0.1 reads off -0.1 at the product state |00>
    let (p17, q17) = eq17_parts();
    let w = edge_witness(&p17, &q17, 0.1, 0).unwrap();
    let report = validate_witness(&w, &cfg);
    assert!(
        (report.min_product_expectation + 0.1).abs() <= 1e-9,
        "min product expectation {} should be -0.1",
        report.min_product_expectation
    );
    assert!(!report.is_def3_witness);
    let p00 = ProductVector::basis(w.operator().space(), &[0, 0]);
    assert_eq!(product_expectation(w.operator(), &p00).unwrap(), -0.1);
    let re_eval = product_expectation(w.operator(), &report.argmin).unwrap();
    assert!((re_eval - report.min_product_expectation).abs() <= 1e-10);
    flag(
        name,
        "offset edge witness evaluates to -eps on the product state |00> (not a witness)",
    );

    // offset infima of all three constructions vanish
    let base17 = p17.add(&q17.partial_transpose(0).unwrap()).unwrap();
    let eps0 = min_product_expectation(&base17, &cfg);
    assert!(eps0.value.abs() <= 1e-6, "edge offset infimum {}", eps0.value);
    flag(name, &format!("edge-form offset infimum {:.2e} <= 1e-6", eps0.value));

    let (p20, q20) = eq20_parts();
    let num = q20.partial_transpose(2).unwrap();
    let den = TensorOperator::identity(num.space().clone()).sub(&p20).unwrap();
    let k0 = min_ratio_product(&num, &den, DEFAULT_DEN_FLOOR, &cfg).unwrap();
    assert!(k0.value.abs() <= 1e-6, "tripartite ratio infimum {}", k0.value);
    flag(name, &format!("tripartite offset infimum {:.2e} <= 1e-6", k0.value));

    let s33 = TensorSpace::bipartite(3, 3).unwrap();
    let v1 = basis_ket(&s33, &[1, 1]) - basis_ket(&s33, &[0, 0]);
    let v2 = basis_ket(&s33, &[2, 2]) - basis_ket(&s33, &[0, 0]);
    let p31 = TensorOperator::projector_sum(s33, &[v1, v2], false).unwrap();
    let eps31 = min_product_expectation(&p31, &cfg);
    assert!(eps31.value.abs() <= 1e-6, "projector offset infimum {}", eps31.value);
    flag(name, &format!("projector-form offset infimum {:.2e} <= 1e-6", eps31.value));

    pass(name, "all known construction defects reproduced as expected flags");
}

#[test]
fn criterion_11_common_witness_forward_property() {
    let name = "criterion 11 (forward property on mixes)";
    let s33 = TensorSpace::bipartite(3, 3).unwrap();
    let cfg = OptConfig::default();

    let mut checked = 0usize;
    let mut verify = |result: &CommonWitnessResult, a: &DensityState, b: &DensityState| {
        if let Some(w) = &result.witness {
            for i in 0..101 {
                let lambda = i as f64 / 100.0;
                let mix = mix_pair(a, b, lambda).unwrap();
                let t = evaluate(w, &mix).unwrap();
                assert!(
                    t < -1e-10,
                    "mix at lambda={lambda} not detected: trace {t}"
                );
            }
            checked += 1;
        }
    };

    let rho1 = bell_in_qutrits();
    let rho2 = max_entangled(3).unwrap();
    let r = common_npt_witness(&rho1, &rho2, 0, ZERO_EIG_RTOL).unwrap();
    verify(&r, &rho1, &rho2);

    let d1 = tau(0.4, 0.0).unwrap();
    let d2 = tau(0.5, 0.0).unwrap();
    let r = common_edge_witness(&d1, &d2, 0, OffsetMode::Fixed(0.25), false, &cfg).unwrap();
    verify(&r, &d1, &d2);

    let t1 = delta_tri(1.0, 1.0, 1.0).unwrap();
    let t2 = delta_tri(1.0, 2.0, 2.0).unwrap();
    let r = common_edge_witness(&t1, &t2, 2, OffsetMode::Fixed(0.25), false, &cfg).unwrap();
    verify(&r, &t1, &t2);

    let phi1 = pure_bipartite(&[0.5, 0.5, 0.5f64.sqrt()], &s33).unwrap();
    let phi2 = pure_bipartite(&[0.5, 0.5, 0.5f64.sqrt()], &s33).unwrap();
    let r = common_schmidt_witness(&[(phi1.clone(), None), (phi2.clone(), None)], 3).unwrap();
    verify(&r, &phi1, &phi2);

    let chi = pure_bipartite(&[0.7, 0.51f64.sqrt()], &s33).unwrap();
    let r = common_schmidt_witness(&[(phi1.clone(), None), (chi.clone(), None)], 3).unwrap();
    verify(&r, &phi1, &chi);

    let omega = isotropic(0.5).unwrap();
    let r = common_schmidt_witness(&[(omega.clone(), Some(2)), (chi.clone(), None)], 3).unwrap();
    verify(&r, &omega, &chi);

    assert_eq!(checked, 6, "every search above must return a witness");
    pass(
        name,
        "all six returned witnesses stay negative on 101-point mixes",
    );
}
