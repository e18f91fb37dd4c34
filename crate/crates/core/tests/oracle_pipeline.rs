//! Cross-checks the analytic geometry pipeline against independent oracles:
//! sampled (finite-difference) copies of the curved families, the linear
//! closed form of the constant-curvature flow, and the frozen-eigenvalue
//! approximation bound.

use rdl_core::geometry::{ricci, MetricField};
use rdl_core::ricci_flow::{evolve, lyapunov_metric, ricci_eigenvalues, TrajectoryData};

/// Sampled copy of the constant-curvature metrics: every derivative inside
/// the curvature pipeline then comes from finite differences.
fn sampled_sphere(r: f64) -> MetricField<f64> {
    let r2 = r * r;
    MetricField::diagonal_custom(
        move |_p: &[f64; 3]| r2,
        move |p: &[f64; 3]| r2 * p[0].sin().powi(2),
        move |p: &[f64; 3]| r2 * p[0].sin().powi(2) * p[1].sin().powi(2),
    )
}

fn sampled_hyperbolic(r: f64) -> MetricField<f64> {
    let r2 = r * r;
    MetricField::diagonal_custom(
        move |_p: &[f64; 3]| r2,
        move |p: &[f64; 3]| r2 * p[0].sinh().powi(2),
        move |p: &[f64; 3]| r2 * p[0].sinh().powi(2) * p[1].sin().powi(2),
    )
}

const PROBES: [[f64; 3]; 4] = [
    [0.9, 1.1, 0.4],
    [0.6, 0.8, 2.0],
    [1.3, 1.2, 5.1],
    [1.0, 0.5, 3.3],
];

/// max_ij |R_ij − λ g_ij| / max_ij |λ g_ij| over the probe set.
fn einstein_residual(m: &MetricField<f64>, lambda: f64) -> f64 {
    let mut worst = 0.0f64;
    for p in &PROBES {
        let rep = ricci(m, p, 0.0).unwrap();
        let g = m.value(p, 0.0);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                num = num.max((rep.ricci.get(i, j) - lambda * g[i][j]).abs());
                den = den.max((lambda * g[i][j]).abs());
            }
        }
        worst = worst.max(num / den);
    }
    worst
}

#[test]
fn sampled_constant_curvature_metrics_match_closed_form() {
    for r in [0.5f64, 1.0, 2.0] {
        let lam = 2.0 / (r * r);
        let res_s = einstein_residual(&sampled_sphere(r), lam);
        assert!(res_s < 1e-5, "sphere r={r}: residual {res_s:.3e}");
        let res_h = einstein_residual(&sampled_hyperbolic(r), -lam);
        assert!(res_h < 1e-5, "hyperbolic r={r}: residual {res_h:.3e}");
    }
}

#[test]
fn analytic_families_match_closed_form_tightly() {
    for r in [0.5f64, 1.0, 2.0] {
        let lam = 2.0 / (r * r);
        let s = MetricField::round_sphere(r).unwrap();
        assert!(einstein_residual(&s, lam) < 1e-9);
        let h = MetricField::hyperbolic_space(r).unwrap();
        assert!(einstein_residual(&h, -lam) < 1e-9);
    }
}

#[test]
fn scale_flow_tracks_linear_closed_form() {
    // Shrinking sphere and expanding hyperbolic space: c(t) = 1 − 2Λt.
    for (m, lambda) in [
        (MetricField::round_sphere(1.0f64).unwrap(), 2.0),
        (MetricField::hyperbolic_space(1.0f64).unwrap(), -2.0),
    ] {
        let traj = evolve(&m, (0.0, 0.1), 1e-3).unwrap();
        let TrajectoryData::Scale { scales, .. } = &traj.data else {
            panic!("constant-curvature flow must produce scale data");
        };
        for (t, c) in traj.times.iter().zip(scales.iter()) {
            let exact = 1.0 - 2.0 * lambda * t;
            assert!(
                (c - exact).abs() / exact.abs() < 1e-8,
                "lambda={lambda}, t={t}: scale {c} vs {exact}"
            );
        }
    }
}

#[test]
fn frozen_eigenvalue_scale_within_quadratic_bound() {
    // e^{−2Λt} vs 1 − 2Λt on the shrinking sphere: |difference| ≤ 2(Λt)².
    let lambda = 2.0f64;
    let m = MetricField::round_sphere(1.0f64).unwrap();
    let frozen = lyapunov_metric(lambda).unwrap();
    let traj = evolve(&m, (0.0, 0.1), 1e-3).unwrap();
    let TrajectoryData::Scale { scales, .. } = &traj.data else {
        panic!("scale data expected");
    };
    let p = [0.4f64, 0.3, 0.2];
    for (t, c) in traj.times.iter().zip(scales.iter()) {
        let frozen_scale = frozen.value(&p, *t)[0][0];
        let dev = (frozen_scale - c).abs();
        let bound = 2.0 * (lambda * t).powi(2);
        assert!(
            dev <= bound + 1e-12,
            "t={t}: |{frozen_scale} − {c}| = {dev:.3e} > {bound:.3e}"
        );
    }
}

#[test]
fn spectrum_exponents_negate_eigenvalues_with_sign_caveat() {
    let p = [0.9f64, 1.1, 0.4];

    let sphere = MetricField::round_sphere(1.0f64).unwrap();
    let spec = ricci_eigenvalues(&sphere, &p, 0.0).unwrap();
    for i in 0..3 {
        assert_eq!(spec.exponents[i], -spec.eigenvalues[i]);
        assert!((spec.exponents[i] + 2.0).abs() < 1e-9);
        assert!(!spec.sign_condition[i], "positive curvature shrinks");
    }

    let hyper = MetricField::hyperbolic_space(1.0f64).unwrap();
    let spec = ricci_eigenvalues(&hyper, &p, 0.0).unwrap();
    for i in 0..3 {
        assert_eq!(spec.exponents[i], -spec.eigenvalues[i]);
        assert!((spec.exponents[i] - 2.0).abs() < 1e-9);
        assert!(spec.sign_condition[i]);
    }

    let flat = MetricField::<f64>::flat();
    let spec = ricci_eigenvalues(&flat, &p, 0.0).unwrap();
    for i in 0..3 {
        assert_eq!(spec.exponents[i], 0.0);
        // λ = 0 sits inside the λ ≤ 0 condition.
        assert!(spec.sign_condition[i]);
    }
}
