//! Randomized invariants: the decomposition identity, trace-freedom of the
//! shear, quadratic energy scaling, and classifier monotonicity.

use proptest::prelude::*;

use rdl_core::energy::{classify, magnetic_energy, DynamoClass};
use rdl_core::geometry::MetricField;
use rdl_core::induction::MagneticField;
use rdl_core::kinematics::{covariant_gradient, decompose, VelocityField};
use rdl_core::numerics::{mat3, QuadratureSpec};

fn entry() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn linear_matrix() -> impl Strategy<Value = [[f64; 3]; 3]> {
    [
        [entry(), entry(), entry()],
        [entry(), entry(), entry()],
        [entry(), entry(), entry()],
    ]
}

fn chart_point() -> impl Strategy<Value = [f64; 3]> {
    [0.3f64..1.3, 0.3f64..1.3, 0.3f64..1.3]
}

fn metrics() -> Vec<MetricField<f64>> {
    vec![
        MetricField::flat(),
        MetricField::round_sphere(1.0).unwrap(),
        MetricField::hyperbolic_space(2.0).unwrap(),
    ]
}

proptest! {
    #[test]
    fn decomposition_reconstructs_gradient(a in linear_matrix(), p in chart_point()) {
        let v = VelocityField::linear_gradient(a);
        for m in metrics() {
            let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
            let d = decompose(&grad, &m, &p, 0.0).unwrap();
            let g = m.value(&m.chart_point(&p), 0.0);
            let back = d.reconstruct(&g);
            let mut scale = 1.0f64;
            for row in &grad {
                for x in row {
                    scale = scale.max(x.abs());
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!(
                        (back[i][j] - grad[i][j]).abs() <= 1e-10 * scale,
                        "{} vs {} on {}", back[i][j], grad[i][j], m.family_name()
                    );
                }
            }
        }
    }

    #[test]
    fn shear_is_trace_free(a in linear_matrix(), p in chart_point()) {
        let v = VelocityField::linear_gradient(a);
        for m in metrics() {
            let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
            let d = decompose(&grad, &m, &p, 0.0).unwrap();
            let g = m.value(&m.chart_point(&p), 0.0);
            let ginv = mat3::inv3(&g).unwrap();
            let mut trace = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    trace += ginv[i][j] * d.shear.get(j, i);
                }
            }
            let mut scale = 1.0f64;
            for row in &grad {
                for x in row {
                    scale = scale.max(x.abs());
                }
            }
            prop_assert!(trace.abs() <= 1e-10 * scale, "trace {trace} on {}", m.family_name());
        }
    }

    #[test]
    fn energy_scales_quadratically(b in [entry(), entry(), entry()], c in 0.1f64..4.0) {
        prop_assume!(b.iter().any(|x| x.abs() > 1e-3));
        let q = QuadratureSpec::unit_box(4);
        for m in metrics() {
            let base = magnetic_energy(&MagneticField::uniform(b), &m, &q, 0.0).unwrap();
            let scaled_b = [c * b[0], c * b[1], c * b[2]];
            let scaled = magnetic_energy(&MagneticField::uniform(scaled_b), &m, &q, 0.0).unwrap();
            prop_assert!(
                (scaled - c * c * base).abs() <= 1e-10 * scaled.abs().max(base.abs()).max(1.0),
                "{} vs {} on {}", scaled, c * c * base, m.family_name()
            );
        }
    }

    #[test]
    fn classifier_is_monotone_in_each_scalar(
        sigma in entry(), omega in entry(), theta in entry(), lambda in entry(), d in 1e-3f64..1.0
    ) {
        let tol = 1e-9;
        let margin = |s: f64, w: f64, th: f64, l: f64| classify(s, w, th, l, tol).unwrap().margin;
        let base = margin(sigma, omega, theta, lambda);
        prop_assert!(margin(sigma + d, omega, theta, lambda) > base);
        prop_assert!(margin(sigma, omega + d, theta, lambda) > base);
        prop_assert!(margin(sigma, omega, theta, lambda + d) > base);
        // Anti-monotone in the expansion scalar.
        prop_assert!(margin(sigma, omega, theta + d, lambda) < base);
    }

    #[test]
    fn verdict_follows_margin_sign(margin in -2.0f64..2.0) {
        prop_assume!(margin.abs() > 1e-6);
        let v = classify(margin, 0.0, 0.0, 0.0, 1e-9).unwrap();
        let expect = if margin > 0.0 { DynamoClass::Fast } else { DynamoClass::Decaying };
        prop_assert_eq!(v.class, expect);
    }
}
