//! Symmetry preconditions behind the closed-form energy identities: the
//! metric must be cyclic in the 3-direction (Σ_l ∂_l gˡ³ = 0) and the flow
//! must be the unit 3-direction field. Both are scanned over a sample grid
//! and the worst offender is reported per condition.

use crate::error::Result;
use crate::geometry::families::MetricField;
use crate::numerics::mat3::{self, Vec3};
use crate::numerics::quadrature::sample_points;
use crate::numerics::tensor::QuadratureSpec;
use crate::real::{Point3, Real};

#[derive(Clone, Copy, Debug)]
pub struct SymmetryReport<T> {
    pub holds: bool,
    pub metric_condition_ok: bool,
    pub flow_condition_ok: bool,
    /// max over samples of |Σ_l ∂_l gˡ³|
    pub max_metric_deviation: T,
    pub metric_worst_point: Point3<T>,
    /// max over samples of max_i |vⁱ − δⁱ₃|
    pub max_flow_deviation: T,
    pub flow_worst_point: Point3<T>,
    pub tol: T,
}

/// Scans `region` for violations of the two symmetry conditions. The
/// velocity is sampled through `v`; any field with an evaluator fits.
pub fn killing_symmetry_check<T, F>(
    m: &MetricField<T>,
    v: F,
    region: &QuadratureSpec<T>,
    t: T,
    tol: T,
) -> Result<SymmetryReport<T>>
where
    T: Real,
    F: Fn(&Point3<T>) -> Vec3<T>,
{
    let pts = sample_points(region);
    let mut max_metric = T::zero();
    let mut metric_worst = pts[0];
    let mut max_flow = T::zero();
    let mut flow_worst = pts[0];

    for p in &pts {
        let chart = m.chart_point(p);
        let ginv = m.inverse(&chart, t)?;
        let dg = m.first_derivatives(&chart, t)?;
        // ∂_l gᶦʲ = −gᶦᵃ (∂_l g_ab) gᵇʲ; accumulate Σ_l ∂_l gˡ³.
        let mut div3 = T::zero();
        for l in 0..3 {
            let t1 = mat3::mat_mul(&ginv, &dg[l]);
            let t2 = mat3::mat_mul(&t1, &ginv);
            div3 = div3 - t2[l][2];
        }
        if div3.abs() > max_metric {
            max_metric = div3.abs();
            metric_worst = *p;
        }

        let vel = v(p);
        let target = [T::zero(), T::zero(), T::one()];
        let mut dev = T::zero();
        for i in 0..3 {
            dev = dev.max((vel[i] - target[i]).abs());
        }
        if dev > max_flow {
            max_flow = dev;
            flow_worst = *p;
        }
    }

    let metric_ok = max_metric < tol;
    let flow_ok = max_flow < tol;
    Ok(SymmetryReport {
        holds: metric_ok && flow_ok,
        metric_condition_ok: metric_ok,
        flow_condition_ok: flow_ok,
        max_metric_deviation: max_metric,
        metric_worst_point: metric_worst,
        max_flow_deviation: max_flow,
        flow_worst_point: flow_worst,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region() -> QuadratureSpec<f64> {
        QuadratureSpec::unit_box(3)
    }

    #[test]
    fn flat_metric_with_unit_axis_flow_passes() {
        let m = MetricField::<f64>::flat();
        let rep =
            killing_symmetry_check(&m, |_p| [0.0, 0.0, 1.0], &region(), 0.0, 1e-8).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.max_metric_deviation, 0.0);
        assert_eq!(rep.max_flow_deviation, 0.0);
    }

    #[test]
    fn shear_flow_fails_the_flow_condition() {
        let m = MetricField::<f64>::flat();
        let rep =
            killing_symmetry_check(&m, |p| [0.0, 0.0, p[0]], &region(), 0.0, 1e-8).unwrap();
        assert!(!rep.holds);
        assert!(rep.metric_condition_ok);
        assert!(!rep.flow_condition_ok);
        // Worst offender sits at the smallest sampled x₁ (|x₁ − 1| largest).
        assert!(rep.max_flow_deviation > 0.5);
    }

    #[test]
    fn axis_dependent_metric_fails_the_metric_condition() {
        let m = MetricField::<f64>::diagonal_custom(
            |_| 1.0,
            |_| 1.0,
            |p| 1.0 + 0.5 * p[2] * p[2],
        );
        let rep =
            killing_symmetry_check(&m, |_p| [0.0, 0.0, 1.0], &region(), 0.0, 1e-6).unwrap();
        assert!(!rep.holds);
        assert!(!rep.metric_condition_ok);
        assert!(rep.flow_condition_ok);
    }
}
