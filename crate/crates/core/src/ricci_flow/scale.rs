//! Scale-factor Ricci flow for constant-curvature families. Writing
//! g(t) = c(t)·g₀ turns ∂g/∂t = −2R into the scalar ODE
//! c′ = −⅔ g₀ᶦʲ R_ij(c·g₀); curvature is re-evaluated numerically at every
//! RK4 stage, so the linear closed form stays an independent oracle.

use crate::error::{Error, Result};
use crate::geometry::{curvature, MetricField};
use crate::numerics::{mat3, ode};
use crate::real::{Point3, Real};
use crate::ricci_flow::{grid, MetricTrajectory, TrajectoryData};

/// Interior chart point at which the scale ODE samples curvature; safely
/// inside the hyperspherical guard bands.
fn probe_point<T: Real>() -> Point3<T> {
    [T::of(0.9), T::of(1.1), T::of(0.4)]
}

/// Einstein constant of a constant-curvature family, measured numerically
/// at the probe point.
pub(crate) fn einstein_lambda<T: Real>(m: &MetricField<T>, t: T) -> Result<T> {
    Ok(curvature::ricci(m, &probe_point(), t)?.lambda_hat)
}

/// Evolves `m0` from `t_span.0` to `t_span.1` under the Ricci flow.
///
/// Constant-curvature families evolve by scale factor; `DiagonalCustom`
/// dispatches to the grid integrator over its default grid. The conformal
/// Lyapunov family prescribes its own time dependence and is not a flow
/// solution, so it is rejected.
pub fn evolve<T: Real>(
    m0: &MetricField<T>,
    t_span: (T, T),
    dt: T,
) -> Result<MetricTrajectory<T>> {
    match m0 {
        MetricField::EuclideanFlat
        | MetricField::RoundSphere { .. }
        | MetricField::HyperbolicSpace { .. }
        | MetricField::EinsteinScaled { .. } => evolve_scale(m0, t_span, dt),
        MetricField::DiagonalCustom { .. } => {
            grid::evolve_on_grid(m0, &grid::FlowGrid::default_unit(), t_span, dt)
        }
        MetricField::ConformalLyapunov { .. } => Err(Error::invalid(
            "conformal Lyapunov metrics prescribe their own time dependence; \
             they are not closed under the Ricci flow",
        )),
    }
}

fn evolve_scale<T: Real>(
    m0: &MetricField<T>,
    (t0, t1): (T, T),
    dt: T,
) -> Result<MetricTrajectory<T>> {
    if !(dt > T::zero()) {
        return Err(Error::invalid("evolve requires dt > 0"));
    }
    if t1 < t0 {
        return Err(Error::invalid("evolve requires t1 >= t0"));
    }
    let probe = probe_point::<T>();
    m0.check_positive_definite(&probe, t0)?;
    let g0 = m0.value(&probe, t0);
    let g0_inv = mat3::inv3(&g0).ok_or_else(|| Error::SingularMetric {
        point: crate::real::point_as_f64(&probe),
    })?;
    // Λ of the initial metric: used only to extrapolate the critical time
    // when a step degenerates mid-flight.
    let lambda0 = einstein_lambda(m0, t0)?;

    let third = T::of(1.0 / 3.0);
    let two = T::of(2.0);
    let rhs = |_t: T, y: &[T], dy: &mut [T]| {
        let c = y[0];
        dy[0] = match scaled_ricci_trace(m0, &probe, c, t0, &g0_inv) {
            Some(tr) => -(two) * third * tr,
            None => T::nan(),
        };
    };

    let mut times = vec![t0];
    let mut scales = vec![T::one()];
    let mut t = t0;
    let mut c = T::one();
    let slack = T::of(1e-12) * dt.max(T::one());
    while t < t1 - slack {
        let step = dt.min(t1 - t);
        let next = match ode::ode_step(&[c], rhs, t, step) {
            Ok(v) => v[0],
            Err(Error::NumericalBlowup { .. }) => {
                // A stage sampled a degenerate metric: c hits zero inside
                // this step. Extrapolate the crossing from the linear law.
                let t_crit = if lambda0 > T::zero() {
                    t + c / (two * lambda0)
                } else {
                    t
                };
                return Err(Error::FlowSingularity {
                    time: t_crit.as_f64(),
                });
            }
            Err(e) => return Err(e),
        };
        if !(next > T::zero()) {
            // Interpolate the zero crossing of the (linear) scale factor.
            let t_crit = t + step * c / (c - next);
            return Err(Error::FlowSingularity {
                time: t_crit.as_f64(),
            });
        }
        t = t + step;
        c = next;
        times.push(t);
        scales.push(c);
    }

    Ok(MetricTrajectory {
        family: m0.family_name(),
        dt,
        times,
        data: TrajectoryData::Scale {
            base: m0.clone(),
            scales,
        },
    })
}

/// g₀ᶦʲ R_ij(c·g₀) at the probe, or `None` when the scaled metric is no
/// longer a valid input.
fn scaled_ricci_trace<T: Real>(
    m0: &MetricField<T>,
    probe: &Point3<T>,
    c: T,
    t0: T,
    g0_inv: &crate::numerics::Mat3<T>,
) -> Option<T> {
    if !(c > T::zero()) || !c.is_finite() {
        return None;
    }
    let scaled = MetricField::einstein_scaled(m0.clone(), c).ok()?;
    let rep = curvature::ricci(&scaled, probe, t0).ok()?;
    let mut tr = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            tr = tr + g0_inv[i][j] * rep.ricci.get(i, j);
        }
    }
    Some(tr)
}
