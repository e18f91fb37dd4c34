//! Magnetic energy over a box region, its growth rate in two printed
//! variants that disagree on the curvature term, the marginal-dynamo shear
//! condition, the fast/marginal/decaying classifier, and a pure
//! finite-difference oracle for the rate.
//!
//! The two rate variants are deliberately not reconciled: the general form
//! carries a −4R_lp term where the Einstein-space reduction carries +2Λg_lp,
//! and the source derivation between them is not reproducible. Both are
//! computed and reported side by side; [`EnergyReport`] flags when they
//! diverge.

use crate::error::{Error, Result};
use crate::geometry::{einstein_fit, ricci, volume_element, MetricField};
use crate::induction::{evolve_b, InductionForm, MagneticField};
use crate::kinematics::{FlowDecomposition, FrameMode, VelocityField};
use crate::numerics::quadrature::box_integrate_try;
use crate::numerics::tensor::{QuadratureSpec, SymTensor3};
use crate::numerics::{mat3, Vec3};
use crate::real::Real;

/// Residual tolerance for the Einstein check backing the reduced-bracket
/// rate variant.
pub const EINSTEIN_RATE_TOL: f64 = 1e-8;

/// ε = ∫ Bⁱ g_ij Bʲ √det g dV over the quadrature box.
///
/// The bare volume element of the source formula is promoted to the
/// invariant measure √det g dV so that ε is a geometric scalar.
pub fn magnetic_energy<T: Real>(
    b: &MagneticField<T>,
    m: &MetricField<T>,
    q: &QuadratureSpec<T>,
    t: T,
) -> Result<T> {
    box_integrate_try(
        |p| {
            let chart = m.chart_point(p);
            let g = m.value(&chart, t);
            let bv = b.evaluate(p, t);
            let gb = mat3::mat_vec(&g, &bv);
            let density = mat3::dot(&bv, &gb) * volume_element(m, &chart, t)?;
            if !density.is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite energy density at ({}, {}, {})",
                    p[0].as_f64(),
                    p[1].as_f64(),
                    p[2].as_f64()
                )));
            }
            Ok(density)
        },
        q,
    )
}

/// Which printed form of the energy-rate integrand to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateVariant {
    /// ∫ [2σ_pl + ½(Ω_lp − ⅓g_lpθ) − 4R_lp] BᵖBˡ dV with the Ricci tensor
    /// evaluated pointwise.
    Eq27,
    /// ∫ [2σ_pl + ½(Ω − ⅓θ + 4Λ)g_lp] BᵖBˡ dV with scalar Ω and Λ from the
    /// Einstein fit of the metric over the region.
    Eq29Chain,
}

/// dε/dt via the chosen integrand. The shear/vorticity/expansion inputs are
/// taken from a single decomposition (spatially uniform for the linear
/// flows this applies to); curvature is evaluated per quadrature node.
pub fn energy_rate<T: Real>(
    d: &FlowDecomposition<T>,
    b: &MagneticField<T>,
    m: &MetricField<T>,
    q: &QuadratureSpec<T>,
    t: T,
    variant: RateVariant,
) -> Result<T> {
    let third = T::of(1.0 / 3.0);
    let half = T::of(0.5);
    let theta = d.expansion;

    // Λ enters only the reduced bracket, and only if the metric really is
    // Einstein on the region.
    let lambda = match variant {
        RateVariant::Eq27 => T::zero(),
        RateVariant::Eq29Chain => {
            let fit = einstein_fit(m, q, t, T::of(EINSTEIN_RATE_TOL))?;
            if !fit.accepted {
                return Err(Error::NotEinstein {
                    max_residual: fit.max_residual.as_f64(),
                    tol: fit.tol.as_f64(),
                });
            }
            fit.lambda_hat
        }
    };

    box_integrate_try(
        |p| {
            let chart = m.chart_point(p);
            let g = m.value(&chart, t);
            let bv = b.evaluate(p, t);
            let vol = volume_element(m, &chart, t)?;
            let mut sum = T::zero();
            match variant {
                RateVariant::Eq27 => {
                    let r = ricci(m, &chart, t)?.ricci;
                    for pp in 0..3 {
                        for l in 0..3 {
                            let bracket = T::of(2.0) * d.shear.get(pp, l)
                                + half * (d.vorticity.get(l, pp) - third * g[l][pp] * theta)
                                - T::of(4.0) * r.get(l, pp);
                            sum = sum + bracket * bv[pp] * bv[l];
                        }
                    }
                }
                RateVariant::Eq29Chain => {
                    // The scalar Ω of the reduced bracket is the vorticity
                    // projection along B, which vanishes identically for
                    // real amplitudes (antisymmetric quadratic form), so no
                    // Ω term survives here.
                    let scalar = half * (-third * theta + T::of(4.0) * lambda);
                    for pp in 0..3 {
                        for l in 0..3 {
                            let bracket = T::of(2.0) * d.shear.get(pp, l) + scalar * g[l][pp];
                            sum = sum + bracket * bv[pp] * bv[l];
                        }
                    }
                }
            }
            if !sum.is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite rate integrand at ({}, {}, {})",
                    p[0].as_f64(),
                    p[1].as_f64(),
                    p[2].as_f64()
                )));
            }
            Ok(sum * vol)
        },
        q,
    )
}

/// The unique pure-trace shear σ_pl = −¼[Ω − ⅓θ + 4Λ] g_pl that makes the
/// reduced-bracket rate integrand vanish pointwise.
pub fn marginal_shear<T: Real>(
    omega: T,
    theta: T,
    lambda: T,
    m: &MetricField<T>,
    p: &crate::real::Point3<T>,
    t: T,
) -> Result<SymTensor3<T>> {
    let g = m.value(&m.chart_point(p), t);
    let factor = -T::of(0.25) * (omega - T::of(1.0 / 3.0) * theta + T::of(4.0) * lambda);
    let mut scaled = g;
    for row in scaled.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * factor;
        }
    }
    SymTensor3::from_matrix(&scaled)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynamoClass {
    Fast,
    Marginal,
    Decaying,
}

impl DynamoClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Fast => "fast",
            Self::Marginal => "marginal",
            Self::Decaying => "decaying",
        }
    }
}

/// Thresholded growth-bound verdict with the inputs echoed back.
#[derive(Clone, Copy, Debug)]
pub struct DynamoVerdict<T> {
    pub class: DynamoClass,
    /// σ + ¼[Ω − ⅓θ + 4Λ], in 1/time.
    pub margin: T,
    pub tol: T,
    pub sigma: T,
    pub omega: T,
    pub theta: T,
    pub lambda: T,
}

/// Classifies the scalar data against the growth bound. Fast ⟺ margin >
/// tol, Marginal ⟺ |margin| ≤ tol, Decaying ⟺ margin < −tol.
pub fn classify<T: Real>(sigma: T, omega: T, theta: T, lambda: T, tol: T) -> Result<DynamoVerdict<T>> {
    if !(tol > T::zero()) || !tol.is_finite() {
        return Err(Error::invalid("classification tolerance must be positive"));
    }
    let margin =
        sigma + T::of(0.25) * (omega - T::of(1.0 / 3.0) * theta + T::of(4.0) * lambda);
    let class = if margin > tol {
        DynamoClass::Fast
    } else if margin < -tol {
        DynamoClass::Decaying
    } else {
        DynamoClass::Marginal
    };
    Ok(DynamoVerdict {
        class,
        margin,
        tol,
        sigma,
        omega,
        theta,
        lambda,
    })
}

/// Default classification tolerance: far above accumulated quadrature and
/// eigensolver error, far below physical margins of unit-normalized runs.
pub fn default_classify_tol<T: Real>() -> T {
    T::of(1e-9)
}

/// Whether the metric seen by the finite-difference rate oracle moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMotion {
    /// Use the scenario metric as-is (its own time dependence included).
    Static,
    /// Advance the metric by its curvature flow and evaluate the energy on
    /// interpolated scale snapshots. Scale-evolving families only.
    Evolved,
}

/// Everything the finite-difference rate oracle needs to rebuild the energy
/// at neighbouring times from scratch.
#[derive(Clone, Debug)]
pub struct RateScenario<T> {
    pub v: VelocityField<T>,
    pub m: MetricField<T>,
    /// Uniform initial magnetic components at t = 0.
    pub b0: Vec3<T>,
    pub frame: FrameMode<T>,
    pub form: InductionForm,
    pub q: QuadratureSpec<T>,
    /// Integrator step for both the magnetic evolution and the metric flow.
    pub dt: T,
    pub motion: MetricMotion,
}

/// Central difference [ε(t+h) − ε(t−h)]/(2h), with the magnetic state
/// re-integrated from 0 at every quadrature node and the metric either
/// static or flow-evolved per the scenario.
pub fn energy_rate_numeric<T: Real>(s: &RateScenario<T>, t: T, h: T) -> Result<T> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    if t - h < T::zero() {
        return Err(Error::invalid(
            "central difference needs t − h ≥ 0 (magnetic state starts at 0)",
        ));
    }

    let trajectory = match s.motion {
        MetricMotion::Static => None,
        MetricMotion::Evolved => Some(crate::ricci_flow::evolve(&s.m, (T::zero(), t + h), s.dt)?),
    };
    let metric_at = |tau: T| -> Result<MetricField<T>> {
        match &trajectory {
            None => Ok(s.m.clone()),
            Some(traj) => MetricField::einstein_scaled(s.m.clone(), traj.scale_at(tau)?),
        }
    };

    let eps_at = |tau: T| -> Result<T> {
        let m_tau = metric_at(tau)?;
        box_integrate_try(
            |p| {
                let bv = if tau > T::zero() {
                    let traj = evolve_b(
                        &s.b0,
                        &s.v,
                        &s.m,
                        &s.frame,
                        p,
                        (T::zero(), tau),
                        s.dt,
                        s.form,
                    )?;
                    *traj.states.last().unwrap()
                } else {
                    s.b0
                };
                let chart = m_tau.chart_point(p);
                let g = m_tau.value(&chart, tau);
                let gb = mat3::mat_vec(&g, &bv);
                Ok(mat3::dot(&bv, &gb) * volume_element(&m_tau, &chart, tau)?)
            },
            &s.q,
        )
    };

    let plus = eps_at(t + h)?;
    let minus = eps_at(t - h)?;
    Ok((plus - minus) / (T::of(2.0) * h))
}

/// All energy diagnostics of one configuration side by side.
#[derive(Clone, Debug)]
pub struct EnergyReport<T> {
    pub epsilon: T,
    pub rate_eq27: T,
    /// Absent when the metric is not Einstein on the region.
    pub rate_eq29: Option<T>,
    /// Absent when no finite-difference scenario was run.
    pub rate_numeric: Option<T>,
    pub quadrature: QuadratureSpec<T>,
    /// The two printed variants disagree beyond combined quadrature noise.
    pub variants_diverge: bool,
    /// rate_eq27 / rate_eq29 where defined and the denominator is resolvable.
    pub rate_ratio: Option<T>,
}

impl<T: Real> EnergyReport<T> {
    pub fn assemble(
        epsilon: T,
        rate_eq27: T,
        rate_eq29: Option<T>,
        rate_numeric: Option<T>,
        quadrature: QuadratureSpec<T>,
    ) -> Self {
        let (variants_diverge, rate_ratio) = match rate_eq29 {
            None => (false, None),
            Some(r29) => {
                let scale = rate_eq27.abs().max(r29.abs()).max(epsilon.abs());
                let diverge = (rate_eq27 - r29).abs() > T::of(1e-9) + T::of(1e-6) * scale;
                let ratio = (r29.abs() > T::of(1e-12) * scale.max(T::one()))
                    .then(|| rate_eq27 / r29);
                (diverge, ratio)
            }
        };
        Self {
            epsilon,
            rate_eq27,
            rate_eq29,
            rate_numeric,
            quadrature,
            variants_diverge,
            rate_ratio,
        }
    }
}
