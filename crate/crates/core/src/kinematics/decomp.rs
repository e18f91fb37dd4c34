//! Covariant velocity gradient and its invariant decomposition into
//! vorticity, shear, and expansion.
//!
//! Sign conventions (deliberate, and pinned by tests):
//!   * the gradient is ∇_p v_l = ∂_p v_l + Γ_pl^k v_k with the +Γ term,
//!     acting on the index-lowered velocity;
//!   * the expansion scalar is θ ≡ −g^{pl} ∇_p v_l (θ = −div v), so the
//!     decomposition reads ∇_p v_l = Ω_pl + σ_pl − ⅓ θ g_pl and expanding
//!     flows carry θ < 0.

use crate::error::{Error, Result};
use crate::geometry::{curvature, MetricField};
use crate::kinematics::velocity::VelocityField;
use crate::numerics::eigen::{self, EigenDecomposition};
use crate::numerics::mat3::{self, Mat3, Vec3};
use crate::numerics::tensor::{AntiTensor3, SymTensor3};
use crate::real::{Point3, Real};

/// Invariant decomposition of a covariant velocity gradient.
#[derive(Clone, Copy, Debug)]
pub struct FlowDecomposition<T> {
    /// Ω_pl — antisymmetric (vorticity) part.
    pub vorticity: AntiTensor3<T>,
    /// σ_pl — trace-free symmetric (shear) part.
    pub shear: SymTensor3<T>,
    /// θ — expansion scalar, equal to −g^{pl} ∇_p v_l.
    pub expansion: T,
    /// The raw gradient ∇_p v_l the parts were split from.
    pub gradient: Mat3<T>,
}

impl<T: Real> FlowDecomposition<T> {
    /// Ω_pl + σ_pl − ⅓ θ g_pl; equals `gradient` to rounding.
    pub fn reconstruct(&self, g: &Mat3<T>) -> Mat3<T> {
        let third = T::of(1.0 / 3.0);
        let mut out = mat3::zero();
        for p in 0..3 {
            for l in 0..3 {
                out[p][l] = self.vorticity.get(p, l) + self.shear.get(p, l)
                    - third * self.expansion * g[p][l];
            }
        }
        out
    }
}

/// ∇_p v_l = ∂_p v_l + Γ_pl^k v_k on the index-lowered velocity; returned
/// matrix is indexed `[p][l]`.
pub fn covariant_gradient<T: Real>(
    v: &VelocityField<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
) -> Result<Mat3<T>> {
    let chart = m.chart_point(p);
    let g = m.value(&chart, t);
    let dg = m.first_derivatives(&chart, t)?;
    let conn = curvature::connection(m, &chart, t)?;
    let vel = v.evaluate(&chart);
    let jac = v.jacobian(&chart)?;
    let v_low = mat3::mat_vec(&g, &vel);

    let mut nabla = mat3::zero();
    for pi in 0..3 {
        for l in 0..3 {
            // ∂_p (g_lm vᵐ) = (∂_p g_lm) vᵐ + g_lm ∂_p vᵐ
            let mut s = T::zero();
            for mm in 0..3 {
                s = s + dg[pi][l][mm] * vel[mm] + g[l][mm] * jac[mm][pi];
            }
            for k in 0..3 {
                s = s + conn.gamma(pi, l, k) * v_low[k];
            }
            nabla[pi][l] = s;
        }
    }
    Ok(nabla)
}

/// Splits a covariant gradient at `(p, t)` into vorticity, shear, and
/// expansion. The split is exact by construction: antisymmetric part,
/// trace via −g^{pl}, and the trace-free symmetric remainder.
pub fn decompose<T: Real>(
    grad: &Mat3<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
) -> Result<FlowDecomposition<T>> {
    for row in grad {
        for v in row {
            if !v.is_finite() {
                return Err(Error::invalid("non-finite gradient component"));
            }
        }
    }
    let chart = m.chart_point(p);
    let g = m.value(&chart, t);
    let ginv = m.inverse(&chart, t)?;

    let vorticity = AntiTensor3::antisymmetrize(grad);
    let mut theta = T::zero();
    for pi in 0..3 {
        for l in 0..3 {
            theta = theta - ginv[pi][l] * grad[pi][l];
        }
    }
    let sym = SymTensor3::symmetrize(grad);
    let third = T::of(1.0 / 3.0);
    let shear = sym.add(&SymTensor3::from_matrix(&scale(&g, third * theta))?);

    Ok(FlowDecomposition {
        vorticity,
        shear,
        expansion: theta,
        gradient: *grad,
    })
}

fn scale<T: Real>(m: &Mat3<T>, c: T) -> Mat3<T> {
    let mut r = *m;
    for row in r.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * c;
        }
    }
    r
}

/// Operand of the scalar projection entering the mode growth rate.
#[derive(Clone, Copy, Debug)]
pub enum ProjectionOperand<T> {
    Shear(SymTensor3<T>),
    Vorticity(AntiTensor3<T>),
    Expansion(T),
}

/// Rayleigh projection ⟨B, T B⟩ / ⟨B, B⟩ in the metric inner product.
///
/// Equals the corresponding eigenvalue whenever B is an eigendirection.
/// For an antisymmetric operand and real B the quadratic form vanishes
/// identically, so the projection is exactly zero; for the expansion part
/// the metric factors cancel and the value is −θ/3.
pub fn tensor_projection<T: Real>(
    operand: &ProjectionOperand<T>,
    b: &Vec3<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
) -> Result<T> {
    if !b.iter().all(|x| x.is_finite()) {
        return Err(Error::invalid("non-finite magnetic vector"));
    }
    let chart = m.chart_point(p);
    let g = m.value(&chart, t);
    let gb = mat3::mat_vec(&g, b);
    let den = mat3::dot(b, &gb);
    if !(den > T::zero()) {
        return Err(Error::invalid("projection needs a nonzero vector"));
    }
    Ok(match operand {
        ProjectionOperand::Shear(s) => {
            let mut num = T::zero();
            for pi in 0..3 {
                for l in 0..3 {
                    num = num + s.get(pi, l) * b[pi] * b[l];
                }
            }
            num / den
        }
        ProjectionOperand::Vorticity(_) => T::zero(),
        ProjectionOperand::Expansion(theta) => -*theta / T::of(3.0),
    })
}

/// Generalized shear eigensystem σ B = s g B, eigenvalues descending,
/// directions g-orthonormal.
pub fn shear_eigensystem<T: Real>(
    sigma: &SymTensor3<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
) -> Result<EigenDecomposition<T>> {
    let chart = m.chart_point(p);
    let g = m.value(&chart, t);
    eigen::generalized_sym_eigen(&sigma.as_matrix(), &g)
}

/// Frame-rotation policy: lock the frame to the flow's vorticity (the
/// rigid-rotation condition ω_pl = Ω_pl) or prescribe it explicitly.
#[derive(Clone, Debug)]
pub enum FrameMode<T> {
    MatchedToFlow,
    Explicit(Mat3<T>),
}

/// Frame vorticity ω_pl tagged with how it was obtained.
#[derive(Clone, Copy, Debug)]
pub struct FrameVorticity<T> {
    pub omega: AntiTensor3<T>,
    pub matched: bool,
}

/// Resolves the frame vorticity for a decomposition. `MatchedToFlow`
/// copies Ω_pl (cancelling the Ω − ω induction term); `Explicit` validates
/// antisymmetry and stores the given tensor.
pub fn frame_vorticity<T: Real>(
    d: &FlowDecomposition<T>,
    mode: &FrameMode<T>,
) -> Result<FrameVorticity<T>> {
    match mode {
        FrameMode::MatchedToFlow => Ok(FrameVorticity {
            omega: d.vorticity,
            matched: true,
        }),
        FrameMode::Explicit(m) => Ok(FrameVorticity {
            omega: AntiTensor3::from_matrix(m)?,
            matched: false,
        }),
    }
}
