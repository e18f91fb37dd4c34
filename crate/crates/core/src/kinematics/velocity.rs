//! Velocity field families. All are steady (time-independent); components
//! are contravariant, vⁱ(x) in coordinate units per time.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::numerics::fd;
use crate::numerics::mat3::{self, Mat3, Vec3};
use crate::real::{Point3, Real};

pub type VectorField<T> = Arc<dyn Fn(&Point3<T>) -> Vec3<T> + Send + Sync>;

#[derive(Clone)]
pub enum VelocityField<T> {
    /// Constant vector field.
    Uniform { v: Vec3<T> },
    /// vⁱ = Aⁱⱼ xʲ.
    LinearGradient { a: Mat3<T> },
    /// v = w × x.
    RigidRotation { w: Vec3<T> },
    /// The steady unit flow along the 3-direction, vˡ = δˡ₃.
    UnitAxis3,
    /// Arbitrary sampled field; Jacobian by central differences.
    GridSampled { f: VectorField<T> },
}

impl<T: fmt::Debug> fmt::Debug for VelocityField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform { v } => write!(f, "Uniform({:?}, {:?}, {:?})", v[0], v[1], v[2]),
            Self::LinearGradient { .. } => write!(f, "LinearGradient"),
            Self::RigidRotation { w } => {
                write!(f, "RigidRotation({:?}, {:?}, {:?})", w[0], w[1], w[2])
            }
            Self::UnitAxis3 => write!(f, "UnitAxis3"),
            Self::GridSampled { .. } => write!(f, "GridSampled"),
        }
    }
}

impl<T: Real> VelocityField<T> {
    pub fn uniform(v: Vec3<T>) -> Self {
        Self::Uniform { v }
    }

    pub fn linear_gradient(a: Mat3<T>) -> Self {
        Self::LinearGradient { a }
    }

    pub fn rigid_rotation(w: Vec3<T>) -> Self {
        Self::RigidRotation { w }
    }

    pub fn unit_axis_3() -> Self {
        Self::UnitAxis3
    }

    pub fn sampled(f: impl Fn(&Point3<T>) -> Vec3<T> + Send + Sync + 'static) -> Self {
        Self::GridSampled { f: Arc::new(f) }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Uniform { .. } => "uniform",
            Self::LinearGradient { .. } => "linear_gradient",
            Self::RigidRotation { .. } => "rigid_rotation",
            Self::UnitAxis3 => "unit_axis_3",
            Self::GridSampled { .. } => "grid_sampled",
        }
    }

    /// vⁱ(p).
    pub fn evaluate(&self, p: &Point3<T>) -> Vec3<T> {
        match self {
            Self::Uniform { v } => *v,
            Self::LinearGradient { a } => mat3::mat_vec(a, p),
            Self::RigidRotation { w } => mat3::cross(w, p),
            Self::UnitAxis3 => [T::zero(), T::zero(), T::one()],
            Self::GridSampled { f } => f(p),
        }
    }

    /// Coordinate Jacobian `jac[i][j] = ∂ⱼ vⁱ`; analytic except for sampled
    /// fields.
    pub fn jacobian(&self, p: &Point3<T>) -> Result<Mat3<T>> {
        Ok(match self {
            Self::Uniform { .. } | Self::UnitAxis3 => mat3::zero(),
            Self::LinearGradient { a } => *a,
            Self::RigidRotation { w } => {
                // v = w × x ⟹ ∂ⱼ vⁱ = ε_ikj w_k.
                let mut jac = mat3::zero();
                for i in 0..3 {
                    for j in 0..3 {
                        let mut s = T::zero();
                        for k in 0..3 {
                            s = s + mat3::levi_civita::<T>(i, k, j) * w[k];
                        }
                        jac[i][j] = s;
                    }
                }
                jac
            }
            Self::GridSampled { f } => {
                let h = fd::default_step::<T>();
                let mut jac = mat3::zero();
                for i in 0..3 {
                    for j in 0..3 {
                        jac[i][j] = fd::fd_partial(|q| f(q)[i], p, j, h)?;
                    }
                }
                jac
            }
        })
    }
}
