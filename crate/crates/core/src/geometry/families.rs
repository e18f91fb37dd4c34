//! Built-in metric families. Each family knows its own analytic coordinate
//! and time derivatives; only `DiagonalCustom` falls back to finite
//! differences (first derivatives at h = 1e−5, second at 1e−4).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::fd;
use crate::numerics::mat3::{self, Mat3};
use crate::real::{point_as_f64, Point3, Real};

/// Spatial scalar field used by `DiagonalCustom` diagonal entries.
pub type ScalarField<T> = Arc<dyn Fn(&Point3<T>) -> T + Send + Sync>;

/// Width of the guard band that keeps hyperspherical charts away from their
/// coordinate singularities at χ, ϑ ∈ {0, π}.
pub const CHART_GUARD: f64 = 1e-3;

/// A 3D Riemannian metric with evaluators for g_ij, its inverse, its
/// determinant, and analytic partial derivatives where the family permits.
///
/// Charts: `RoundSphere` and `HyperbolicSpace` use hyperspherical
/// coordinates (χ, ϑ, φ) with g = r²·diag(1, f²(χ), f²(χ) sin²ϑ) where f is
/// sin or sinh; queried points are clamped into the guard band first.
#[derive(Clone)]
pub enum MetricField<T> {
    EuclideanFlat,
    RoundSphere { radius: T },
    HyperbolicSpace { radius: T },
    /// Spatially flat, exponentially contracting: g_ij(t) = e^{−2λt} δ_ij.
    ConformalLyapunov { rate: T },
    /// Constant multiple of an Einstein base metric (the Ricci-flow
    /// snapshot family): g = scale · g_base.
    EinsteinScaled { base: Box<MetricField<T>>, scale: T },
    /// Diagonal metric with user-supplied positive entries g_ii(x).
    DiagonalCustom { components: [ScalarField<T>; 3] },
}

impl<T: fmt::Debug> fmt::Debug for MetricField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EuclideanFlat => write!(f, "EuclideanFlat"),
            Self::RoundSphere { radius } => write!(f, "RoundSphere(r={radius:?})"),
            Self::HyperbolicSpace { radius } => {
                write!(f, "HyperbolicSpace(r={radius:?})")
            }
            Self::ConformalLyapunov { rate } => {
                write!(f, "ConformalLyapunov(rate={rate:?})")
            }
            Self::EinsteinScaled { base, scale } => {
                write!(f, "EinsteinScaled(scale={scale:?}, base={base:?})")
            }
            Self::DiagonalCustom { .. } => write!(f, "DiagonalCustom"),
        }
    }
}

impl<T: Real> MetricField<T> {
    pub fn flat() -> Self {
        Self::EuclideanFlat
    }

    pub fn round_sphere(radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid("sphere radius must be positive and finite"));
        }
        Ok(Self::RoundSphere { radius })
    }

    pub fn hyperbolic_space(radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid(
                "hyperbolic radius must be positive and finite",
            ));
        }
        Ok(Self::HyperbolicSpace { radius })
    }

    pub fn conformal_lyapunov(rate: T) -> Result<Self> {
        if !rate.is_finite() {
            return Err(Error::invalid("contraction rate must be finite"));
        }
        Ok(Self::ConformalLyapunov { rate })
    }

    /// Scales an Einstein base metric by a positive constant. Only families
    /// with a constant-curvature guarantee are accepted as bases.
    pub fn einstein_scaled(base: MetricField<T>, scale: T) -> Result<Self> {
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::invalid("metric scale must be positive and finite"));
        }
        match base {
            Self::EuclideanFlat
            | Self::RoundSphere { .. }
            | Self::HyperbolicSpace { .. }
            | Self::EinsteinScaled { .. } => Ok(Self::EinsteinScaled {
                base: Box::new(base),
                scale,
            }),
            other => Err(Error::invalid(format!(
                "einstein_scaled base must be a constant-curvature family, got {other:?}"
            ))),
        }
    }

    pub fn diagonal_custom(
        g11: impl Fn(&Point3<T>) -> T + Send + Sync + 'static,
        g22: impl Fn(&Point3<T>) -> T + Send + Sync + 'static,
        g33: impl Fn(&Point3<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        Self::DiagonalCustom {
            components: [Arc::new(g11), Arc::new(g22), Arc::new(g33)],
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::EuclideanFlat => "euclidean_flat",
            Self::RoundSphere { .. } => "round_sphere",
            Self::HyperbolicSpace { .. } => "hyperbolic_space",
            Self::ConformalLyapunov { .. } => "conformal_lyapunov",
            Self::EinsteinScaled { .. } => "einstein_scaled",
            Self::DiagonalCustom { .. } => "diagonal_custom",
        }
    }

    /// Clamps a queried point into the chart's validity region. Identity for
    /// families over all of R³.
    pub fn chart_point(&self, p: &Point3<T>) -> Point3<T> {
        let guard = T::of(CHART_GUARD);
        let pi = T::PI();
        match self {
            Self::RoundSphere { .. } => [
                clamp(p[0], guard, pi - guard),
                clamp(p[1], guard, pi - guard),
                p[2],
            ],
            Self::HyperbolicSpace { .. } => [
                p[0].max(guard),
                clamp(p[1], guard, pi - guard),
                p[2],
            ],
            Self::EinsteinScaled { base, .. } => base.chart_point(p),
            _ => *p,
        }
    }

    /// Metric components g_ij(p, t).
    pub fn value(&self, p: &Point3<T>, t: T) -> Mat3<T> {
        let p = self.chart_point(p);
        match self {
            Self::EuclideanFlat => mat3::identity(),
            Self::RoundSphere { radius } => {
                let r2 = *radius * *radius;
                let s_chi = p[0].sin();
                let s_th = p[1].sin();
                diag(
                    r2,
                    r2 * s_chi * s_chi,
                    r2 * s_chi * s_chi * s_th * s_th,
                )
            }
            Self::HyperbolicSpace { radius } => {
                let r2 = *radius * *radius;
                let sh = p[0].sinh();
                let s_th = p[1].sin();
                diag(r2, r2 * sh * sh, r2 * sh * sh * s_th * s_th)
            }
            Self::ConformalLyapunov { rate } => {
                let f = (-(T::of(2.0)) * *rate * t).exp();
                diag(f, f, f)
            }
            Self::EinsteinScaled { base, scale } => scale_mat(&base.value(&p, t), *scale),
            Self::DiagonalCustom { components } => diag(
                (components[0])(&p),
                (components[1])(&p),
                (components[2])(&p),
            ),
        }
    }

    /// Inverse metric gᶦˡ(p, t); fails on non-positive-definite values.
    pub fn inverse(&self, p: &Point3<T>, t: T) -> Result<Mat3<T>> {
        let g = self.value(p, t);
        self.check_positive_definite(p, t)?;
        mat3::inv3(&g).ok_or_else(|| Error::SingularMetric {
            point: point_as_f64(p),
        })
    }

    pub fn determinant(&self, p: &Point3<T>, t: T) -> T {
        mat3::det3(&self.value(p, t))
    }

    /// Cholesky-based positive-definiteness probe.
    pub fn check_positive_definite(&self, p: &Point3<T>, t: T) -> Result<()> {
        let g = self.value(p, t);
        if mat3::cholesky3(&g).is_none() {
            return Err(Error::SingularMetric {
                point: point_as_f64(p),
            });
        }
        Ok(())
    }

    /// First coordinate derivatives: `out[l][i][j] = ∂_l g_ij`.
    pub fn first_derivatives(&self, p: &Point3<T>, t: T) -> Result<[Mat3<T>; 3]> {
        let p = self.chart_point(p);
        let zero = [mat3::zero::<T>(); 3];
        Ok(match self {
            Self::EuclideanFlat | Self::ConformalLyapunov { .. } => zero,
            Self::RoundSphere { radius } => {
                let r2 = *radius * *radius;
                let two_chi = T::of(2.0) * p[0];
                let two_th = T::of(2.0) * p[1];
                let s_chi = p[0].sin();
                let s_th = p[1].sin();
                let mut d = zero;
                // ∂_χ g_ϑϑ and ∂_χ g_φφ
                d[0][1][1] = r2 * two_chi.sin();
                d[0][2][2] = r2 * two_chi.sin() * s_th * s_th;
                // ∂_ϑ g_φφ
                d[1][2][2] = r2 * s_chi * s_chi * two_th.sin();
                d
            }
            Self::HyperbolicSpace { radius } => {
                let r2 = *radius * *radius;
                let two_chi = T::of(2.0) * p[0];
                let two_th = T::of(2.0) * p[1];
                let sh = p[0].sinh();
                let s_th = p[1].sin();
                let mut d = zero;
                d[0][1][1] = r2 * two_chi.sinh();
                d[0][2][2] = r2 * two_chi.sinh() * s_th * s_th;
                d[1][2][2] = r2 * sh * sh * two_th.sin();
                d
            }
            Self::EinsteinScaled { base, scale } => {
                let inner = base.first_derivatives(&p, t)?;
                [
                    scale_mat(&inner[0], *scale),
                    scale_mat(&inner[1], *scale),
                    scale_mat(&inner[2], *scale),
                ]
            }
            Self::DiagonalCustom { components } => {
                let h = fd::default_step::<T>();
                let mut d = zero;
                for l in 0..3 {
                    for (i, comp) in components.iter().enumerate() {
                        d[l][i][i] = fd::fd_partial(|q| comp(q), &p, l, h)?;
                    }
                }
                d
            }
        })
    }

    /// Second coordinate derivatives: `out[l][m][i][j] = ∂_l ∂_m g_ij`,
    /// symmetric in (l, m).
    pub fn second_derivatives(&self, p: &Point3<T>, t: T) -> Result<[[Mat3<T>; 3]; 3]> {
        let p = self.chart_point(p);
        let zero = [[mat3::zero::<T>(); 3]; 3];
        Ok(match self {
            Self::EuclideanFlat | Self::ConformalLyapunov { .. } => zero,
            Self::RoundSphere { radius } => {
                let r2 = *radius * *radius;
                let two = T::of(2.0);
                let two_chi = two * p[0];
                let two_th = two * p[1];
                let s_chi = p[0].sin();
                let s_th = p[1].sin();
                let mut d = zero;
                d[0][0][1][1] = two * r2 * two_chi.cos();
                d[0][0][2][2] = two * r2 * two_chi.cos() * s_th * s_th;
                d[1][1][2][2] = two * r2 * s_chi * s_chi * two_th.cos();
                d[0][1][2][2] = r2 * two_chi.sin() * two_th.sin();
                d[1][0][2][2] = d[0][1][2][2];
                d
            }
            Self::HyperbolicSpace { radius } => {
                let r2 = *radius * *radius;
                let two = T::of(2.0);
                let two_chi = two * p[0];
                let two_th = two * p[1];
                let sh = p[0].sinh();
                let s_th = p[1].sin();
                let mut d = zero;
                d[0][0][1][1] = two * r2 * two_chi.cosh();
                d[0][0][2][2] = two * r2 * two_chi.cosh() * s_th * s_th;
                d[1][1][2][2] = two * r2 * sh * sh * two_th.cos();
                d[0][1][2][2] = r2 * two_chi.sinh() * two_th.sin();
                d[1][0][2][2] = d[0][1][2][2];
                d
            }
            Self::EinsteinScaled { base, scale } => {
                let inner = base.second_derivatives(&p, t)?;
                let mut d = zero;
                for l in 0..3 {
                    for m in 0..3 {
                        d[l][m] = scale_mat(&inner[l][m], *scale);
                    }
                }
                d
            }
            Self::DiagonalCustom { components } => {
                let h = fd::default_second_step::<T>();
                let mut d = zero;
                for l in 0..3 {
                    for m in l..3 {
                        for (i, comp) in components.iter().enumerate() {
                            let v = fd::fd_mixed(|q| comp(q), &p, l, m, h)?;
                            d[l][m][i][i] = v;
                            d[m][l][i][i] = v;
                        }
                    }
                }
                d
            }
        })
    }

    /// Analytic ∂g_ij/∂t; zero for every static family.
    pub fn time_derivative(&self, p: &Point3<T>, t: T) -> Mat3<T> {
        match self {
            Self::ConformalLyapunov { rate } => {
                let two = T::of(2.0);
                let f = (-(two) * *rate * t).exp();
                let c = -(two) * *rate * f;
                diag(c, c, c)
            }
            Self::EinsteinScaled { base, scale } => {
                scale_mat(&base.time_derivative(p, t), *scale)
            }
            _ => mat3::zero(),
        }
    }
}

fn clamp<T: Real>(x: T, lo: T, hi: T) -> T {
    x.max(lo).min(hi)
}

fn diag<T: Real>(a: T, b: T, c: T) -> Mat3<T> {
    let mut m = mat3::zero();
    m[0][0] = a;
    m[1][1] = b;
    m[2][2] = c;
    m
}

fn scale_mat<T: Real>(m: &Mat3<T>, c: T) -> Mat3<T> {
    let mut r = *m;
    for row in r.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * c;
        }
    }
    r
}
