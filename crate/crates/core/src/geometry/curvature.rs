//! Levi-Civita connection and Ricci curvature, assembled from metric
//! derivatives, plus the Einstein-space fit built on top of them.

use crate::error::{Error, Result};
use crate::geometry::families::MetricField;
use crate::numerics::mat3::{self, Mat3};
use crate::numerics::quadrature::sample_points;
use crate::numerics::tensor::{QuadratureSpec, SymTensor3};
use crate::real::{point_as_f64, Point3, Real};

/// Levi-Civita connection coefficients at a point.
///
/// Storage is `coeffs[k][i][j] = Γ_ki^j` (lower pair (k,i), upper j);
/// torsion-freeness makes the lower pair symmetric.
#[derive(Clone, Copy, Debug)]
pub struct Connection<T> {
    coeffs: [[[T; 3]; 3]; 3],
}

impl<T: Real> Connection<T> {
    /// Γ_ki^j.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> T {
        self.coeffs[k][i][j]
    }

    pub fn max_abs(&self) -> T {
        let mut r = T::zero();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    r = r.max(self.coeffs[k][i][j].abs());
                }
            }
        }
        r
    }
}

/// Γ_ki^j = ½ gʲᵐ (∂_k g_mi + ∂_i g_mk − ∂_m g_ki) from pre-evaluated
/// derivatives; `dg[l][i][j] = ∂_l g_ij`.
pub fn connection_from_derivatives<T: Real>(
    g: &Mat3<T>,
    dg: &[Mat3<T>; 3],
    p: &Point3<T>,
) -> Result<Connection<T>> {
    let ginv = mat3::inv3(g).ok_or_else(|| Error::SingularMetric {
        point: point_as_f64(p),
    })?;
    let half = T::of(0.5);
    let mut coeffs = [[[T::zero(); 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = T::zero();
                for m in 0..3 {
                    s = s + ginv[j][m] * (dg[k][m][i] + dg[i][m][k] - dg[m][k][i]);
                }
                coeffs[k][i][j] = half * s;
            }
        }
    }
    Ok(Connection { coeffs })
}

/// Levi-Civita connection of `m` at `(p, t)`.
pub fn connection<T: Real>(m: &MetricField<T>, p: &Point3<T>, t: T) -> Result<Connection<T>> {
    let p = m.chart_point(p);
    let g = m.value(&p, t);
    let dg = m.first_derivatives(&p, t)?;
    connection_from_derivatives(&g, &dg, &p)
}

/// Pointwise curvature summary. `lambda_hat` is the single-point Einstein
/// fit R_ij gᶦʲ / 3 and `einstein_residual` the relative Frobenius residual
/// ‖R − Λ̂ g‖ / max(1, ‖R‖) at this point.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureReport<T> {
    pub ricci: SymTensor3<T>,
    pub scalar: T,
    pub lambda_hat: T,
    pub einstein_residual: T,
}

/// Ricci tensor from pre-evaluated metric derivatives:
/// R_ij = ∂_k Γ_ij^k − ∂_i Γ_kj^k + Γ_kl^k Γ_ij^l − Γ_il^k Γ_kj^l.
pub fn ricci_from_derivatives<T: Real>(
    g: &Mat3<T>,
    dg: &[Mat3<T>; 3],
    d2g: &[[Mat3<T>; 3]; 3],
    p: &Point3<T>,
) -> Result<SymTensor3<T>> {
    let ginv = mat3::inv3(g).ok_or_else(|| Error::SingularMetric {
        point: point_as_f64(p),
    })?;
    // ∂_l gᶦʲ = −gᶦᵃ (∂_l g_ab) gᵇʲ
    let mut dginv = [mat3::zero::<T>(); 3];
    for l in 0..3 {
        let t1 = mat3::mat_mul(&ginv, &dg[l]);
        let t2 = mat3::mat_mul(&t1, &ginv);
        for i in 0..3 {
            for j in 0..3 {
                dginv[l][i][j] = -t2[i][j];
            }
        }
    }

    let half = T::of(0.5);
    // gamma[k][i][j] = Γ^k_ij (upper first here for the standard formula).
    let mut gamma = [[[T::zero(); 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = T::zero();
                for m in 0..3 {
                    s = s + ginv[k][m] * (dg[i][m][j] + dg[j][m][i] - dg[m][i][j]);
                }
                gamma[k][i][j] = half * s;
            }
        }
    }
    // dgamma[l][k][i][j] = ∂_l Γ^k_ij
    let mut dgamma = [[[[T::zero(); 3]; 3]; 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = T::zero();
                    for m in 0..3 {
                        s = s + dginv[l][k][m] * (dg[i][m][j] + dg[j][m][i] - dg[m][i][j]);
                        s = s + ginv[k][m]
                            * (d2g[l][i][m][j] + d2g[l][j][m][i] - d2g[l][m][i][j]);
                    }
                    dgamma[l][k][i][j] = half * s;
                }
            }
        }
    }

    let mut r = mat3::zero::<T>();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = T::zero();
            for k in 0..3 {
                s = s + dgamma[k][k][i][j] - dgamma[i][k][k][j];
                for l in 0..3 {
                    s = s + gamma[k][k][l] * gamma[l][i][j] - gamma[k][i][l] * gamma[l][k][j];
                }
            }
            r[i][j] = s;
        }
    }

    // The assembly is symmetric up to rounding; a bigger asymmetry means a
    // broken derivative table upstream.
    let scale = mat3::max_abs(&r).max(T::one());
    let mut asym = T::zero();
    for i in 0..3 {
        for j in (i + 1)..3 {
            asym = asym.max((r[i][j] - r[j][i]).abs());
        }
    }
    if asym > T::of(1e-9) * scale {
        return Err(Error::invalid(format!(
            "Ricci assembly asymmetric by {:e}",
            asym.as_f64()
        )));
    }
    Ok(SymTensor3::symmetrize(&r))
}

/// Pointwise Ricci curvature of `m` at `(p, t)`.
pub fn ricci<T: Real>(m: &MetricField<T>, p: &Point3<T>, t: T) -> Result<CurvatureReport<T>> {
    let p = m.chart_point(p);
    let g = m.value(&p, t);
    let dg = m.first_derivatives(&p, t)?;
    let d2g = m.second_derivatives(&p, t)?;
    let ric = ricci_from_derivatives(&g, &dg, &d2g, &p)?;
    let ginv = mat3::inv3(&g).ok_or_else(|| Error::SingularMetric {
        point: point_as_f64(&p),
    })?;
    let mut scalar = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            scalar = scalar + ginv[i][j] * ric.get(i, j);
        }
    }
    let lambda_hat = scalar / T::of(3.0);
    let residual = einstein_residual(&ric, &g, lambda_hat);
    Ok(CurvatureReport {
        ricci: ric,
        scalar,
        lambda_hat,
        einstein_residual: residual,
    })
}

/// ‖R − Λ g‖_F / max(1, ‖R‖_F): relative with floor 1 so the measure stays
/// meaningful for near-flat metrics.
fn einstein_residual<T: Real>(ric: &SymTensor3<T>, g: &Mat3<T>, lambda: T) -> T {
    let mut diff = ric.as_matrix();
    for i in 0..3 {
        for j in 0..3 {
            diff[i][j] = diff[i][j] - lambda * g[i][j];
        }
    }
    mat3::frobenius(&diff) / mat3::frobenius(&ric.as_matrix()).max(T::one())
}

/// Region-level Einstein fit: Λ̂ averaged over the sample grid plus the worst
/// pointwise residual against that shared Λ̂.
#[derive(Clone, Copy, Debug)]
pub struct EinsteinFit<T> {
    pub lambda_hat: T,
    pub max_residual: T,
    pub tol: T,
    pub accepted: bool,
}

pub fn einstein_fit<T: Real>(
    m: &MetricField<T>,
    region: &QuadratureSpec<T>,
    t: T,
    tol: T,
) -> Result<EinsteinFit<T>> {
    let pts = sample_points(region);
    let mut lambda_sum = T::zero();
    for p in &pts {
        lambda_sum = lambda_sum + ricci(m, p, t)?.lambda_hat;
    }
    let lambda_hat = lambda_sum / T::from_usize(pts.len()).unwrap();
    let mut max_residual = T::zero();
    for p in &pts {
        let rep = ricci(m, p, t)?;
        let g = m.value(&m.chart_point(p), t);
        max_residual = max_residual.max(einstein_residual(&rep.ricci, &g, lambda_hat));
    }
    Ok(EinsteinFit {
        lambda_hat,
        max_residual,
        tol,
        accepted: max_residual < tol,
    })
}

/// `Some(Λ̂)` iff the metric is Einstein on the region to tolerance.
pub fn einstein_check<T: Real>(
    m: &MetricField<T>,
    region: &QuadratureSpec<T>,
    t: T,
    tol: T,
) -> Result<Option<T>> {
    let fit = einstein_fit(m, region, t, tol)?;
    Ok(fit.accepted.then_some(fit.lambda_hat))
}

/// √det g — the volume measure factor.
pub fn volume_element<T: Real>(m: &MetricField<T>, p: &Point3<T>, t: T) -> Result<T> {
    let det = m.determinant(p, t);
    if !(det > T::zero()) || !det.is_finite() {
        return Err(Error::SingularMetric {
            point: point_as_f64(p),
        });
    }
    Ok(det.sqrt())
}
