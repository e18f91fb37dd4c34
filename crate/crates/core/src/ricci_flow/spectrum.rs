//! The Ricci eigenvalue problem and the Lyapunov spectrum attached to it:
//! R_ij χʲ = λ g_ij χʲ with exponents γ_i = −λ_i. The source analysis
//! states λ_i ≤ 0; positively curved spaces violate it, so the condition is
//! reported per eigenvalue instead of enforced.

use crate::error::Result;
use crate::geometry::{curvature, MetricField};
use crate::numerics::eigen;
use crate::numerics::mat3::Vec3;
use crate::real::{Point3, Real};

/// Ricci eigenvalues with their flow interpretation. `directions[i]` is
/// unit-norm in the metric (χᵢᵀ g χᵢ = 1); `exponents[i] = −eigenvalues[i]`
/// exactly; `sign_condition[i]` records whether λ_i ≤ 0.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovSpectrum<T> {
    pub eigenvalues: [T; 3],
    pub directions: [Vec3<T>; 3],
    pub exponents: [T; 3],
    pub sign_condition: [bool; 3],
}

/// Completes a spectrum from raw eigendata: attaches γ_i = −λ_i (exact
/// negation) and the per-eigenvalue sign flags.
pub fn lyapunov_spectrum<T: Real>(
    eigenvalues: [T; 3],
    directions: [Vec3<T>; 3],
) -> LyapunovSpectrum<T> {
    let exponents = [-eigenvalues[0], -eigenvalues[1], -eigenvalues[2]];
    let sign_condition = [
        eigenvalues[0] <= T::zero(),
        eigenvalues[1] <= T::zero(),
        eigenvalues[2] <= T::zero(),
    ];
    LyapunovSpectrum {
        eigenvalues,
        directions,
        exponents,
        sign_condition,
    }
}

/// Solves R_ij χʲ = λ g_ij χʲ at `(p, t)`, eigenvalues descending,
/// directions g-orthonormal.
pub fn ricci_eigenvalues<T: Real>(
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
) -> Result<LyapunovSpectrum<T>> {
    let chart = m.chart_point(p);
    let rep = curvature::ricci(m, &chart, t)?;
    let g = m.value(&chart, t);
    let decomp = eigen::generalized_sym_eigen(&rep.ricci.as_matrix(), &g)?;
    Ok(lyapunov_spectrum(decomp.values, decomp.vectors))
}

/// The frozen-eigenvalue conformal metric g_ij = e^{−2λt} δ_ij as a metric
/// family. Distinct from exact flow output: the exact Einstein flow scales
/// linearly in t, the frozen form exponentially; they agree to O(t²).
pub fn lyapunov_metric<T: Real>(rate: T) -> Result<MetricField<T>> {
    MetricField::conformal_lyapunov(rate)
}
