//! Symmetric 3x3 eigensolvers: cyclic Jacobi for the standard problem and a
//! Cholesky reduction for the generalized problem R χ = λ g χ.
//!
//! Jacobi is preferred over the closed-form cubic here: it is backward stable
//! and hands back an orthogonal basis even for clustered spectra, which the
//! flow diagnostics rely on (isotropic Ricci tensors are the common case, not
//! the exception).

use crate::error::{Error, Result};
use crate::numerics::mat3::{self, Mat3, Vec3};
use crate::real::Real;

/// Eigen-decomposition of a symmetric tensor: `values` descending,
/// `vectors[k]` the unit eigenvector paired with `values[k]`.
#[derive(Clone, Copy, Debug)]
pub struct EigenDecomposition<T> {
    pub values: [T; 3],
    pub vectors: [Vec3<T>; 3],
}

const MAX_SWEEPS: usize = 32;

/// Cyclic Jacobi on a symmetric 3x3 matrix.
///
/// Postconditions: eigenvalues descending; residual ‖A v − λ v‖ ≤ 1e−12·‖A‖;
/// eigenvectors mutually orthogonal to 1e−12. Bases of (near-)degenerate
/// eigenspaces are re-anchored to the coordinate axes so that repeated runs —
/// and spectra that differ only by rounding — produce the same vectors.
pub fn sym_eigen<T: Real>(m: &Mat3<T>) -> Result<EigenDecomposition<T>> {
    for row in m {
        for v in row {
            if !v.is_finite() {
                return Err(Error::invalid("non-finite component in eigen input"));
            }
        }
    }
    let mut a = *m;
    // Symmetrize defensively; callers hand in SymTensor3-backed matrices.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = (a[i][j] + a[j][i]) * T::of(0.5);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut q = mat3::identity::<T>();
    let scale = mat3::max_abs(&a).max(T::min_positive_value());
    let stop = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        if off <= stop {
            break;
        }
        for &(p, r) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][r].abs() <= T::epsilon() * scale {
                continue;
            }
            // Classical Jacobi rotation angle.
            let theta = (a[r][r] - a[p][p]) / (T::of(2.0) * a[p][r]);
            let t = {
                let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                sign / (theta.abs() + (theta * theta + T::one()).sqrt())
            };
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;

            let app = a[p][p];
            let arr = a[r][r];
            let apr = a[p][r];
            a[p][p] = app - t * apr;
            a[r][r] = arr + t * apr;
            a[p][r] = T::zero();
            a[r][p] = T::zero();
            let k = 3 - p - r; // the untouched index
            let akp = a[k][p];
            let akr = a[k][r];
            a[k][p] = c * akp - s * akr;
            a[p][k] = a[k][p];
            a[k][r] = s * akp + c * akr;
            a[r][k] = a[k][r];
            for i in 0..3 {
                let qip = q[i][p];
                let qir = q[i][r];
                q[i][p] = c * qip - s * qir;
                q[i][r] = s * qip + c * qir;
            }
        }
    }

    let mut pairs: [(T, Vec3<T>); 3] = [
        (a[0][0], [q[0][0], q[1][0], q[2][0]]),
        (a[1][1], [q[0][1], q[1][1], q[2][1]]),
        (a[2][2], [q[0][2], q[1][2], q[2][2]]),
    ];
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite eigenvalues"));

    let mut decomp = EigenDecomposition {
        values: [pairs[0].0, pairs[1].0, pairs[2].0],
        vectors: [pairs[0].1, pairs[1].1, pairs[2].1],
    };
    canonicalize_degenerate(&mut decomp, scale);
    for v in decomp.vectors.iter_mut() {
        normalize_sign(v);
    }
    Ok(decomp)
}

/// Re-spans (near-)degenerate eigenspaces deterministically: project the
/// coordinate axes onto the cluster's span and Gram–Schmidt them in axis
/// order. Within-cluster rotations are arbitrary up to rounding, so without
/// this step bitwise reproducibility of downstream reports would be luck.
fn canonicalize_degenerate<T: Real>(d: &mut EigenDecomposition<T>, scale: T) {
    let tol = T::of(64.0) * T::epsilon() * scale.max(T::one());
    let mut i = 0;
    while i < 3 {
        let mut j = i + 1;
        while j < 3 && (d.values[i] - d.values[j]).abs() <= tol {
            j += 1;
        }
        if j - i > 1 {
            respan_cluster(d, i, j);
        }
        i = j;
    }
}

fn respan_cluster<T: Real>(d: &mut EigenDecomposition<T>, lo: usize, hi: usize) {
    let members: Vec<Vec3<T>> = (lo..hi).map(|k| d.vectors[k]).collect();
    let mut replacement: Vec<Vec3<T>> = Vec::with_capacity(hi - lo);
    for axis in 0..3 {
        if replacement.len() == members.len() {
            break;
        }
        let e: Vec3<T> = {
            let mut v = [T::zero(); 3];
            v[axis] = T::one();
            v
        };
        // Projection of the axis onto the eigenspace.
        let mut p = [T::zero(); 3];
        for b in &members {
            let c = mat3::dot(b, &e);
            for i in 0..3 {
                p[i] = p[i] + c * b[i];
            }
        }
        // Remove components along already-accepted replacement vectors.
        for b in &replacement {
            let c = mat3::dot(b, &p);
            for i in 0..3 {
                p[i] = p[i] - c * b[i];
            }
        }
        let n = mat3::norm(&p);
        if n > T::of(1e-6) {
            replacement.push(mat3::scale_vec(&p, T::one() / n));
        }
    }
    if replacement.len() == members.len() {
        for (k, v) in replacement.into_iter().enumerate() {
            d.vectors[lo + k] = v;
        }
    }
}

/// Flips a vector so its largest-magnitude component is positive.
fn normalize_sign<T: Real>(v: &mut Vec3<T>) {
    let mut best = 0;
    for i in 1..3 {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < T::zero() {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
}

/// Generalized symmetric eigenproblem `R χ = λ g χ` with `g` positive
/// definite, reduced to standard form through the Cholesky factor of `g`:
/// with g = LLᵀ and y = Lᵀχ the problem becomes (L⁻¹ R L⁻ᵀ) y = λ y.
/// Returned eigenvectors are g-orthonormal (χᵢᵀ g χⱼ = δᵢⱼ), descending λ.
pub fn generalized_sym_eigen<T: Real>(
    r: &Mat3<T>,
    g: &Mat3<T>,
) -> Result<EigenDecomposition<T>> {
    let l = mat3::cholesky3(g).ok_or_else(|| Error::SingularMetric {
        point: [f64::NAN; 3],
    })?;
    // Columns of L⁻¹ R L⁻ᵀ assembled by triangular solves.
    let mut b = mat3::zero::<T>();
    for col in 0..3 {
        let e = {
            let mut v = [T::zero(); 3];
            v[col] = T::one();
            v
        };
        // w = L⁻ᵀ e_col
        let w = mat3::back_sub_transposed(&l, &e);
        let rw = mat3::mat_vec(r, &w);
        let bw = mat3::forward_sub(&l, &rw);
        for row in 0..3 {
            b[row][col] = bw[row];
        }
    }
    let std = sym_eigen(&b)?;
    let mut out = std;
    for k in 0..3 {
        // χ = L⁻ᵀ y keeps g-orthonormality automatically.
        let chi = mat3::back_sub_transposed(&l, &std.vectors[k]);
        out.vectors[k] = chi;
    }
    for v in out.vectors.iter_mut() {
        normalize_sign(v);
    }
    Ok(out)
}
