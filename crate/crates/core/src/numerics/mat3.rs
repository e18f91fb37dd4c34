//! Dense 3x3 matrix helpers. Everything in this crate is three-dimensional,
//! so plain fixed-size arrays beat a general linear-algebra dependency.

use crate::real::Real;

pub type Mat3<T> = [[T; 3]; 3];
pub type Vec3<T> = [T; 3];

pub fn zero<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn identity<T: Real>() -> Mat3<T> {
    let mut m = zero();
    for i in 0..3 {
        m[i][i] = T::one();
    }
    m
}

pub fn transpose<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let mut r = zero();
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = m[j][i];
        }
    }
    r
}

pub fn mat_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut r = zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = T::zero();
            for k in 0..3 {
                s = s + a[i][k] * b[k][j];
            }
            r[i][j] = s;
        }
    }
    r
}

pub fn mat_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    let mut r = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i] = r[i] + m[i][j] * v[j];
        }
    }
    r
}

pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm<T: Real>(v: &Vec3<T>) -> T {
    dot(v, v).sqrt()
}

pub fn scale_vec<T: Real>(v: &Vec3<T>, c: T) -> Vec3<T> {
    [v[0] * c, v[1] * c, v[2] * c]
}

pub fn sub_vec<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn det3<T: Real>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse via the adjugate; returns `None` when the determinant vanishes.
pub fn inv3<T: Real>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let d = det3(m);
    if d == T::zero() || !d.is_finite() {
        return None;
    }
    let inv_d = T::one() / d;
    let mut r = zero();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (c, e) = ((j + 1) % 3, (j + 2) % 3);
            // Cofactor transpose folded in by swapping index roles.
            r[j][i] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) * inv_d;
        }
    }
    Some(r)
}

/// Cholesky factor `L` (lower triangular) of a symmetric positive-definite
/// matrix; `None` when the matrix is not positive-definite.
pub fn cholesky3<T: Real>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let mut l = zero();
    for i in 0..3 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s = s - l[i][k] * l[j][k];
            }
            if i == j {
                if !(s > T::zero()) || !s.is_finite() {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solves `L x = b` with `L` lower triangular.
pub fn forward_sub<T: Real>(l: &Mat3<T>, b: &Vec3<T>) -> Vec3<T> {
    let mut x = [T::zero(); 3];
    for i in 0..3 {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[i][k] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Solves `L^T x = b` with `L` lower triangular.
pub fn back_sub_transposed<T: Real>(l: &Mat3<T>, b: &Vec3<T>) -> Vec3<T> {
    let mut x = [T::zero(); 3];
    for i in (0..3).rev() {
        let mut s = b[i];
        for k in (i + 1)..3 {
            s = s - l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Levi-Civita symbol on three indices.
pub fn levi_civita<T: Real>(i: usize, j: usize, k: usize) -> T {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => T::one(),
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -T::one(),
        _ => T::zero(),
    }
}

pub fn max_abs<T: Real>(m: &Mat3<T>) -> T {
    let mut r = T::zero();
    for row in m {
        for &v in row {
            r = r.max(v.abs());
        }
    }
    r
}

pub fn frobenius<T: Real>(m: &Mat3<T>) -> T {
    let mut s = T::zero();
    for row in m {
        for &v in row {
            s = s + v * v;
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m: Mat3<f64> = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inv3(&m).unwrap();
        let p = mat_mul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p[i][j] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_rebuilds() {
        let m: Mat3<f64> = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let l = cholesky3(&m).unwrap();
        let rebuilt = mat_mul(&l, &transpose(&l));
        for i in 0..3 {
            for j in 0..3 {
                assert!((rebuilt[i][j] - m[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m: Mat3<f64> = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(cholesky3(&m).is_none());
    }

    #[test]
    fn triangular_solves() {
        let m: Mat3<f64> = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let l = cholesky3(&m).unwrap();
        let b = [1.0, -2.0, 0.5];
        let y = forward_sub(&l, &b);
        let x = back_sub_transposed(&l, &y);
        let back = mat_vec(&m, &x);
        for i in 0..3 {
            assert!((back[i] - b[i]).abs() < 1e-13);
        }
    }
}
