//! Symmetric / antisymmetric rank-2 tensor storage and the quadrature
//! region description shared by the energy integrals.

use crate::error::{Error, Result};
use crate::numerics::mat3::{self, Mat3};
use crate::real::Real;

/// Symmetric 3x3 tensor; stores only the six independent components
/// (diagonal then upper triangle), so (i,j) == (j,i) by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymTensor3<T> {
    // [11, 22, 33, 12, 13, 23]
    comps: [T; 6],
}

impl<T: Real> SymTensor3<T> {
    pub fn zero() -> Self {
        Self {
            comps: [T::zero(); 6],
        }
    }

    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one(), T::one())
    }

    pub fn diagonal(a: T, b: T, c: T) -> Self {
        Self {
            comps: [a, b, c, T::zero(), T::zero(), T::zero()],
        }
    }

    pub fn from_components(c11: T, c22: T, c33: T, c12: T, c13: T, c23: T) -> Self {
        Self {
            comps: [c11, c22, c33, c12, c13, c23],
        }
    }

    /// Accepts a full matrix that is already symmetric; asymmetry beyond
    /// `1e-12 * max|entry|` is rejected rather than silently averaged.
    pub fn from_matrix(m: &Mat3<T>) -> Result<Self> {
        let scale = mat3::max_abs(m).max(T::one());
        let tol = T::of(1e-12) * scale;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if !(m[i][j] - m[j][i]).abs().is_finite() {
                    return Err(Error::invalid("non-finite tensor component"));
                }
                if (m[i][j] - m[j][i]).abs() > tol {
                    return Err(Error::invalid(format!(
                        "matrix not symmetric: entry ({i},{j}) differs from ({j},{i}) by {:e}",
                        (m[i][j] - m[j][i]).abs().as_f64()
                    )));
                }
            }
        }
        Ok(Self::from_components(
            m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2],
        ))
    }

    /// Symmetric part ½(M + Mᵀ) of an arbitrary matrix.
    pub fn symmetrize(m: &Mat3<T>) -> Self {
        let half = T::of(0.5);
        Self::from_components(
            m[0][0],
            m[1][1],
            m[2][2],
            half * (m[0][1] + m[1][0]),
            half * (m[0][2] + m[2][0]),
            half * (m[1][2] + m[2][1]),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < 3 && j < 3);
        if i == j {
            self.comps[i]
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            match (a, b) {
                (0, 1) => self.comps[3],
                (0, 2) => self.comps[4],
                _ => self.comps[5],
            }
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < 3 && j < 3);
        if i == j {
            self.comps[i] = v;
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            match (a, b) {
                (0, 1) => self.comps[3] = v,
                (0, 2) => self.comps[4] = v,
                _ => self.comps[5] = v,
            }
        }
    }

    pub fn as_matrix(&self) -> Mat3<T> {
        let mut m = mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.get(i, j);
            }
        }
        m
    }

    pub fn trace(&self) -> T {
        self.comps[0] + self.comps[1] + self.comps[2]
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut r = *self;
        for v in r.comps.iter_mut() {
            *v = *v * c;
        }
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = *self;
        for (v, o) in r.comps.iter_mut().zip(other.comps.iter()) {
            *v = *v + *o;
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = *self;
        for (v, o) in r.comps.iter_mut().zip(other.comps.iter()) {
            *v = *v - *o;
        }
        r
    }

    pub fn max_abs(&self) -> T {
        self.comps
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius(&self) -> T {
        mat3::frobenius(&self.as_matrix())
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|v| v.is_finite())
    }
}

/// Antisymmetric 3x3 tensor; stores the three independent components
/// above the diagonal, so the diagonal is identically zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiTensor3<T> {
    // [12, 13, 23]
    comps: [T; 3],
}

impl<T: Real> AntiTensor3<T> {
    pub fn zero() -> Self {
        Self {
            comps: [T::zero(); 3],
        }
    }

    pub fn from_components(c12: T, c13: T, c23: T) -> Self {
        Self {
            comps: [c12, c13, c23],
        }
    }

    /// Accepts a full matrix that is already antisymmetric, same tolerance
    /// policy as `SymTensor3::from_matrix`.
    pub fn from_matrix(m: &Mat3<T>) -> Result<Self> {
        let scale = mat3::max_abs(m).max(T::one());
        let tol = T::of(1e-12) * scale;
        for i in 0..3 {
            if m[i][i].abs() > tol {
                return Err(Error::invalid(format!(
                    "matrix not antisymmetric: diagonal entry ({i},{i}) = {:e}",
                    m[i][i].as_f64()
                )));
            }
            for j in (i + 1)..3 {
                if (m[i][j] + m[j][i]).abs() > tol {
                    return Err(Error::invalid(format!(
                        "matrix not antisymmetric: ({i},{j}) + ({j},{i}) = {:e}",
                        (m[i][j] + m[j][i]).abs().as_f64()
                    )));
                }
            }
        }
        Ok(Self::from_components(m[0][1], m[0][2], m[1][2]))
    }

    /// Antisymmetric part ½(M − Mᵀ) of an arbitrary matrix.
    pub fn antisymmetrize(m: &Mat3<T>) -> Self {
        let half = T::of(0.5);
        Self::from_components(
            half * (m[0][1] - m[1][0]),
            half * (m[0][2] - m[2][0]),
            half * (m[1][2] - m[2][1]),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < 3 && j < 3);
        if i == j {
            return T::zero();
        }
        let v = match (i.min(j), i.max(j)) {
            (0, 1) => self.comps[0],
            (0, 2) => self.comps[1],
            _ => self.comps[2],
        };
        if i < j {
            v
        } else {
            -v
        }
    }

    pub fn set_upper(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < j && j < 3);
        match (i, j) {
            (0, 1) => self.comps[0] = v,
            (0, 2) => self.comps[1] = v,
            _ => self.comps[2] = v,
        }
    }

    pub fn as_matrix(&self) -> Mat3<T> {
        let mut m = mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.get(i, j);
            }
        }
        m
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::from_components(self.comps[0] * c, self.comps[1] * c, self.comps[2] * c)
    }

    pub fn max_abs(&self) -> T {
        self.comps
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|v| v.is_finite())
    }
}

/// Quadrature rule over an axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureRule {
    Midpoint,
    Trapezoid,
}

/// Integration region + sampling description for the volume integrals.
#[derive(Clone, Debug)]
pub struct QuadratureSpec<T> {
    pub lower: [T; 3],
    pub upper: [T; 3],
    pub counts: [usize; 3],
    pub rule: QuadratureRule,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(lower: [T; 3], upper: [T; 3], counts: [usize; 3], rule: QuadratureRule) -> Result<Self> {
        for a in 0..3 {
            if !(lower[a] < upper[a]) {
                return Err(Error::invalid(format!(
                    "quadrature bounds on axis {a} not ordered: [{}, {}]",
                    lower[a].as_f64(),
                    upper[a].as_f64()
                )));
            }
            if counts[a] == 0 {
                return Err(Error::invalid(format!("zero sample count on axis {a}")));
            }
            if rule == QuadratureRule::Trapezoid && counts[a] < 2 {
                return Err(Error::invalid(format!(
                    "trapezoid rule needs at least 2 samples on axis {a}, got {}",
                    counts[a]
                )));
            }
        }
        Ok(Self {
            lower,
            upper,
            counts,
            rule,
        })
    }

    /// Unit cube with the midpoint rule, n samples per axis.
    pub fn unit_box(n: usize) -> Self {
        Self {
            lower: [T::zero(); 3],
            upper: [T::one(); 3],
            counts: [n; 3],
            rule: QuadratureRule::Midpoint,
        }
    }
}
