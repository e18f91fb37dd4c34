//! Central finite differences. These exist mostly as *oracles*: the built-in
//! metric families carry analytic derivatives, and the test suites replay
//! them through these stencils to catch sign slips.

use crate::error::{Error, Result};
use crate::real::{Point3, Real};

/// Default step for first derivatives: balances O(h²) truncation against
/// double-precision cancellation.
pub fn default_step<T: Real>() -> T {
    T::of(1e-5)
}

/// Second derivatives lose one more digit to cancellation; use a wider step.
pub fn default_second_step<T: Real>() -> T {
    T::of(1e-4)
}

fn check_finite<T: Real>(v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid("non-finite finite-difference evaluation"))
    }
}

/// Central difference ∂f/∂x_axis at `p`, error O(h²).
pub fn fd_partial<T, F>(mut f: F, p: &Point3<T>, axis: usize, h: T) -> Result<T>
where
    T: Real,
    F: FnMut(&Point3<T>) -> T,
{
    if !(h > T::zero()) {
        return Err(Error::invalid("fd_partial requires h > 0"));
    }
    let mut plus = *p;
    let mut minus = *p;
    plus[axis] = plus[axis] + h;
    minus[axis] = minus[axis] - h;
    let fp = check_finite(f(&plus))?;
    let fm = check_finite(f(&minus))?;
    check_finite((fp - fm) / (T::of(2.0) * h))
}

/// Central second difference ∂²f/∂x_axis² at `p`, error O(h²).
pub fn fd_second<T, F>(mut f: F, p: &Point3<T>, axis: usize, h: T) -> Result<T>
where
    T: Real,
    F: FnMut(&Point3<T>) -> T,
{
    if !(h > T::zero()) {
        return Err(Error::invalid("fd_second requires h > 0"));
    }
    let mut plus = *p;
    let mut minus = *p;
    plus[axis] = plus[axis] + h;
    minus[axis] = minus[axis] - h;
    let fp = check_finite(f(&plus))?;
    let f0 = check_finite(f(p))?;
    let fm = check_finite(f(&minus))?;
    check_finite((fp - T::of(2.0) * f0 + fm) / (h * h))
}

/// Mixed second difference ∂²f/(∂x_a ∂x_b), a ≠ b, via the four-corner
/// stencil, error O(h²).
pub fn fd_mixed<T, F>(mut f: F, p: &Point3<T>, a: usize, b: usize, h: T) -> Result<T>
where
    T: Real,
    F: FnMut(&Point3<T>) -> T,
{
    if !(h > T::zero()) {
        return Err(Error::invalid("fd_mixed requires h > 0"));
    }
    if a == b {
        return fd_second(f, p, a, h);
    }
    let mut pp = *p;
    let mut pm = *p;
    let mut mp = *p;
    let mut mm = *p;
    pp[a] = pp[a] + h;
    pp[b] = pp[b] + h;
    pm[a] = pm[a] + h;
    pm[b] = pm[b] - h;
    mp[a] = mp[a] - h;
    mp[b] = mp[b] + h;
    mm[a] = mm[a] - h;
    mm[b] = mm[b] - h;
    let v = (check_finite(f(&pp))? - check_finite(f(&pm))? - check_finite(f(&mp))?
        + check_finite(f(&mm))?)
        / (T::of(4.0) * h * h);
    check_finite(v)
}
