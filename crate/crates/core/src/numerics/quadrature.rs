//! Tensor-product box quadrature (midpoint / trapezoid) for the volume
//! integrals. Nothing fancier is warranted: the integrands are smooth and
//! the dominant error is the physics discretization, not the quadrature.

use crate::error::{Error, Result};
use crate::numerics::tensor::{QuadratureRule, QuadratureSpec};
use crate::real::{Point3, Real};

/// Per-axis node/weight sets for the chosen rule.
fn axis_nodes<T: Real>(lo: T, hi: T, n: usize, rule: QuadratureRule) -> (Vec<T>, Vec<T>) {
    let width = hi - lo;
    match rule {
        QuadratureRule::Midpoint => {
            let h = width / T::from_usize(n).unwrap();
            let half = T::of(0.5);
            let nodes = (0..n)
                .map(|k| lo + h * (T::from_usize(k).unwrap() + half))
                .collect();
            (nodes, vec![h; n])
        }
        QuadratureRule::Trapezoid => {
            let h = width / T::from_usize(n - 1).unwrap();
            let nodes: Vec<T> = (0..n)
                .map(|k| lo + h * T::from_usize(k).unwrap())
                .collect();
            let mut weights = vec![h; n];
            weights[0] = h * T::of(0.5);
            weights[n - 1] = h * T::of(0.5);
            (nodes, weights)
        }
    }
}

/// The rule's grid nodes without weights, row-major over (x, y, z). Used by
/// residual scans that sample the same region a quadrature would.
pub fn sample_points<T: Real>(q: &QuadratureSpec<T>) -> Vec<Point3<T>> {
    let mut axes = Vec::with_capacity(3);
    for a in 0..3 {
        axes.push(axis_nodes(q.lower[a], q.upper[a], q.counts[a], q.rule).0);
    }
    let mut pts = Vec::with_capacity(q.counts[0] * q.counts[1] * q.counts[2]);
    for &x in &axes[0] {
        for &y in &axes[1] {
            for &z in &axes[2] {
                pts.push([x, y, z]);
            }
        }
    }
    pts
}

/// Integrates `f` over the box described by `q`. A non-finite sample aborts
/// with the offending grid point in the message.
pub fn box_integrate<T, F>(mut f: F, q: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    F: FnMut(&[T; 3]) -> T,
{
    box_integrate_try(
        |p| {
            let v = f(p);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::invalid(format!(
                    "non-finite integrand at grid point ({}, {}, {})",
                    p[0].as_f64(),
                    p[1].as_f64(),
                    p[2].as_f64()
                )))
            }
        },
        q,
    )
}

/// Like [`box_integrate`] but for integrands that can fail with a typed
/// error of their own; the first failure aborts the sum.
pub fn box_integrate_try<T, F>(mut f: F, q: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    F: FnMut(&[T; 3]) -> Result<T>,
{
    let mut axes = Vec::with_capacity(3);
    for a in 0..3 {
        axes.push(axis_nodes(q.lower[a], q.upper[a], q.counts[a], q.rule));
    }
    let mut total = T::zero();
    for (i, &x) in axes[0].0.iter().enumerate() {
        let wx = axes[0].1[i];
        for (j, &y) in axes[1].0.iter().enumerate() {
            let wy = axes[1].1[j];
            for (k, &z) in axes[2].0.iter().enumerate() {
                let wz = axes[2].1[k];
                let v = f(&[x, y, z])?;
                total = total + v * wx * wy * wz;
            }
        }
    }
    Ok(total)
}
