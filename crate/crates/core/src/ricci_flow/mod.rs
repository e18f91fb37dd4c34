//! Ricci-flow evolution ∂g/∂t = −2 R_ij and the diagnostics built on it:
//! the generalized Ricci eigenproblem, Lyapunov exponents, and the
//! frozen-eigenvalue conformal metric.
//!
//! Constant-curvature families evolve through a single scale factor whose
//! ODE right-hand side recomputes curvature numerically each stage (the
//! closed-form linear law is an oracle, not an input). `DiagonalCustom`
//! metrics evolve pointwise on a sample grid.

mod grid;
mod scale;
mod spectrum;

pub use grid::{evolve_on_grid, FlowGrid};
pub use scale::evolve;
pub use spectrum::{lyapunov_metric, lyapunov_spectrum, ricci_eigenvalues, LyapunovSpectrum};

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::real::{Point3, Real};

/// Time-ordered metric history produced by `evolve`.
#[derive(Clone, Debug)]
pub struct MetricTrajectory<T> {
    pub family: &'static str,
    pub dt: T,
    /// Sample times, strictly increasing; `times[0]` is the start of the span.
    pub times: Vec<T>,
    pub data: TrajectoryData<T>,
}

#[derive(Clone, Debug)]
pub enum TrajectoryData<T> {
    /// g(t) = c(t) · g₀ for families closed under the flow by scaling.
    /// `scales` aligns with `times`; `scales[0] = 1`.
    Scale { base: MetricField<T>, scales: Vec<T> },
    /// Pointwise samples on a fixed grid; `snapshots[k]` is the flattened
    /// per-site component state (six per site) at `times[k]`.
    Grid {
        grid: FlowGrid<T>,
        snapshots: Vec<Vec<T>>,
    },
}

impl<T: Real> MetricTrajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Metric snapshot at sample index `k`; available for scale-flow data.
    pub fn metric_at(&self, k: usize) -> Result<MetricField<T>> {
        match &self.data {
            TrajectoryData::Scale { base, scales } => {
                MetricField::einstein_scaled(base.clone(), scales[k])
            }
            TrajectoryData::Grid { .. } => Err(Error::invalid(
                "grid trajectories have no closed-form metric snapshot",
            )),
        }
    }

    /// Scale factor at an arbitrary time inside the span, linearly
    /// interpolated between samples (exact for Einstein flows, where the
    /// scale is linear in t).
    pub fn scale_at(&self, t: T) -> Result<T> {
        let TrajectoryData::Scale { scales, .. } = &self.data else {
            return Err(Error::invalid("scale_at applies to scale-flow data"));
        };
        let times = &self.times;
        if t < times[0] || t > times[times.len() - 1] {
            return Err(Error::invalid(format!(
                "time {} outside trajectory span [{}, {}]",
                t.as_f64(),
                times[0].as_f64(),
                times[times.len() - 1].as_f64()
            )));
        }
        let mut k = 0;
        while k + 2 < times.len() && times[k + 1] < t {
            k += 1;
        }
        let (t0, t1) = (times[k], times[k + 1]);
        let w = (t - t0) / (t1 - t0);
        Ok(scales[k] + w * (scales[k + 1] - scales[k]))
    }

    /// Six metric components (11, 22, 33, 12, 13, 23) at sample `k`,
    /// evaluated at `p` (scale data) or at the nearest grid node (grid data).
    pub fn components_at(&self, k: usize, p: &Point3<T>) -> Result<[T; 6]> {
        match &self.data {
            TrajectoryData::Scale { .. } => {
                let m = self.metric_at(k)?;
                let g = m.value(p, self.times[k]);
                Ok([g[0][0], g[1][1], g[2][2], g[0][1], g[0][2], g[1][2]])
            }
            TrajectoryData::Grid { grid, snapshots } => {
                let site = grid.nearest_site(p);
                let s = &snapshots[k];
                let mut out = [T::zero(); 6];
                out.copy_from_slice(&s[site * 6..site * 6 + 6]);
                Ok(out)
            }
        }
    }
}
