//! Grid-sampled Ricci flow for metrics without a closed-form scaling law.
//! Metric components live on an inclusive-endpoint box grid; curvature is
//! rebuilt each RK4 stage from second-order stencils (central in the
//! interior, one-sided at the boundary), and positive-definiteness is
//! monitored every accepted step.

use crate::error::{Error, Result};
use crate::geometry::{curvature, MetricField};
use crate::numerics::mat3::{self, Mat3};
use crate::numerics::ode;
use crate::real::{Point3, Real};
use crate::ricci_flow::{MetricTrajectory, TrajectoryData};

/// Cap on retained snapshots; long runs keep a stride of steps (always
/// including both endpoints) so trajectories stay affordable in memory.
const MAX_SNAPSHOTS: usize = 129;

/// Inclusive-endpoint sample grid over an axis-aligned box. At least four
/// nodes per axis so the one-sided boundary stencils fit.
#[derive(Clone, Debug)]
pub struct FlowGrid<T> {
    pub lower: Point3<T>,
    pub upper: Point3<T>,
    pub dims: [usize; 3],
}

impl<T: Real> FlowGrid<T> {
    pub fn new(lower: Point3<T>, upper: Point3<T>, dims: [usize; 3]) -> Result<Self> {
        for a in 0..3 {
            if !(lower[a] < upper[a]) {
                return Err(Error::invalid(format!(
                    "grid bounds on axis {a} not ordered"
                )));
            }
            if dims[a] < 4 {
                return Err(Error::invalid(format!(
                    "grid needs at least 4 nodes per axis, axis {a} has {}",
                    dims[a]
                )));
            }
        }
        Ok(Self { lower, upper, dims })
    }

    /// Unit box at the default resolution.
    pub fn default_unit() -> Self {
        Self {
            lower: [T::zero(); 3],
            upper: [T::one(); 3],
            dims: [33; 3],
        }
    }

    pub fn spacing(&self, axis: usize) -> T {
        (self.upper[axis] - self.lower[axis]) / T::from_usize(self.dims[axis] - 1).unwrap()
    }

    pub fn node(&self, idx: [usize; 3]) -> Point3<T> {
        let mut p = [T::zero(); 3];
        for a in 0..3 {
            p[a] = self.lower[a] + self.spacing(a) * T::from_usize(idx[a]).unwrap();
        }
        p
    }

    pub fn site(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.dims[1] + idx[1]) * self.dims[2] + idx[2]
    }

    pub fn site_index(&self, site: usize) -> [usize; 3] {
        let iz = site % self.dims[2];
        let rest = site / self.dims[2];
        let iy = rest % self.dims[1];
        let ix = rest / self.dims[1];
        [ix, iy, iz]
    }

    pub fn num_sites(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Site whose node is nearest to `p` (clamped into the box).
    pub fn nearest_site(&self, p: &Point3<T>) -> usize {
        let mut idx = [0usize; 3];
        for a in 0..3 {
            let rel = (p[a] - self.lower[a]) / self.spacing(a);
            let k = rel.round().as_f64().max(0.0) as usize;
            idx[a] = k.min(self.dims[a] - 1);
        }
        self.site(idx)
    }
}

/// One-dimensional derivative stencil: list of (index, coefficient).
type Stencil<T> = Vec<(usize, T)>;

/// Per-axis stencil tables for first and second derivatives at every index.
struct StencilTable<T> {
    first: Vec<Stencil<T>>,
    second: Vec<Stencil<T>>,
}

fn build_stencils<T: Real>(n: usize, h: T) -> StencilTable<T> {
    let inv_2h = T::one() / (T::of(2.0) * h);
    let inv_h2 = T::one() / (h * h);
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            // Second-order one-sided stencils at the lower edge.
            first.push(vec![
                (0, -(T::of(3.0)) * inv_2h),
                (1, T::of(4.0) * inv_2h),
                (2, -inv_2h),
            ]);
            second.push(vec![
                (0, T::of(2.0) * inv_h2),
                (1, -(T::of(5.0)) * inv_h2),
                (2, T::of(4.0) * inv_h2),
                (3, -inv_h2),
            ]);
        } else if i == n - 1 {
            first.push(vec![
                (n - 1, T::of(3.0) * inv_2h),
                (n - 2, -(T::of(4.0)) * inv_2h),
                (n - 3, inv_2h),
            ]);
            second.push(vec![
                (n - 1, T::of(2.0) * inv_h2),
                (n - 2, -(T::of(5.0)) * inv_h2),
                (n - 3, T::of(4.0) * inv_h2),
                (n - 4, -inv_h2),
            ]);
        } else {
            first.push(vec![(i - 1, -inv_2h), (i + 1, inv_2h)]);
            second.push(vec![
                (i - 1, inv_h2),
                (i, -(T::of(2.0)) * inv_h2),
                (i + 1, inv_h2),
            ]);
        }
    }
    StencilTable { first, second }
}

const COMP_INDEX: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

fn state_to_mat<T: Real>(state: &[T], site: usize) -> Mat3<T> {
    let s = &state[site * 6..site * 6 + 6];
    let mut g = mat3::zero();
    for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
        g[i][j] = s[c];
        g[j][i] = s[c];
    }
    g
}

/// Evolves metric samples on `grid` under ∂g/∂t = −2R from `t_span.0` to
/// `t_span.1`. Works for any evaluable metric field; intended for
/// `DiagonalCustom` inputs.
pub fn evolve_on_grid<T: Real>(
    m0: &MetricField<T>,
    grid: &FlowGrid<T>,
    (t0, t1): (T, T),
    dt: T,
) -> Result<MetricTrajectory<T>> {
    if !(dt > T::zero()) {
        return Err(Error::invalid("evolve_on_grid requires dt > 0"));
    }
    if t1 < t0 {
        return Err(Error::invalid("evolve_on_grid requires t1 >= t0"));
    }
    let sites = grid.num_sites();
    let mut state = vec![T::zero(); sites * 6];
    for s in 0..sites {
        let p = grid.node(grid.site_index(s));
        let g = m0.value(&p, t0);
        for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
            state[s * 6 + c] = g[i][j];
        }
    }
    check_positive_definite(&state, grid, t0)?;

    let tables: [StencilTable<T>; 3] = [
        build_stencils(grid.dims[0], grid.spacing(0)),
        build_stencils(grid.dims[1], grid.spacing(1)),
        build_stencils(grid.dims[2], grid.spacing(2)),
    ];

    let rhs = |_t: T, y: &[T], dy: &mut [T]| {
        for s in 0..sites {
            let idx = grid.site_index(s);
            let g = state_to_mat(y, s);
            let node = grid.node(idx);

            // First derivatives of each component along each axis.
            let mut dg = [mat3::zero::<T>(); 3];
            for a in 0..3 {
                for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
                    let mut acc = T::zero();
                    for &(k, w) in &tables[a].first[idx[a]] {
                        let mut nb = idx;
                        nb[a] = k;
                        acc = acc + w * y[grid.site(nb) * 6 + c];
                    }
                    dg[a][i][j] = acc;
                    dg[a][j][i] = acc;
                }
            }
            // Second derivatives: same-axis from the 2nd-derivative stencil,
            // mixed from composed first-derivative stencils.
            let mut d2g = [[mat3::zero::<T>(); 3]; 3];
            for a in 0..3 {
                for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
                    let mut acc = T::zero();
                    for &(k, w) in &tables[a].second[idx[a]] {
                        let mut nb = idx;
                        nb[a] = k;
                        acc = acc + w * y[grid.site(nb) * 6 + c];
                    }
                    d2g[a][a][i][j] = acc;
                    d2g[a][a][j][i] = acc;
                }
            }
            for a in 0..3 {
                for b in (a + 1)..3 {
                    for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
                        let mut acc = T::zero();
                        for &(ka, wa) in &tables[a].first[idx[a]] {
                            for &(kb, wb) in &tables[b].first[idx[b]] {
                                let mut nb = idx;
                                nb[a] = ka;
                                nb[b] = kb;
                                acc = acc + wa * wb * y[grid.site(nb) * 6 + c];
                            }
                        }
                        d2g[a][b][i][j] = acc;
                        d2g[a][b][j][i] = acc;
                        d2g[b][a][i][j] = acc;
                        d2g[b][a][j][i] = acc;
                    }
                }
            }

            match curvature::ricci_from_derivatives(&g, &dg, &d2g, &node) {
                Ok(ric) => {
                    for (c, &(i, j)) in COMP_INDEX.iter().enumerate() {
                        dy[s * 6 + c] = -(T::of(2.0)) * ric.get(i, j);
                    }
                }
                Err(_) => {
                    for c in 0..6 {
                        dy[s * 6 + c] = T::nan();
                    }
                }
            }
        }
    };

    let n_steps = ((t1 - t0) / dt).ceil().as_f64() as usize;
    let stride = n_steps / MAX_SNAPSHOTS + 1;

    let mut times = vec![t0];
    let mut snapshots = vec![state.clone()];
    let mut t = t0;
    let mut step_no = 0usize;
    let slack = T::of(1e-12) * dt.max(T::one());
    while t < t1 - slack {
        let step = dt.min(t1 - t);
        state = match ode::ode_step(&state, rhs, t, step) {
            Ok(v) => v,
            Err(Error::NumericalBlowup { time }) => {
                return Err(Error::FlowSingularity { time });
            }
            Err(e) => return Err(e),
        };
        t = t + step;
        step_no += 1;
        check_positive_definite(&state, grid, t)?;
        let last = !(t < t1 - slack);
        if step_no % stride == 0 || last {
            times.push(t);
            snapshots.push(state.clone());
        }
    }

    Ok(MetricTrajectory {
        family: m0.family_name(),
        dt,
        times,
        data: TrajectoryData::Grid {
            grid: grid.clone(),
            snapshots,
        },
    })
}

fn check_positive_definite<T: Real>(state: &[T], grid: &FlowGrid<T>, t: T) -> Result<()> {
    for s in 0..grid.num_sites() {
        let g = state_to_mat(state, s);
        if mat3::cholesky3(&g).is_none() {
            return Err(Error::FlowSingularity { time: t.as_f64() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid(lower: [f64; 3], upper: [f64; 3], n: usize) -> FlowGrid<f64> {
        FlowGrid::new(lower, upper, [n; 3]).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(FlowGrid::new([0.0; 3], [1.0; 3], [4, 4, 4]).is_ok());
        assert!(FlowGrid::new([0.0; 3], [1.0; 3], [3, 4, 4]).is_err());
        assert!(FlowGrid::<f64>::new([1.0, 0.0, 0.0], [0.5, 1.0, 1.0], [4, 4, 4]).is_err());
    }

    #[test]
    fn nearest_site_round_trip() {
        let g = small_grid([0.0; 3], [1.0; 3], 5);
        let idx = [2usize, 3, 1];
        let p = g.node(idx);
        assert_eq!(g.nearest_site(&p), g.site(idx));
    }

    #[test]
    fn constant_metric_stays_put() {
        let m = MetricField::<f64>::diagonal_custom(|_| 2.0, |_| 1.0, |_| 0.5);
        let grid = small_grid([0.0; 3], [1.0; 3], 4);
        let traj = evolve_on_grid(&m, &grid, (0.0, 0.05), 0.01).unwrap();
        let comps = traj.components_at(traj.len() - 1, &[0.5, 0.5, 0.5]).unwrap();
        assert!((comps[0] - 2.0).abs() < 1e-10);
        assert!((comps[1] - 1.0).abs() < 1e-10);
        assert!((comps[2] - 0.5).abs() < 1e-10);
        assert!(comps[3].abs() < 1e-10);
    }

    #[test]
    fn coordinate_stretched_flat_metric_stays_put() {
        // g = diag((1+x)², 1, 1) is flat (substitute u = x + x²/2), so the
        // flow must leave it fixed even though its derivatives are nonzero.
        let m = MetricField::<f64>::diagonal_custom(
            |p| (1.0 + p[0]) * (1.0 + p[0]),
            |_| 1.0,
            |_| 1.0,
        );
        let grid = small_grid([0.0; 3], [1.0; 3], 6);
        let traj = evolve_on_grid(&m, &grid, (0.0, 0.02), 0.005).unwrap();
        let p = [0.4, 0.4, 0.4];
        let got = traj.components_at(traj.len() - 1, &p).unwrap();
        let want = (1.0 + p[0]).powi(2);
        assert!(
            (got[0] - want).abs() < 1e-6,
            "g11 drifted: {} vs {want}",
            got[0]
        );
        assert!((got[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sampled_sphere_contracts_like_the_exact_flow() {
        // The unit-sphere metric expressed as a DiagonalCustom field; under
        // the flow every component should scale by ≈ (1 − 4t).
        let m = MetricField::<f64>::diagonal_custom(
            |_| 1.0,
            |p| p[0].sin().powi(2),
            |p| (p[0].sin() * p[1].sin()).powi(2),
        );
        let grid = small_grid([0.7, 0.7, 0.0], [2.3, 2.3, 1.0], 8);
        let t_end = 0.01;
        let traj = evolve_on_grid(&m, &grid, (0.0, t_end), 2e-3).unwrap();
        let p = [1.5, 1.5, 0.5];
        let start = traj.components_at(0, &p).unwrap();
        let end = traj.components_at(traj.len() - 1, &p).unwrap();
        let want = 1.0 - 4.0 * t_end;
        for c in 0..3 {
            let ratio = end[c] / start[c];
            assert!(
                (ratio - want).abs() < 5e-3,
                "component {c}: ratio {ratio} vs {want}"
            );
        }
    }

    #[test]
    fn degenerating_grid_flow_raises_singularity() {
        let m = MetricField::<f64>::diagonal_custom(
            |_| 1.0,
            |p| p[0].sin().powi(2),
            |p| (p[0].sin() * p[1].sin()).powi(2),
        );
        let grid = small_grid([0.7, 0.7, 0.0], [2.3, 2.3, 1.0], 6);
        match evolve_on_grid(&m, &grid, (0.0, 0.5), 0.01) {
            Err(Error::FlowSingularity { time }) => {
                assert!(time > 0.0 && time < 0.5, "critical time {time}");
            }
            other => panic!("expected FlowSingularity, got {:?}", other.map(|t| t.family)),
        }
    }
}
