//! Zero-resistivity self-induction of the magnetic field in a rotating
//! frame, the exponential mode ansatz and its growth rate, the fast-dynamo
//! operator residual, and empirical growth measurement by time integration.
//!
//! Time derivatives are material derivatives in the comoving description:
//! the integrator advances mode amplitudes at an evaluation point, not an
//! Eulerian PDE — no v·∇B transport term appears anywhere in the model.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::kinematics::{
    covariant_gradient, decompose, frame_vorticity, tensor_projection, FlowDecomposition,
    FrameMode, FrameVorticity, ProjectionOperand, VelocityField,
};
use crate::numerics::mat3::{self, Vec3};
use crate::numerics::ode;
use crate::real::{Point3, Real};

/// Exponential mode B = B⁰ exp[γt + i ω_k·x]. Amplitudes stay real; the
/// phase is metadata and cancels in every derived quantity.
#[derive(Clone, Copy, Debug)]
pub struct MagneticMode<T> {
    pub amplitude: Vec3<T>,
    pub growth_rate: T,
    pub wavevector: Vec3<T>,
}

impl<T: Real> MagneticMode<T> {
    pub fn new(amplitude: Vec3<T>, growth_rate: T, wavevector: Vec3<T>) -> Result<Self> {
        if amplitude.iter().all(|c| *c == T::zero()) {
            return Err(Error::invalid("mode amplitude must be nonzero"));
        }
        if !amplitude.iter().all(|c| c.is_finite())
            || !growth_rate.is_finite()
            || !wavevector.iter().all(|c| c.is_finite())
        {
            return Err(Error::invalid("non-finite mode parameters"));
        }
        Ok(Self {
            amplitude,
            growth_rate,
            wavevector,
        })
    }
}

/// Contravariant magnetic components at one instant.
#[derive(Clone, Copy, Debug)]
pub struct MagneticState<T> {
    pub b: Vec3<T>,
    pub time: T,
}

/// A magnetic field evaluable over space and time, for the energy
/// integrals.
#[derive(Clone)]
pub enum MagneticField<T> {
    Uniform { b: Vec3<T> },
    /// Spatially constant amplitude with exponential time dependence.
    Mode { mode: MagneticMode<T> },
    Sampled {
        f: Arc<dyn Fn(&Point3<T>, T) -> Vec3<T> + Send + Sync>,
    },
}

impl<T: Real> MagneticField<T> {
    pub fn uniform(b: Vec3<T>) -> Self {
        Self::Uniform { b }
    }

    pub fn mode(mode: MagneticMode<T>) -> Self {
        Self::Mode { mode }
    }

    pub fn sampled(f: impl Fn(&Point3<T>, T) -> Vec3<T> + Send + Sync + 'static) -> Self {
        Self::Sampled { f: Arc::new(f) }
    }

    pub fn evaluate(&self, p: &Point3<T>, t: T) -> Vec3<T> {
        match self {
            Self::Uniform { b } => *b,
            Self::Mode { mode } => {
                let a = (mode.growth_rate * t).exp();
                [
                    mode.amplitude[0] * a,
                    mode.amplitude[1] * a,
                    mode.amplitude[2] * a,
                ]
            }
            Self::Sampled { f } => f(p, t),
        }
    }
}

/// Which expansion of the induction equation to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InductionForm {
    /// dBⁱ/dt = Bᵖ[∂_p(gᶦˡ)v_l + gᶦˡ(∇_p v_l − ω_pl)]
    Full,
    /// Rigid-rotation reduction with Ω − ω cancelled:
    /// dBⁱ/dt = Bᵖ[∂_p(gᶦˡ)v_l + gᶦˡ(σ_pl − ⅓θ g_lp)]
    RigidRotation,
}

/// Material derivative dBⁱ/dt at `(p, t)`.
///
/// The two forms agree to rounding whenever the frame vorticity matches the
/// flow's Ω; using `RigidRotation` with an explicit frame that does not
/// match is an inconsistency and is rejected.
pub fn induction_rhs<T: Real>(
    b: &Vec3<T>,
    v: &VelocityField<T>,
    m: &MetricField<T>,
    fv: &FrameVorticity<T>,
    p: &Point3<T>,
    t: T,
    form: InductionForm,
) -> Result<Vec3<T>> {
    let chart = m.chart_point(p);
    let g = m.value(&chart, t);
    let ginv = m.inverse(&chart, t)?;
    let dg = m.first_derivatives(&chart, t)?;
    let nabla = covariant_gradient(v, m, &chart, t)?;
    let d = decompose(&nabla, m, &chart, t)?;

    if form == InductionForm::RigidRotation && !fv.matched {
        let mut dev = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                dev = dev.max((fv.omega.get(i, j) - d.vorticity.get(i, j)).abs());
            }
        }
        let scale = d.vorticity.max_abs().max(T::one());
        if dev > T::of(1e-12) * scale {
            return Err(Error::InconsistentFrame {
                max_deviation: dev.as_f64(),
            });
        }
    }

    // ∂_p gᶦˡ = −gᶦᵃ (∂_p g_ab) gᵇˡ
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
    let vel = v.evaluate(&chart);
    let v_low = mat3::mat_vec(&g, &vel);

    let third = T::of(1.0 / 3.0);
    let mut db = [T::zero(); 3];
    for i in 0..3 {
        let mut s = T::zero();
        for pp in 0..3 {
            // Common metric-derivative term ∂_p(gᶦˡ) v_l.
            let mut term = T::zero();
            for l in 0..3 {
                term = term + dginv[pp][i][l] * v_low[l];
            }
            // Bracket contracted with gᶦˡ.
            for l in 0..3 {
                let bracket = match form {
                    InductionForm::Full => nabla[pp][l] - fv.omega.get(pp, l),
                    InductionForm::RigidRotation => {
                        d.shear.get(pp, l) - third * d.expansion * g[l][pp]
                    }
                };
                term = term + ginv[i][l] * bracket;
            }
            s = s + b[pp] * term;
        }
        db[i] = s;
    }
    Ok(db)
}

/// γ = σ·proj + [Ω·proj if requested] − ⅓θ via the Rayleigh projections.
/// The Ω projection vanishes identically for real amplitudes; the flag is
/// kept because the source formula retains the term.
pub fn mode_growth_rate<T: Real>(
    d: &FlowDecomposition<T>,
    b: &Vec3<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
    t: T,
    include_vorticity: bool,
) -> Result<T> {
    let sigma = tensor_projection(&ProjectionOperand::Shear(d.shear), b, m, p, t)?;
    let omega = if include_vorticity {
        tensor_projection(&ProjectionOperand::Vorticity(d.vorticity), b, m, p, t)?
    } else {
        T::zero()
    };
    let theta_part = tensor_projection(&ProjectionOperand::Expansion(d.expansion), b, m, p, t)?;
    Ok(sigma + omega + theta_part)
}

/// Time-sampled magnetic evolution with its fitted growth rate.
#[derive(Clone, Debug)]
pub struct MagneticTrajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec3<T>>,
    /// Metric norms ‖B(t)‖_g at the evaluation point.
    pub norms: Vec<T>,
    /// Least-squares slope of ln‖B‖ over the second half of the span.
    pub gamma_hat: T,
}

impl<T: Real> MagneticTrajectory<T> {
    pub fn state(&self, k: usize) -> MagneticState<T> {
        MagneticState {
            b: self.states[k],
            time: self.times[k],
        }
    }

    /// Running growth-rate estimate: the fit restricted to samples up to
    /// `k` (second half of that prefix). NaN until two points exist.
    pub fn running_gamma(&self, k: usize) -> T {
        let lo = (k + 1) / 2;
        if k < 1 + lo {
            return T::nan();
        }
        fit_log_slope(&self.times[lo..=k], &self.norms[lo..=k])
    }
}

/// Integrates the induction equation from `b0` at the evaluation point `p`
/// over `t_span`, rebuilding the frame vorticity from `mode` each stage.
#[allow(clippy::too_many_arguments)]
pub fn evolve_b<T: Real>(
    b0: &Vec3<T>,
    v: &VelocityField<T>,
    m: &MetricField<T>,
    mode: &FrameMode<T>,
    p: &Point3<T>,
    t_span: (T, T),
    dt: T,
    form: InductionForm,
) -> Result<MagneticTrajectory<T>> {
    if !(dt > T::zero()) {
        return Err(Error::invalid("evolve_b requires dt > 0"));
    }
    // Surface frame inconsistencies before integration starts.
    {
        let grad = covariant_gradient(v, m, p, t_span.0)?;
        let d = decompose(&grad, m, p, t_span.0)?;
        let fv = frame_vorticity(&d, mode)?;
        induction_rhs(b0, v, m, &fv, p, t_span.0, form)?;
    }

    let rhs = |t: T, y: &[T], dy: &mut [T]| {
        let b = [y[0], y[1], y[2]];
        let result = covariant_gradient(v, m, p, t)
            .and_then(|grad| decompose(&grad, m, p, t))
            .and_then(|d| frame_vorticity(&d, mode))
            .and_then(|fv| induction_rhs(&b, v, m, &fv, p, t, form));
        match result {
            Ok(db) => dy.copy_from_slice(&db),
            Err(_) => dy.fill(T::nan()),
        }
    };

    let mut times = Vec::new();
    let mut states: Vec<Vec3<T>> = Vec::new();
    ode::integrate(b0, rhs, t_span.0, t_span.1, dt, |t, s| {
        times.push(t);
        states.push([s[0], s[1], s[2]]);
    })?;

    let mut norms = Vec::with_capacity(states.len());
    for (t, b) in times.iter().zip(states.iter()) {
        let g = m.value(&m.chart_point(p), *t);
        let gb = mat3::mat_vec(&g, b);
        norms.push(mat3::dot(b, &gb).max(T::zero()).sqrt());
    }

    let lo = times.len() / 2;
    let gamma_hat = if norms.iter().all(|n| *n > T::zero()) {
        fit_log_slope(&times[lo..], &norms[lo..])
    } else {
        T::zero()
    };

    Ok(MagneticTrajectory {
        times,
        states,
        norms,
        gamma_hat,
    })
}

/// Least-squares slope of ln(norm) against time.
fn fit_log_slope<T: Real>(times: &[T], norms: &[T]) -> T {
    let n = T::from_usize(times.len()).unwrap();
    let mut st = T::zero();
    let mut sy = T::zero();
    for (t, m) in times.iter().zip(norms.iter()) {
        st = st + *t;
        sy = sy + m.ln();
    }
    let (mt, my) = (st / n, sy / n);
    let mut num = T::zero();
    let mut den = T::zero();
    for (t, m) in times.iter().zip(norms.iter()) {
        let dt = *t - mt;
        num = num + dt * (m.ln() - my);
        den = den + dt * dt;
    }
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// Per-sample relative residuals of the fast-dynamo operator
/// 𝓛 = d/dt − [σ − ⅓θ + ω] applied to a trajectory, with d/dt by central
/// differences and the bracket as scalar projections.
#[derive(Clone, Debug)]
pub struct OperatorResidual<T> {
    /// Interior sample times (endpoints have no centered derivative).
    pub times: Vec<T>,
    /// ‖𝓛B‖_g / ‖B‖_g per interior sample.
    pub relative: Vec<T>,
}

impl<T: Real> OperatorResidual<T> {
    pub fn max_relative(&self) -> T {
        self.relative
            .iter()
            .fold(T::zero(), |acc, r| acc.max(*r))
    }
}

pub fn fast_dynamo_operator<T: Real>(
    traj: &MagneticTrajectory<T>,
    d: &FlowDecomposition<T>,
    fv: &FrameVorticity<T>,
    m: &MetricField<T>,
    p: &Point3<T>,
) -> Result<OperatorResidual<T>> {
    let n = traj.times.len();
    if n < 3 {
        return Err(Error::invalid(
            "operator residual needs at least 3 trajectory samples",
        ));
    }
    let mut times = Vec::with_capacity(n - 2);
    let mut relative = Vec::with_capacity(n - 2);
    for k in 1..n - 1 {
        let t = traj.times[k];
        let b = traj.states[k];
        let span = traj.times[k + 1] - traj.times[k - 1];
        let mut dbdt = [T::zero(); 3];
        for i in 0..3 {
            dbdt[i] = (traj.states[k + 1][i] - traj.states[k - 1][i]) / span;
        }
        let sigma = tensor_projection(&ProjectionOperand::Shear(d.shear), &b, m, p, t)?;
        let omega = tensor_projection(&ProjectionOperand::Vorticity(fv.omega), &b, m, p, t)?;
        let theta_part =
            tensor_projection(&ProjectionOperand::Expansion(d.expansion), &b, m, p, t)?;
        let s = sigma + theta_part + omega;

        let g = m.value(&m.chart_point(p), t);
        let mut resid = [T::zero(); 3];
        for i in 0..3 {
            resid[i] = dbdt[i] - s * b[i];
        }
        let rg = mat3::mat_vec(&g, &resid);
        let bg = mat3::mat_vec(&g, &b);
        let num = mat3::dot(&resid, &rg).max(T::zero()).sqrt();
        let den = mat3::dot(&b, &bg).max(T::zero()).sqrt();
        if !(den > T::zero()) {
            return Err(Error::invalid("operator residual undefined for zero B"));
        }
        times.push(t);
        relative.push(num / den);
    }
    Ok(OperatorResidual { times, relative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat() -> MetricField<f64> {
        MetricField::flat()
    }

    fn zero_frame() -> FrameVorticity<f64> {
        FrameVorticity {
            omega: crate::numerics::AntiTensor3::zero(),
            matched: false,
        }
    }

    #[test]
    fn no_flow_means_no_induction() {
        let v = VelocityField::uniform([0.0; 3]);
        let db = induction_rhs(
            &[0.3, -0.7, 1.1],
            &v,
            &flat(),
            &zero_frame(),
            &[0.0; 3],
            0.0,
            InductionForm::Full,
        )
        .unwrap();
        assert_eq!(db, [0.0; 3]);
    }

    #[test]
    fn identity_gradient_stretches_b_in_place() {
        let v = VelocityField::linear_gradient(mat3::identity());
        let db = induction_rhs(
            &[1.0, 0.0, 0.0],
            &v,
            &flat(),
            &zero_frame(),
            &[0.2, 0.2, 0.2],
            0.0,
            InductionForm::Full,
        )
        .unwrap();
        for (got, want) in db.iter().zip([1.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn planar_shear_tilts_b() {
        // v = (2x₂, 0, 0), B = (0,1,0) → B·∇v = (2,0,0).
        let mut a = mat3::zero();
        a[0][1] = 2.0;
        let v = VelocityField::linear_gradient(a);
        let db = induction_rhs(
            &[0.0, 1.0, 0.0],
            &v,
            &flat(),
            &zero_frame(),
            &[0.0; 3],
            0.0,
            InductionForm::Full,
        )
        .unwrap();
        for (got, want) in db.iter().zip([2.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn forms_agree_with_matched_frame() {
        let a = [[0.3, -1.2, 0.7], [2.0, 0.1, -0.4], [0.0, 0.9, -1.5]];
        let v = VelocityField::linear_gradient(a);
        let m = MetricField::round_sphere(1.0f64).unwrap();
        let p = [0.9, 1.2, 0.4];
        let b = [0.5, -0.3, 1.1];
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let fv = frame_vorticity(&d, &FrameMode::MatchedToFlow).unwrap();
        let full = induction_rhs(&b, &v, &m, &fv, &p, 0.0, InductionForm::Full).unwrap();
        let rigid =
            induction_rhs(&b, &v, &m, &fv, &p, 0.0, InductionForm::RigidRotation).unwrap();
        for i in 0..3 {
            assert!(
                (full[i] - rigid[i]).abs() < 1e-10,
                "component {i}: {} vs {}",
                full[i],
                rigid[i]
            );
        }
    }

    #[test]
    fn rigid_form_rejects_mismatched_frame() {
        let v = VelocityField::rigid_rotation([0.0, 0.0, 1.0]);
        let r = induction_rhs(
            &[1.0, 0.0, 0.0],
            &v,
            &flat(),
            &zero_frame(), // flow has Ω ≠ 0
            &[0.1, 0.2, 0.3],
            0.0,
            InductionForm::RigidRotation,
        );
        assert!(matches!(r, Err(Error::InconsistentFrame { .. })));
    }

    #[test]
    fn growth_rate_examples() {
        let m = flat();
        let p = [0.0; 3];
        // Zero flow.
        let v = VelocityField::uniform([0.0; 3]);
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let g = mode_growth_rate(&d, &[1.0, 0.0, 0.0], &m, &p, 0.0, true).unwrap();
        assert_eq!(g, 0.0);

        // Uniform expansion: γ = −θ/3 = 1 regardless of B.
        let v = VelocityField::linear_gradient(mat3::identity());
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        for b in [[1.0, 0.0, 0.0], [0.3, -0.5, 0.9]] {
            let g = mode_growth_rate(&d, &b, &m, &p, 0.0, false).unwrap();
            assert!((g - 1.0).abs() < 1e-13);
        }

        // Planar shear along the stretching eigendirection.
        let mut a = mat3::zero();
        a[0][1] = 2.0;
        let v = VelocityField::linear_gradient(a);
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        for include_vorticity in [false, true] {
            let g = mode_growth_rate(
                &d,
                &[inv_sqrt2, inv_sqrt2, 0.0],
                &m,
                &p,
                0.0,
                include_vorticity,
            )
            .unwrap();
            assert!((g - 1.0).abs() < 1e-12, "flag {include_vorticity}");
        }
    }

    #[test]
    fn growth_rate_ignores_wavevector() {
        // No spatial derivative of B appears, so the phase never enters.
        let m = flat();
        let p = [0.0; 3];
        let v = VelocityField::linear_gradient(mat3::identity());
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let b = [0.6, 0.0, 0.8];
        let base = mode_growth_rate(&d, &b, &m, &p, 0.0, true).unwrap();
        for k in 0..10 {
            let kv = (k as f64) * 0.37;
            let mode = MagneticMode::new(b, base, [kv, -kv, 2.0 * kv]).unwrap();
            let again = mode_growth_rate(&d, &mode.amplitude, &m, &p, 0.0, true).unwrap();
            assert_eq!(base, again);
        }
    }

    #[test]
    fn evolve_constant_without_flow() {
        let v = VelocityField::uniform([0.0; 3]);
        let traj = evolve_b(
            &[0.2, 0.4, -0.1],
            &v,
            &flat(),
            &FrameMode::MatchedToFlow,
            &[0.0; 3],
            (0.0, 1.0),
            1e-2,
            InductionForm::Full,
        )
        .unwrap();
        assert!(traj.gamma_hat.abs() < 1e-10);
        let last = traj.states.last().unwrap();
        assert!((last[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn uniform_expansion_grows_exponentially() {
        let v = VelocityField::linear_gradient(mat3::identity());
        let traj = evolve_b(
            &[1.0, 0.0, 0.0],
            &v,
            &flat(),
            &FrameMode::MatchedToFlow,
            &[0.0; 3],
            (0.0, 1.0),
            1e-3,
            InductionForm::Full,
        )
        .unwrap();
        assert!((traj.gamma_hat - 1.0).abs() < 1e-6, "{}", traj.gamma_hat);
        let last = traj.states.last().unwrap();
        assert!((last[0] - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn rigid_rotation_preserves_norm() {
        let v = VelocityField::rigid_rotation([0.0, 0.0, 2.0]);
        let traj = evolve_b(
            &[0.7, -0.1, 0.4],
            &v,
            &flat(),
            &FrameMode::MatchedToFlow,
            &[0.0; 3],
            (0.0, 2.0),
            1e-3,
            InductionForm::Full,
        )
        .unwrap();
        assert!(traj.gamma_hat.abs() < 1e-8, "{}", traj.gamma_hat);
    }

    #[test]
    fn operator_residual_distinguishes_rates() {
        let m = flat();
        let p = [0.0; 3];
        let v = VelocityField::linear_gradient(mat3::identity());
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let fv = frame_vorticity(&d, &FrameMode::MatchedToFlow).unwrap();

        let synth = |rate: f64| {
            let dt = 1e-3;
            let n = 101usize;
            let times: Vec<f64> = (0..n).map(|k| dt * k as f64).collect();
            let states: Vec<[f64; 3]> = times
                .iter()
                .map(|t| [(rate * t).exp(), 0.0, 0.0])
                .collect();
            let norms: Vec<f64> = states.iter().map(|s| s[0]).collect();
            MagneticTrajectory {
                times,
                states,
                norms,
                gamma_hat: rate,
            }
        };

        // Correct rate e^t: residual bounded by the O(dt²) stencil error.
        let good = fast_dynamo_operator(&synth(1.0), &d, &fv, &m, &p).unwrap();
        assert!(good.max_relative() < 1e-6, "{}", good.max_relative());

        // Wrong rate e^{2t}: d/dt exceeds the bracket by ≈ ‖B‖.
        let bad = fast_dynamo_operator(&synth(2.0), &d, &fv, &m, &p).unwrap();
        assert!((bad.max_relative() - 1.0).abs() < 1e-2, "{}", bad.max_relative());

        // Static B under zero flow: exactly zero.
        let vz = VelocityField::uniform([0.0; 3]);
        let gz = covariant_gradient(&vz, &m, &p, 0.0).unwrap();
        let dz = decompose(&gz, &m, &p, 0.0).unwrap();
        let fvz = frame_vorticity(&dz, &FrameMode::MatchedToFlow).unwrap();
        let static_traj = MagneticTrajectory {
            times: vec![0.0, 0.1, 0.2],
            states: vec![[1.0, 0.0, 0.0]; 3],
            norms: vec![1.0; 3],
            gamma_hat: 0.0,
        };
        let r = fast_dynamo_operator(&static_traj, &dz, &fvz, &m, &p).unwrap();
        assert_eq!(r.max_relative(), 0.0);
    }

    #[test]
    fn operator_needs_three_samples() {
        let m = flat();
        let p = [0.0; 3];
        let v = VelocityField::uniform([0.0; 3]);
        let grad = covariant_gradient(&v, &m, &p, 0.0).unwrap();
        let d = decompose(&grad, &m, &p, 0.0).unwrap();
        let fv = frame_vorticity(&d, &FrameMode::MatchedToFlow).unwrap();
        let short = MagneticTrajectory {
            times: vec![0.0, 0.1],
            states: vec![[1.0, 0.0, 0.0]; 2],
            norms: vec![1.0; 2],
            gamma_hat: 0.0,
        };
        assert!(fast_dynamo_operator(&short, &d, &fv, &m, &p).is_err());
    }

    #[test]
    fn mode_field_evaluation() {
        let mode = MagneticMode::new([1.0, 0.0, 0.0], 2.0, [0.0; 3]).unwrap();
        let f = MagneticField::mode(mode);
        let b = f.evaluate(&[5.0, 5.0, 5.0], 0.5);
        assert!((b[0] - 1.0f64.exp()).abs() < 1e-12);
        assert!(MagneticMode::<f64>::new([0.0; 3], 1.0, [0.0; 3]).is_err());
    }
}
