//! Fixed-step classical RK4. No adaptivity on purpose: every system in this
//! toolkit is smooth over short horizons and deterministic sampling matters
//! more than step control.

use crate::error::{Error, Result};
use crate::real::Real;

/// Single classical 4th-order Runge-Kutta step.
///
/// `rhs(t, y, dy)` writes dy/dt into `dy`. Any non-finite component in the
/// result is treated as a blowup at `t + dt`.
pub fn ode_step<T, F>(state: &[T], mut rhs: F, t: T, dt: T) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
{
    if !(dt > T::zero()) {
        return Err(Error::invalid(format!(
            "ode_step requires dt > 0, got {}",
            dt.as_f64()
        )));
    }
    let n = state.len();
    let mut k1 = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];
    let half = T::of(0.5);

    rhs(t, state, &mut k1);
    for i in 0..n {
        tmp[i] = state[i] + half * dt * k1[i];
    }
    rhs(t + half * dt, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = state[i] + half * dt * k2[i];
    }
    rhs(t + half * dt, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = state[i] + dt * k3[i];
    }
    rhs(t + dt, &tmp, &mut k4);

    let sixth = T::of(1.0 / 6.0);
    let two = T::of(2.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = state[i] + dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        if !v.is_finite() {
            return Err(Error::NumericalBlowup {
                time: (t + dt).as_f64(),
            });
        }
        out.push(v);
    }
    Ok(out)
}

/// Integrates from `t0` to `t1` with fixed step `dt` (the last step is
/// shortened to land on `t1` exactly). `observe(t, state)` fires at `t0`
/// and after every accepted step.
pub fn integrate<T, F, O>(
    state0: &[T],
    mut rhs: F,
    t0: T,
    t1: T,
    dt: T,
    mut observe: O,
) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
    O: FnMut(T, &[T]),
{
    if !(dt > T::zero()) {
        return Err(Error::invalid(format!(
            "integrate requires dt > 0, got {}",
            dt.as_f64()
        )));
    }
    if t1 < t0 {
        return Err(Error::invalid("integrate requires t1 >= t0"));
    }
    let mut state = state0.to_vec();
    let mut t = t0;
    observe(t, &state);
    // Relative slack so a span that is an exact multiple of dt does not
    // produce a spurious tiny final step.
    let slack = T::of(1e-12) * dt.max(T::one());
    while t < t1 - slack {
        let step = dt.min(t1 - t);
        state = ode_step(&state, &mut rhs, t, step)?;
        t = t + step;
        observe(t, &state);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_single_step() {
        let out = ode_step(&[1.0f64], |_t, y, dy| dy[0] = -y[0], 0.0, 0.1).unwrap();
        assert!((out[0] - 0.904837).abs() < 1e-6);
    }

    #[test]
    fn zero_dynamics() {
        let out = ode_step(&[3.0f64, -1.0], |_t, _y, dy| dy.fill(0.0), 0.0, 0.7).unwrap();
        assert_eq!(out, vec![3.0, -1.0]);
    }

    #[test]
    fn constant_dynamics_exact() {
        let out = ode_step(&[1.0f64], |_t, _y, dy| dy[0] = 1.0, 0.0, 0.5).unwrap();
        assert_eq!(out[0], 1.5);
    }

    #[test]
    fn rejects_non_positive_dt() {
        assert!(ode_step(&[1.0f64], |_t, _y, dy| dy[0] = 0.0, 0.0, 0.0).is_err());
        assert!(ode_step(&[1.0f64], |_t, _y, dy| dy[0] = 0.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn overflow_reports_blowup_time() {
        let r = ode_step(&[1e200], |_t, y, dy| dy[0] = y[0] * y[0], 0.0, 1.0);
        match r {
            Err(crate::error::Error::NumericalBlowup { time }) => assert_eq!(time, 1.0),
            other => panic!("expected blowup, got {other:?}"),
        }
    }

    #[test]
    fn decay_over_unit_interval_hits_inverse_e() {
        let out = integrate(
            &[1.0f64],
            |_t, y, dy| dy[0] = -y[0],
            0.0,
            1.0,
            1e-3,
            |_t, _s| {},
        )
        .unwrap();
        assert!((out[0] - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn fourth_order_convergence() {
        let run = |dt: f64| {
            integrate(&[1.0f64], |_t, y, dy| dy[0] = y[0], 0.0, 1.0, dt, |_t, _s| {}).unwrap()[0]
        };
        let e = std::f64::consts::E;
        let err_coarse = (run(0.1) - e).abs();
        let err_fine = (run(0.05) - e).abs();
        // Halving dt should cut the error by ~2^4.
        assert!(err_coarse / err_fine > 12.0);
    }

    #[test]
    fn observer_sees_endpoints() {
        let mut times = Vec::new();
        integrate(
            &[0.0f64],
            |_t, _y, dy| dy[0] = 1.0,
            0.0,
            0.35,
            0.1,
            |t, _s| times.push(t),
        )
        .unwrap();
        assert_eq!(times.len(), 5); // t0 plus four steps (last shortened)
        assert!((times.last().unwrap() - 0.35).abs() < 1e-15);
    }
}
