use super::params::PhysicalParams;
use super::rhs::tendencies;
use super::state::{FlowState, Tendencies};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Courant number applied to both the advective and the wave limit.
pub const CFL: f64 = 0.5;

/// Largest stable step: `min(C·min(Δx,Δz)/max|∇ψ|, C/max(N,|f|))`.
pub fn stable_dt<T: Real>(state: &FlowState<T>, params: &PhysicalParams<T>) -> T {
    let c = T::lit(CFL);
    let spec = state.grid().spec();
    let h = spec.dx().min(spec.dz());
    let speed = state.psi.grad_norm_sq().max_abs().sqrt();
    let wave = c / params.max_frequency();
    if speed > T::zero() {
        wave.min(c * h / speed)
    } else {
        wave
    }
}

fn stage<T: Real>(state: &FlowState<T>, k: &Tendencies<T>, h: T) -> Result<FlowState<T>> {
    FlowState::from_zeta(
        state.t + h,
        state.v.axpy(h, &k.dv_dt),
        state.rho.axpy(h, &k.drho_dt),
        state.zeta.axpy(h, &k.dzeta_dt),
    )
}

fn instability<T: Real>(t: T, what: &str) -> Error {
    Error::Instability {
        t: t.to_f64_lossy(),
        detail: format!("non-finite {what}"),
    }
}

/// One classical Runge–Kutta step of `(v, ρ, ζ)`; `ψ` is re-derived.
pub fn step_rk4<T: Real>(state: &FlowState<T>, dt: T, params: &PhysicalParams<T>) -> Result<FlowState<T>> {
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::InvalidStep(format!("dt must be positive, got {dt}")));
    }
    let half = dt / T::lit(2.0);
    let guard = |s: &FlowState<T>| {
        if s.is_finite() {
            Ok(())
        } else {
            Err(instability(s.t, "stage state"))
        }
    };
    let k1 = tendencies(state, params).map_err(|_| instability(state.t, "tendency"))?;
    let s2 = stage(state, &k1, half)?;
    guard(&s2)?;
    let k2 = tendencies(&s2, params).map_err(|_| instability(s2.t, "tendency"))?;
    let s3 = stage(state, &k2, half)?;
    guard(&s3)?;
    let k3 = tendencies(&s3, params).map_err(|_| instability(s3.t, "tendency"))?;
    let s4 = stage(state, &k3, dt)?;
    guard(&s4)?;
    let k4 = tendencies(&s4, params).map_err(|_| instability(s4.t, "tendency"))?;

    let w = dt / T::lit(6.0);
    let two = T::lit(2.0);
    let combine = |base: &crate::field::ScalarField<T>, a: &crate::field::ScalarField<T>, b, c, d| {
        base.axpy(w, a).axpy(w * two, b).axpy(w * two, c).axpy(w, d)
    };
    let next = FlowState::from_zeta(
        state.t + dt,
        combine(&state.v, &k1.dv_dt, &k2.dv_dt, &k3.dv_dt, &k4.dv_dt),
        combine(&state.rho, &k1.drho_dt, &k2.drho_dt, &k3.drho_dt, &k4.drho_dt),
        combine(&state.zeta, &k1.dzeta_dt, &k2.dzeta_dt, &k3.dzeta_dt, &k4.dzeta_dt),
    )
    .map_err(|e| match e {
        Error::Solvability { .. } => instability(state.t + dt, "vorticity mean"),
        other => other,
    })?;
    if next.is_finite() {
        Ok(next)
    } else {
        Err(instability(next.t, "state"))
    }
}

/// Advances `steps` steps of size `dt`, handing every `stride`-th state
/// (including the initial one) to `observe`.
pub fn integrate<T: Real>(
    initial: FlowState<T>,
    dt: T,
    steps: usize,
    stride: usize,
    params: &PhysicalParams<T>,
    mut observe: impl FnMut(&FlowState<T>) -> Result<()>,
) -> Result<FlowState<T>> {
    let stride = stride.max(1);
    let t0 = initial.t;
    let mut state = initial;
    observe(&state)?;
    for n in 1..=steps {
        state = step_rk4(&state, dt, params)?;
        // re-anchor time to avoid summation drift
        state.t = t0 + T::from_count(n) * dt;
        if n % stride == 0 {
            observe(&state)?;
        }
    }
    Ok(state)
}
