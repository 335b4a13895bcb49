use serde::Serialize;

use super::characteristics::characteristics_of;
use super::generator::{Affine, Generator, GeneratorId, Infinitesimal};
use super::sampler::SolutionSampler;
use super::transform::finite_transform;
use crate::dynamics::{tendencies, FlowState, PhysicalParams, Tendencies};
use crate::error::{Error, Result};
use crate::field::{GridSpec, ScalarField, Weighted};
use crate::scalar::Real;

/// Pointwise PDE residual of a transformed solution.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub generator: GeneratorId,
    pub eps: f64,
    pub points: usize,
    pub max_residual: f64,
    pub rms_residual: f64,
}

/// Applies `exp(eps X)` to `sol` and evaluates the three PDE residuals of the
/// image at every node of `points` and every time in `times`.
///
/// Time derivatives of the image come from the chain rule applied to the
/// source jets, so no differencing is involved.
pub fn solution_map_check<T: Real, S: SolutionSampler<T>>(
    gen: &Generator<T>,
    eps: T,
    sol: S,
    points: &GridSpec<T>,
    times: &[T],
) -> Result<SymmetryReport> {
    let image = finite_transform(gen, eps, sol)?;
    let params = gen.params();
    let mut max = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut count = 0usize;
    for &t in times {
        for i in 0..points.nx {
            for j in 0..points.nz {
                let jet = image.jet(t, points.x(i), points.z(j))?;
                for r in jet.residual(params) {
                    let r = r.to_f64_lossy();
                    if !r.is_finite() {
                        return Err(Error::NonFinite {
                            what: "transformed residual",
                            index: count,
                        });
                    }
                    max = max.max(r.abs());
                    sum_sq += r * r;
                }
                count += 1;
            }
        }
    }
    Ok(SymmetryReport {
        generator: gen.id(),
        eps: eps.to_f64_lossy(),
        points: count,
        max_residual: max,
        rms_residual: if count == 0 { 0.0 } else { (sum_sq / (3 * count) as f64).sqrt() },
    })
}

/// Residuals of `u + εW` for several `ε` and the fitted power of `ε`.
#[derive(Clone, Debug, Serialize)]
pub struct FirstOrderReport {
    pub generator: GeneratorId,
    pub eps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log ε`.
    pub fitted_order: f64,
}

/// `∂_t` of the tendencies, from the PDE linearised about `state`.
pub fn second_tendencies<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<Tendencies<T>> {
    let j = |a: &ScalarField<T>, b: &ScalarField<T>| a.jacobian(b);
    let (psi, psi_t) = (&state.psi, &tend.dpsi_dt);
    let v_tt = &(&j(psi_t, &state.v)? + &j(psi, &tend.dv_dt)?) - &psi_t.ddz().scale(params.f);
    let rho_tt = &(&j(psi_t, &state.rho)? + &j(psi, &tend.drho_dt)?) - &psi_t.ddx().scale(params.n2_over_g());
    let zeta_tt = &(&j(psi_t, &state.zeta)? + &j(psi, &tend.dzeta_dt)?)
        + &(&tend.drho_dt.ddx().scale(params.g) + &tend.dv_dt.ddz().scale(params.f));
    Tendencies::from_dzeta(v_tt, rho_tt, zeta_tt)
}

fn state_part<T: Real>(a: &Affine<T>) -> Affine<T> {
    Affine {
        c: T::zero(),
        x: T::zero(),
        z: T::zero(),
        ..*a
    }
}

/// Fields `u` (or `u_t`) treated as a state, for applying the linear part of
/// the coefficients.
fn as_state<T: Real>(t: T, v: &ScalarField<T>, rho: &ScalarField<T>, psi: &ScalarField<T>) -> FlowState<T> {
    FlowState {
        t,
        v: v.clone(),
        rho: rho.clone(),
        zeta: psi.laplacian(),
        psi: psi.clone(),
    }
}

/// Time derivatives `∂_t W^α` of the characteristics along the solution.
fn characteristic_rates<T: Real>(
    gen: &Generator<T>,
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<[Weighted<T>; 3]> {
    let inf = gen.infinitesimal(state.t);
    let dot = gen.infinitesimal_derivative(state.t, 1);
    let rates = as_state(state.t, &tend.dv_dt, &tend.drho_dt, &tend.dpsi_dt);
    let tt = if inf.xi_t != T::zero() {
        second_tendencies(state, tend, params)?
    } else {
        Tendencies::zeros(state.grid())
    };
    // explicitly time-dependent coefficients acting on u
    let explicit = characteristics_of(&dot, state, tend)?;
    // coefficients frozen, u replaced by u_t
    let frozen = Infinitesimal {
        eta_v: state_part(&inf.eta_v),
        eta_rho: state_part(&inf.eta_rho),
        eta_psi: state_part(&inf.eta_psi),
        ..inf
    };
    let implicit = characteristics_of(&frozen, &rates, &tt)?;
    Ok([
        explicit.w1 + implicit.w1,
        explicit.w2 + implicit.w2,
        explicit.w3 + implicit.w3,
    ])
}

fn perturbed_residual<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    w: &[Weighted<T>; 3],
    w_t: &[Weighted<T>; 3],
    eps: T,
    params: &PhysicalParams<T>,
) -> T {
    let add = |u: &ScalarField<T>, du: &Weighted<T>| Weighted::from(u) + du.scale(eps);
    let v = add(&state.v, &w[0]);
    let rho = add(&state.rho, &w[1]);
    let psi = add(&state.psi, &w[2]);
    let v_t = add(&tend.dv_dt, &w_t[0]);
    let rho_t = add(&tend.drho_dt, &w_t[1]);
    let psi_t = add(&tend.dpsi_dt, &w_t[2]);
    let zeta = psi.laplacian();
    let r1 = psi_t.laplacian() - rho.ddx().scale(params.g) - v.ddz().scale(params.f) - psi.jacobian(&zeta);
    let r2 = v_t + psi.ddz().scale(params.f) - psi.jacobian(&v);
    let r3 = rho_t + psi.ddx().scale(params.n2_over_g()) - psi.jacobian(&rho);
    [r1, r2, r3].iter().fold(T::zero(), |m, r| m.max(r.eval().max_abs()))
}

/// Residual of the first-order image `u + εW` of a solution for each `ε`.
///
/// On a solution the `O(ε)` part of the residual is the linearised symmetry
/// condition and vanishes, so the residual should scale like `ε²`.
pub fn first_order_check<T: Real>(
    gen: &Generator<T>,
    eps: &[T],
    state: &FlowState<T>,
    params: &PhysicalParams<T>,
) -> Result<FirstOrderReport> {
    if eps.len() < 2 || eps.iter().any(|e| !(e.is_finite() && *e > T::zero())) {
        return Err(Error::InvalidGenerator(
            "first-order check needs at least two positive step sizes".into(),
        ));
    }
    let tend = tendencies(state, params)?;
    let w = characteristics_of(&gen.infinitesimal(state.t), state, &tend)?;
    let w = [w.w1, w.w2, w.w3];
    let w_t = characteristic_rates(gen, state, &tend, params)?;
    let residuals: Vec<f64> = eps
        .iter()
        .map(|&e| perturbed_residual(state, &tend, &w, &w_t, e, params).to_f64_lossy())
        .collect();
    let xs: Vec<f64> = eps.iter().map(|e| e.to_f64_lossy().ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(FirstOrderReport {
        generator: gen.id(),
        eps: eps.iter().map(|e| e.to_f64_lossy()).collect(),
        residuals,
        fitted_order: slope(&xs, &ys),
    })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
