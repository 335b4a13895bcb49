use std::sync::Arc;

use super::generator::{Affine, Generator, Infinitesimal};
use crate::dynamics::{FlowState, PhysicalParams, Tendencies};
use crate::error::{Error, Result};
use crate::field::{Grid, ScalarField, Weighted};
use crate::scalar::Real;

/// Characteristics `W¹, W², W³` (for `v`, `ρ`, `ψ`).
///
/// Kept in weighted form so that `x`- and `z`-weighted terms can be
/// differentiated exactly; [`CharacteristicTriple::fields`] evaluates them.
#[derive(Clone, Debug)]
pub struct CharacteristicTriple<T: Real> {
    pub w1: Weighted<T>,
    pub w2: Weighted<T>,
    pub w3: Weighted<T>,
}

impl<T: Real> CharacteristicTriple<T> {
    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.w1.grid()
    }

    pub fn fields(&self) -> [ScalarField<T>; 3] {
        [self.w1.eval(), self.w2.eval(), self.w3.eval()]
    }
}

fn ensure_grids<T: Real>(state: &FlowState<T>, tend: &Tendencies<T>) -> Result<()> {
    if state.grid().same_as(tend.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `c + X x + Z z + V v + R ρ + P ψ` as a weighted field.
pub fn affine_field<T: Real>(a: &Affine<T>, state: &FlowState<T>) -> Weighted<T> {
    let grid = state.grid();
    let zero = T::zero();
    let mut out = Weighted::constant(grid, a.c);
    if a.x != zero {
        out = out + Weighted::x(grid).scale(a.x);
    }
    if a.z != zero {
        out = out + Weighted::z(grid).scale(a.z);
    }
    for (coef, f) in [(a.v, &state.v), (a.rho, &state.rho), (a.psi, &state.psi)] {
        if coef != zero {
            out = out + Weighted::from(f.scale(coef));
        }
    }
    out
}

/// `W^α = η^α − ξ^t u^α_t − ξ^x u^α_x − ξ^z u^α_z` for arbitrary coefficients.
pub fn characteristics_of<T: Real>(
    inf: &Infinitesimal<T>,
    state: &FlowState<T>,
    tend: &Tendencies<T>,
) -> Result<CharacteristicTriple<T>> {
    ensure_grids(state, tend)?;
    let xi_x = affine_field(&inf.xi_x, state);
    let xi_z = affine_field(&inf.xi_z, state);
    let one = |eta: &Affine<T>, u: &ScalarField<T>, u_t: &ScalarField<T>| {
        let mut w = affine_field(eta, state);
        if inf.xi_t != T::zero() {
            w = w - Weighted::from(u_t.scale(inf.xi_t));
        }
        w = w - &xi_x * &Weighted::from(u.ddx());
        w - &xi_z * &Weighted::from(u.ddz())
    };
    Ok(CharacteristicTriple {
        w1: one(&inf.eta_v, &state.v, &tend.dv_dt),
        w2: one(&inf.eta_rho, &state.rho, &tend.drho_dt),
        w3: one(&inf.eta_psi, &state.psi, &tend.dpsi_dt),
    })
}

/// Characteristics of `gen` on `state`, with the time derivatives taken from
/// `tend` (PDE tendencies or analytic ones).
pub fn characteristics<T: Real>(
    gen: &Generator<T>,
    state: &FlowState<T>,
    tend: &Tendencies<T>,
) -> Result<CharacteristicTriple<T>> {
    characteristics_of(&gen.infinitesimal(state.t), state, tend)
}

/// `C¹ = −v W¹ − (g²/N²) ρ W² − ψ_x D_x(W³) − ψ_z D_z(W³)`.
pub fn raw_density<T: Real>(
    state: &FlowState<T>,
    w: &CharacteristicTriple<T>,
    params: &PhysicalParams<T>,
) -> Result<ScalarField<T>> {
    if !state.grid().same_as(w.grid()) {
        return Err(Error::GridMismatch);
    }
    let v = Weighted::from(&state.v);
    let rho = Weighted::from(&state.rho);
    let psi_x = Weighted::from(state.psi.ddx());
    let psi_z = Weighted::from(state.psi.ddz());
    let c = -(&v * &w.w1) - (&rho * &w.w2).scale(params.g2_over_n2()) - &psi_x * &w.w3.ddx() - &psi_z * &w.w3.ddz();
    Ok(c.eval())
}

fn product<T: Real>(a: &ScalarField<T>, b: &ScalarField<T>) -> ScalarField<T> {
    a.mul_dealiased(b).expect("fields share a grid")
}

/// `v² + (g²/N²) ρ²` and `|∇ψ|²`.
fn quadratic_parts<T: Real>(
    state: &FlowState<T>,
    params: &PhysicalParams<T>,
) -> (ScalarField<T>, ScalarField<T>) {
    let wave = product(&state.v, &state.v).axpy(params.g2_over_n2(), &product(&state.rho, &state.rho));
    (wave, state.psi.grad_norm_sq())
}

fn radial_derivative<T: Real>(f: &ScalarField<T>) -> ScalarField<T> {
    &f.ddx().times_x() + &f.ddz().times_z()
}

/// `v v_t + (g²/N²) ρ ρ_t + ψ_x ψ_xt + ψ_z ψ_zt`.
fn time_bracket<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> ScalarField<T> {
    let (px, pz) = state.psi.gradient();
    let (ptx, ptz) = tend.psi_t_gradient();
    &(&product(&state.v, &tend.dv_dt) + &product(&state.rho, &tend.drho_dt).scale(params.g2_over_n2()))
        + &(&product(&px, &ptx) + &product(&pz, &ptz))
}

/// The semi-dilation density in its expanded form
///
/// ```text
/// 2(f x v − g z ρ) − |∇ψ|² + (x D_x + z D_z)(v² + (g²/N²)ρ²)
///   + (x D_x + z D_z)|∇ψ|² + t [v v_t + (g²/N²) ρ ρ_t + ψ_x ψ_xt + ψ_z ψ_zt]
/// ```
///
/// evaluated directly, without going through the characteristics.
pub fn semi_dilation_expanded_density<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<ScalarField<T>> {
    ensure_grids(state, tend)?;
    let two = T::lit(2.0);
    let (wave, grad2) = quadratic_parts(state, params);
    let linear = &state.v.times_x().scale(two * params.f) - &state.rho.times_z().scale(two * params.g);
    let out = &(&linear - &grad2) + &(&radial_derivative(&wave) + &radial_derivative(&grad2));
    Ok(out.axpy(state.t, &time_bracket(state, tend, params)))
}

/// Residuals of the two displacement identities
/// `(x D_x + z D_z) F = −2F + D_x(xF) + D_z(zF)` for `F = v² + (g²/N²)ρ²` and
/// `F = |∇ψ|²`.
pub fn displacement_identity_residuals<T: Real>(state: &FlowState<T>, params: &PhysicalParams<T>) -> [T; 2] {
    let (wave, grad2) = quadratic_parts(state, params);
    let check = |f: &ScalarField<T>| {
        let lhs = radial_derivative(f);
        let w = Weighted::from(f);
        let div = (w.times_x().ddx() + w.times_z().ddz()).eval();
        let rhs = &div - &f.scale(T::lit(2.0));
        lhs.max_abs_diff(&rhs)
    };
    [check(&wave), check(&grad2)]
}

/// The semi-dilation density after the time bracket and the two divergences
/// `D_x[x F] + D_z[z F]` have been removed from the raw density of X8.
pub fn semi_dilation_reduced_density<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<ScalarField<T>> {
    let gen = Generator::basic(super::GeneratorId::X8, *params)?;
    let raw = raw_density(state, &characteristics(&gen, state, tend)?, params)?;
    let (wave, grad2) = quadratic_parts(state, params);
    let f = Weighted::from(&wave + &grad2);
    let div = (f.times_x().ddx() + f.times_z().ddz()).eval();
    let out = &raw - &div;
    Ok(out.axpy(-state.t, &time_bracket(state, tend, params)))
}
