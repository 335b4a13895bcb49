use super::params::PhysicalParams;
use super::state::{FlowState, Tendencies};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::scalar::Real;

/// Right-hand sides of the three evolution equations:
///
/// ```text
/// Δψ_t = g ρ_x + f v_z + J(ψ, Δψ)
/// v_t  = −f ψ_z + J(ψ, v)
/// ρ_t  = −(N²/g) ψ_x + J(ψ, ρ)
/// ```
pub fn tendencies<T: Real>(state: &FlowState<T>, params: &PhysicalParams<T>) -> Result<Tendencies<T>> {
    let FlowState { v, rho, psi, zeta, .. } = state;
    v.ensure_same_grid(rho)?;
    v.ensure_same_grid(psi)?;
    v.ensure_same_grid(zeta)?;
    for (f, what) in [(v, "v"), (rho, "rho"), (psi, "psi"), (zeta, "zeta")] {
        f.check_finite(what)?;
    }
    let (psi_x, psi_z) = psi.gradient();
    let dzeta_dt = rho.ddx().scale(params.g) + v.ddz().scale(params.f) + psi.jacobian(zeta)?;
    let dv_dt = psi.jacobian(v)? - psi_z.scale(params.f);
    let drho_dt = psi.jacobian(rho)? - psi_x.scale(params.n2_over_g());
    Tendencies::from_dzeta(dv_dt, drho_dt, dzeta_dt)
}

/// Where the time derivatives in a residual evaluation come from.
#[derive(Clone, Copy, Debug)]
pub enum ResidualMode<'a, T: Real> {
    /// Externally supplied (e.g. analytic) time derivatives.
    Oracle(&'a Tendencies<T>),
    /// Time derivatives taken from [`tendencies`]; the residual then only
    /// measures numerical self-consistency.
    SelfConsistent,
}

/// Pointwise residuals `(r1, r2, r3)` of the three equations, LHS − RHS.
#[derive(Clone, Debug)]
pub struct PdeResidual<T: Real> {
    pub vorticity: ScalarField<T>,
    pub velocity: ScalarField<T>,
    pub density: ScalarField<T>,
}

impl<T: Real> PdeResidual<T> {
    pub fn max_abs(&self) -> T {
        self.vorticity
            .max_abs()
            .max(self.velocity.max_abs())
            .max(self.density.max_abs())
    }

    /// Root-mean-square over the three components.
    pub fn rms(&self) -> T {
        let sq = |f: &ScalarField<T>| f.rms() * f.rms();
        ((sq(&self.vorticity) + sq(&self.velocity) + sq(&self.density)) / T::lit(3.0)).sqrt()
    }
}

pub fn pde_residual<T: Real>(
    state: &FlowState<T>,
    params: &PhysicalParams<T>,
    mode: ResidualMode<'_, T>,
) -> Result<PdeResidual<T>> {
    let own;
    let tend = match mode {
        ResidualMode::Oracle(t) => {
            for f in [&t.dv_dt, &t.drho_dt, &t.dzeta_dt] {
                if !f.same_grid(&state.v) {
                    return Err(Error::ModeMismatch(
                        "oracle time derivatives live on a different grid".into(),
                    ));
                }
            }
            t
        }
        ResidualMode::SelfConsistent => {
            own = tendencies(state, params)?;
            &own
        }
    };
    let FlowState { v, rho, psi, zeta, .. } = state;
    let (psi_x, psi_z) = psi.gradient();
    let vorticity = &tend.dzeta_dt - &rho.ddx().scale(params.g) - v.ddz().scale(params.f) - psi.jacobian(zeta)?;
    let velocity = &tend.dv_dt + &psi_z.scale(params.f) - psi.jacobian(v)?;
    let density = &tend.drho_dt + &psi_x.scale(params.n2_over_g()) - psi.jacobian(rho)?;
    Ok(PdeResidual {
        vorticity,
        velocity,
        density,
    })
}
