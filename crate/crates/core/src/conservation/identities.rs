use serde::{Deserialize, Serialize};

use super::laws::{density_rate, density_weighted, LawId};
use crate::dynamics::{FlowState, PhysicalParams, Tendencies};
use crate::error::{Error, Result};
use crate::field::{ScalarField, Weighted};
use crate::scalar::Real;
use crate::symmetry::semi_dilation_reduced_density;

/// The four Jacobian identities used to put the rotation law in divergence
/// form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JacobianIdentity {
    /// `v J(ψ,ρ) + ρ J(ψ,v) = D_z(vρψ_x) − D_x(vρψ_z)`
    A,
    /// `x J(ψ,ρ) − ρψ_z = D_z(xρψ_x) − D_x(xρψ_z)`
    B,
    /// `z J(ψ,v) + vψ_x = D_z(zvψ_x) − D_x(zvψ_z)`
    C,
    /// `zψ_z − xψ_x = D_z(zψ) − D_x(xψ)`
    D,
}

impl JacobianIdentity {
    pub const ALL: [JacobianIdentity; 4] = [
        JacobianIdentity::A,
        JacobianIdentity::B,
        JacobianIdentity::C,
        JacobianIdentity::D,
    ];

    /// Identity by number, 1 to 4.
    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            1..=4 => Ok(Self::ALL[which as usize - 1]),
            _ => Err(Error::InvalidParams(format!("Jacobian identity index must be 1..4 (got {which})"))),
        }
    }
}

/// The fields the identities act on. They need not solve anything.
#[derive(Clone, Debug)]
pub struct IdentityFields<T: Real> {
    pub v: ScalarField<T>,
    pub rho: ScalarField<T>,
    pub psi: ScalarField<T>,
}

impl<T: Real> From<&FlowState<T>> for IdentityFields<T> {
    fn from(s: &FlowState<T>) -> Self {
        Self {
            v: s.v.clone(),
            rho: s.rho.clone(),
            psi: s.psi.clone(),
        }
    }
}

/// Both sides of one identity, in weighted form.
pub fn jacobian_identity_sides<T: Real>(
    which: JacobianIdentity,
    fields: &IdentityFields<T>,
) -> Result<(Weighted<T>, Weighted<T>)> {
    fields.v.ensure_same_grid(&fields.rho)?;
    fields.v.ensure_same_grid(&fields.psi)?;
    let grid = fields.v.grid();
    let v = Weighted::from(&fields.v);
    let rho = Weighted::from(&fields.rho);
    let psi = Weighted::from(&fields.psi);
    let (x, z) = (Weighted::x(grid), Weighted::z(grid));
    let (px, pz) = (psi.ddx(), psi.ddz());
    let j_rho = Weighted::from(fields.psi.jacobian(&fields.rho)?);
    let j_v = Weighted::from(fields.psi.jacobian(&fields.v)?);
    // D_z(a ψ_x) − D_x(a ψ_z)
    let curl = |a: &Weighted<T>| (a * &px).ddz() - (a * &pz).ddx();
    Ok(match which {
        JacobianIdentity::A => (&v * &j_rho + &rho * &j_v, curl(&(&v * &rho))),
        JacobianIdentity::B => (&x * &j_rho - &rho * &pz, curl(&(&x * &rho))),
        JacobianIdentity::C => (&z * &j_v + &v * &px, curl(&(&z * &v))),
        JacobianIdentity::D => (&z * &pz - &x * &px, (&z * &psi).ddz() - (&x * &psi).ddx()),
    })
}

/// `max |LHS − RHS|` of one identity on the grid.
pub fn jacobian_identity_check<T: Real>(which: JacobianIdentity, fields: &IdentityFields<T>) -> Result<T> {
    let (lhs, rhs) = jacobian_identity_sides(which, fields)?;
    Ok((lhs - rhs).eval().max_abs())
}

/// Compares `D_t Q` from the product rule and the tendencies with the
/// expression obtained by substituting the equations of motion,
///
/// ```text
/// v[J(ψ,ρ) − (N²/g)ψ_x] + ρ[J(ψ,v) − fψ_z] + fx[J(ψ,ρ) − (N²/g)ψ_x] − (N²/g)z[J(ψ,v) − fψ_z]
/// ```
pub fn rotation_density_assembly_check<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<T> {
    let lhs = density_rate(LawId::Rotation, state, tend, params)?;
    let grid = state.grid();
    let n2g = params.n2_over_g();
    let (px, pz) = state.psi.gradient();
    let rho_eq = Weighted::from(&state.psi.jacobian(&state.rho)? - &px.scale(n2g));
    let v_eq = Weighted::from(&state.psi.jacobian(&state.v)? - &pz.scale(params.f));
    let v = Weighted::from(&state.v);
    let rho = Weighted::from(&state.rho);
    let x = Weighted::x(grid).scale(params.f);
    let z = Weighted::z(grid).scale(n2g);
    let rhs = &v * &rho_eq + &rho * &v_eq + &x * &rho_eq - &z * &v_eq;
    Ok((lhs - rhs).eval().max_abs())
}

/// Compares the reduced semi-dilation density (raw X8 density with the time
/// bracket and the displacement divergences removed) with `2P − 2E`.
pub fn semi_dilation_reduction_check<T: Real>(
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<T> {
    let reduced = semi_dilation_reduced_density(state, tend, params)?;
    let two = T::lit(2.0);
    let expected = (density_weighted(LawId::SemiDilation, state, params).scale(two)
        - density_weighted(LawId::Energy, state, params).scale(two))
    .eval();
    Ok(reduced.max_abs_diff(&expected))
}
