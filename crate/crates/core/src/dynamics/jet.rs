use super::params::PhysicalParams;
use crate::scalar::Real;

/// Values and first derivatives of `(v, ρ, ψ, ζ = Δψ)` at one space-time point,
/// with the second-order quantities of `ψ` the residual and fluxes need.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointJet<T> {
    pub v: T,
    pub v_t: T,
    pub v_x: T,
    pub v_z: T,
    pub rho: T,
    pub rho_t: T,
    pub rho_x: T,
    pub rho_z: T,
    pub psi: T,
    pub psi_t: T,
    pub psi_x: T,
    pub psi_z: T,
    pub zeta: T,
    pub zeta_t: T,
    pub zeta_x: T,
    pub zeta_z: T,
}

impl<T: Real> PointJet<T> {
    /// Pointwise residuals of the vorticity, velocity and density equations.
    pub fn residual(&self, p: &PhysicalParams<T>) -> [T; 3] {
        let j = |ax: T, az: T, bx: T, bz: T| ax * bz - az * bx;
        [
            self.zeta_t - p.g * self.rho_x - p.f * self.v_z - j(self.psi_x, self.psi_z, self.zeta_x, self.zeta_z),
            self.v_t + p.f * self.psi_z - j(self.psi_x, self.psi_z, self.v_x, self.v_z),
            self.rho_t + p.n2_over_g() * self.psi_x - j(self.psi_x, self.psi_z, self.rho_x, self.rho_z),
        ]
    }

    pub fn max_residual(&self, p: &PhysicalParams<T>) -> T {
        self.residual(p).iter().fold(T::zero(), |m, r| m.max(r.abs()))
    }

    pub fn is_finite(&self) -> bool {
        [
            self.v, self.v_t, self.v_x, self.v_z, self.rho, self.rho_t, self.rho_x, self.rho_z, self.psi,
            self.psi_t, self.psi_x, self.psi_z, self.zeta, self.zeta_t, self.zeta_x, self.zeta_z,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}
