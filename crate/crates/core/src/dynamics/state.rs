use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Grid, ScalarField};
use crate::scalar::Real;

/// Transverse velocity `v`, density perturbation `rho`, streamfunction `psi`
/// and the cached vorticity `zeta = Δψ` at time `t`.
///
/// `psi` is kept in the zero-mean gauge.
#[derive(Clone, Debug)]
pub struct FlowState<T: Real> {
    pub t: T,
    pub v: ScalarField<T>,
    pub rho: ScalarField<T>,
    pub psi: ScalarField<T>,
    pub zeta: ScalarField<T>,
}

fn same_grids<T: Real>(fields: &[&ScalarField<T>]) -> Result<()> {
    for w in fields.windows(2) {
        w[0].ensure_same_grid(w[1])?;
    }
    Ok(())
}

impl<T: Real> FlowState<T> {
    /// Builds a state from a streamfunction, re-gauging it to zero mean.
    pub fn from_psi(t: T, v: ScalarField<T>, rho: ScalarField<T>, psi: ScalarField<T>) -> Result<Self> {
        same_grids(&[&v, &rho, &psi])?;
        let mean = psi.mean();
        let psi = psi.map(|p| p - mean);
        let zeta = psi.laplacian();
        Ok(Self { t, v, rho, psi, zeta })
    }

    /// Builds a state from the prognostic vorticity.
    pub fn from_zeta(t: T, v: ScalarField<T>, rho: ScalarField<T>, zeta: ScalarField<T>) -> Result<Self> {
        same_grids(&[&v, &rho, &zeta])?;
        let psi = zeta.invert_laplacian()?;
        Ok(Self { t, v, rho, psi, zeta })
    }

    pub fn zeros(grid: &Arc<Grid<T>>, t: T) -> Self {
        let z = ScalarField::zeros(grid);
        Self {
            t,
            v: z.clone(),
            rho: z.clone(),
            psi: z.clone(),
            zeta: z,
        }
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.v.grid()
    }

    /// Checks the documented invariants.
    pub fn validate(&self) -> Result<()> {
        same_grids(&[&self.v, &self.rho, &self.psi, &self.zeta])?;
        for (f, what) in [
            (&self.v, "v"),
            (&self.rho, "rho"),
            (&self.psi, "psi"),
            (&self.zeta, "zeta"),
        ] {
            f.check_finite(what)?;
        }
        let scale = T::one().max(self.zeta.max_abs());
        let gap = self.psi.laplacian().max_abs_diff(&self.zeta);
        if gap > T::lit(1e-10) * scale {
            return Err(Error::InconsistentTrajectory(format!(
                "zeta differs from laplacian(psi) by {gap}"
            )));
        }
        let pscale = T::one().max(self.psi.max_abs());
        if self.psi.mean().abs() > T::lit(1e-12) * pscale {
            return Err(Error::InconsistentTrajectory("psi is not zero-mean".into()));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.rho.is_finite() && self.psi.is_finite() && self.zeta.is_finite()
    }
}

/// Time derivatives of the state: `v_t`, `ρ_t`, `Δψ_t` and `ψ_t`.
#[derive(Clone, Debug)]
pub struct Tendencies<T: Real> {
    pub dv_dt: ScalarField<T>,
    pub drho_dt: ScalarField<T>,
    pub dzeta_dt: ScalarField<T>,
    pub dpsi_dt: ScalarField<T>,
}

impl<T: Real> Tendencies<T> {
    /// Completes the set from `Δψ_t` by inverting the Laplacian.
    pub fn from_dzeta(dv_dt: ScalarField<T>, drho_dt: ScalarField<T>, dzeta_dt: ScalarField<T>) -> Result<Self> {
        same_grids(&[&dv_dt, &drho_dt, &dzeta_dt])?;
        let dpsi_dt = dzeta_dt.invert_laplacian()?;
        Ok(Self {
            dv_dt,
            drho_dt,
            dzeta_dt,
            dpsi_dt,
        })
    }

    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        let z = ScalarField::zeros(grid);
        Self {
            dv_dt: z.clone(),
            drho_dt: z.clone(),
            dzeta_dt: z.clone(),
            dpsi_dt: z,
        }
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.dv_dt.grid()
    }

    /// `(ψ_xt, ψ_zt)`.
    pub fn psi_t_gradient(&self) -> (ScalarField<T>, ScalarField<T>) {
        self.dpsi_dt.gradient()
    }

    pub fn max_abs(&self) -> T {
        self.dv_dt
            .max_abs()
            .max(self.drho_dt.max_abs())
            .max(self.dzeta_dt.max_abs())
            .max(self.dpsi_dt.max_abs())
    }
}
