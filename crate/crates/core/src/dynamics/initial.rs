use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::FlowState;
use crate::error::{Error, Result};
use crate::field::{BandLimited, Grid, ScalarField};
use crate::scalar::Real;

/// Largest sample allowed on the outer ring of a compactly supported bump,
/// relative to its amplitude.
pub const SUPPORT_EDGE_TOL: f64 = 1e-12;

/// Isotropic Gaussian bumps for `v`, `ρ` and `ψ`.
///
/// `width` is the full width at half maximum:
/// `bump(r) = exp(−4 ln 2 · r² / width²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec<T> {
    pub center: (T, T),
    pub width: T,
    pub amp_v: T,
    pub amp_rho: T,
    pub amp_psi: T,
}

impl<T: Real> GaussianSpec<T> {
    pub fn bump(&self, x: T, z: T) -> T {
        let (dx, dz) = (x - self.center.0, z - self.center.1);
        let r2 = dx * dx + dz * dz;
        (-T::lit(4.0 * std::f64::consts::LN_2) * r2 / (self.width * self.width)).exp()
    }

    /// `∫∫ bump dx dz` over the plane, `π width² / (4 ln 2)`.
    pub fn bump_integral(&self) -> T {
        T::PI() * self.width * self.width / T::lit(4.0 * std::f64::consts::LN_2)
    }

    /// Radius beyond which the bump is below [`SUPPORT_EDGE_TOL`].
    pub fn support_radius(&self) -> T {
        let ln_tol = T::lit(-SUPPORT_EDGE_TOL.ln());
        self.width * (ln_tol / T::lit(4.0 * std::f64::consts::LN_2)).sqrt()
    }
}

/// Gaussian initial condition; `ψ` is re-gauged to zero mean afterwards.
pub fn gaussian_ic<T: Real>(grid: &Arc<Grid<T>>, spec: &GaussianSpec<T>, t: T) -> Result<FlowState<T>> {
    let gs = grid.spec();
    let limit = gs.lx.min(gs.lz) / T::lit(8.0);
    if !(spec.width > T::zero() && spec.width <= limit) {
        return Err(Error::Support(format!(
            "width {} must be positive and at most min(Lx, Lz)/8 = {limit}",
            spec.width
        )));
    }
    let shape = ScalarField::from_fn(grid, |x, z| spec.bump(x, z))?;
    let edge = shape.boundary_max_abs();
    if edge > T::lit(SUPPORT_EDGE_TOL) {
        return Err(Error::Support(format!(
            "bump reaches {edge} on the domain boundary; move the centre inwards"
        )));
    }
    FlowState::from_psi(
        t,
        shape.scale(spec.amp_v),
        shape.scale(spec.amp_rho),
        shape.scale(spec.amp_psi),
    )
}

/// Band-limited random fields with prescribed r.m.s. amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub max_mode: usize,
    pub rms_v: f64,
    pub rms_rho: f64,
    pub rms_psi: f64,
    pub seed: u64,
}

/// Deterministic random state: one ChaCha8 stream seeded by `spec.seed`
/// draws `v`, then `ρ`, then `ψ`.
pub fn random_state<T: Real>(grid: &Arc<Grid<T>>, spec: &RandomSpec, t: T) -> Result<FlowState<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draw = |rms: f64, zero_mean: bool, rng: &mut ChaCha8Rng| {
        BandLimited {
            max_mode: spec.max_mode,
            rms,
            zero_mean,
        }
        .sample(grid, rng)
    };
    let v = draw(spec.rms_v, false, &mut rng)?;
    let rho = draw(spec.rms_rho, false, &mut rng)?;
    let psi = draw(spec.rms_psi, true, &mut rng)?;
    FlowState::from_psi(t, v, rho, psi)
}
