//! Closed-form travelling-phase solution with phase `λ = kx + mz`:
//!
//! ```text
//! ψ = A(λ) cos ωt + B(λ) sin ωt
//! v = (f m/ω) [B'(λ) cos ωt − A'(λ) sin ωt]
//! ρ = (k N²/(g ω)) [B'(λ) cos ωt − A'(λ) sin ωt]
//! ```
//!
//! The Jacobian nonlinearity vanishes identically because every field is a
//! function of `λ` and `t` only; the linear part balances exactly when
//! `ω² = (N²k² + f²m²)/(k² + m²)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::jet::PointJet;
use super::params::PhysicalParams;
use super::state::{FlowState, Tendencies};
use crate::error::{Error, Result};
use crate::field::{Grid, ScalarField};
use crate::scalar::Real;

/// One harmonic `s·sin(jλ) + c·cos(jλ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic<T> {
    pub j: u32,
    pub sin: T,
    pub cos: T,
}

/// Finite trigonometric polynomial in the phase, closed under differentiation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrigProfile<T> {
    pub harmonics: Vec<Harmonic<T>>,
}

impl<T: Real> TrigProfile<T> {
    pub fn zero() -> Self {
        Self { harmonics: Vec::new() }
    }

    pub fn sin(amplitude: T) -> Self {
        Self {
            harmonics: vec![Harmonic {
                j: 1,
                sin: amplitude,
                cos: T::zero(),
            }],
        }
    }

    pub fn cos(amplitude: T) -> Self {
        Self {
            harmonics: vec![Harmonic {
                j: 1,
                sin: T::zero(),
                cos: amplitude,
            }],
        }
    }

    /// `d^order/dλ^order` at `lambda`.
    pub fn derivative(&self, lambda: T, order: u32) -> T {
        let mut total = T::zero();
        for h in &self.harmonics {
            let jf = T::from_count(h.j as usize);
            let arg = jf * lambda;
            let (s, c) = (arg.sin(), arg.cos());
            // d^n sin = sin(x + nπ/2), d^n cos = cos(x + nπ/2)
            let (ds, dc) = match order % 4 {
                0 => (s, c),
                1 => (c, -s),
                2 => (-s, -c),
                _ => (-c, s),
            };
            total += jf.powi(order as i32) * (h.sin * ds + h.cos * dc);
        }
        total
    }

    pub fn value(&self, lambda: T) -> T {
        self.derivative(lambda, 0)
    }

    pub fn max_harmonic(&self) -> u32 {
        self.harmonics.iter().map(|h| h.j).max().unwrap_or(0)
    }
}

/// Parameters of the travelling-phase solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSolutionSpec<T> {
    pub k: T,
    pub m: T,
    pub omega: T,
    pub profile_a: TrigProfile<T>,
    pub profile_b: TrigProfile<T>,
}

/// `ω = sqrt((N²k² + f²m²)/(k² + m²))`, the positive branch.
pub fn dispersion_omega<T: Real>(k: T, m: T, params: &PhysicalParams<T>) -> T {
    let (n2, f2) = (params.n * params.n, params.f * params.f);
    ((n2 * k * k + f2 * m * m) / (k * k + m * m)).sqrt()
}

impl<T: Real> InvariantSolutionSpec<T> {
    /// Frequency from the dispersion relation.
    pub fn with_dispersion(
        k: T,
        m: T,
        profile_a: TrigProfile<T>,
        profile_b: TrigProfile<T>,
        params: &PhysicalParams<T>,
    ) -> Result<Self> {
        if k == T::zero() && m == T::zero() {
            return Err(Error::InvalidParams("wavevector (k, m) must be non-zero".into()));
        }
        let omega = dispersion_omega(k, m, params);
        Self::with_frequency(k, m, omega, profile_a, profile_b)
    }

    /// Arbitrary positive frequency; used to probe the dispersion relation.
    pub fn with_frequency(k: T, m: T, omega: T, profile_a: TrigProfile<T>, profile_b: TrigProfile<T>) -> Result<Self> {
        if k == T::zero() && m == T::zero() {
            return Err(Error::InvalidParams("wavevector (k, m) must be non-zero".into()));
        }
        if !(omega.is_finite() && omega > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "omega must be positive (got {omega}); a vanishing frequency needs f = N = 0 or a degenerate wavevector"
            )));
        }
        Ok(Self {
            k,
            m,
            omega,
            profile_a,
            profile_b,
        })
    }

    /// Relative gap between `ω²` and the dispersion relation.
    pub fn dispersion_mismatch(&self, params: &PhysicalParams<T>) -> T {
        let w = dispersion_omega(self.k, self.m, params);
        (self.omega * self.omega - w * w).abs() / (w * w).max(T::epsilon())
    }

    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }

    pub fn phase(&self, x: T, z: T) -> T {
        self.k * x + self.m * z
    }

    /// Fails unless `k·Lx/2π` and `m·Lz/2π` are integers.
    pub fn check_periodic(&self, grid: &Grid<T>) -> Result<()> {
        let spec = grid.spec();
        for (name, k, l) in [("k", self.k, spec.lx), ("m", self.m, spec.lz)] {
            let cycles = k * l / T::TAU();
            if (cycles - cycles.round()).abs() > T::lit(1e-9) * T::one().max(cycles.abs()) {
                return Err(Error::Periodicity(format!(
                    "{name}·L/2π = {cycles} is not an integer"
                )));
            }
        }
        Ok(())
    }

    /// Closed-form values and derivatives at `(t, x, z)`.
    pub fn jet(&self, params: &PhysicalParams<T>, t: T, x: T, z: T) -> PointJet<T> {
        let (k, m, w) = (self.k, self.m, self.omega);
        let lam = self.phase(x, z);
        let (c, s) = ((w * t).cos(), (w * t).sin());
        let a = |n| self.profile_a.derivative(lam, n);
        let b = |n| self.profile_b.derivative(lam, n);
        // "in phase" and "quadrature" combinations of the n-th derivatives
        let ip = |n| a(n) * c + b(n) * s;
        let qd = |n| b(n) * c - a(n) * s;
        let k2 = k * k + m * m;
        let vc = params.f * m / w;
        let rc = k * params.n2_over_g() / w;
        PointJet {
            psi: ip(0),
            psi_t: w * qd(0),
            psi_x: k * ip(1),
            psi_z: m * ip(1),
            zeta: k2 * ip(2),
            zeta_t: k2 * w * qd(2),
            zeta_x: k * k2 * ip(3),
            zeta_z: m * k2 * ip(3),
            v: vc * qd(1),
            v_t: -vc * w * ip(1),
            v_x: vc * k * qd(2),
            v_z: vc * m * qd(2),
            rho: rc * qd(1),
            rho_t: -rc * w * ip(1),
            rho_x: rc * k * qd(2),
            rho_z: rc * m * qd(2),
        }
    }

    fn sample(&self, grid: &Arc<Grid<T>>, f: impl Fn(T, T) -> T) -> Result<ScalarField<T>> {
        ScalarField::from_fn(grid, f)
    }

    /// Time derivatives obtained by differentiating the closed form in `t`.
    pub fn analytic_tendencies(&self, params: &PhysicalParams<T>, grid: &Arc<Grid<T>>, t: T) -> Result<Tendencies<T>> {
        self.check_periodic(grid)?;
        let jet = |x, z| self.jet(params, t, x, z);
        Ok(Tendencies {
            dv_dt: self.sample(grid, |x, z| jet(x, z).v_t)?,
            drho_dt: self.sample(grid, |x, z| jet(x, z).rho_t)?,
            dzeta_dt: self.sample(grid, |x, z| jet(x, z).zeta_t)?,
            dpsi_dt: self.sample(grid, |x, z| jet(x, z).psi_t)?,
        })
    }

    /// Closed-form semi-dilation density
    /// `(f²mx − N²kz)/ω · [B' cos ωt − A' sin ωt] − (k²+m²)/2 · [A' cos ωt + B' sin ωt]²`.
    pub fn semi_dilation_density(&self, params: &PhysicalParams<T>, t: T, x: T, z: T) -> T {
        let lam = self.phase(x, z);
        let (c, s) = ((self.omega * t).cos(), (self.omega * t).sin());
        let (a1, b1) = (self.profile_a.derivative(lam, 1), self.profile_b.derivative(lam, 1));
        let weight = (params.f * params.f * self.m * x - params.n * params.n * self.k * z) / self.omega;
        let k2 = self.k * self.k + self.m * self.m;
        let ip = a1 * c + b1 * s;
        weight * (b1 * c - a1 * s) - k2 / T::lit(2.0) * ip * ip
    }
}

/// Samples the closed-form solution on `grid`; `ζ` is computed spectrally.
pub fn invariant_solution<T: Real>(
    spec: &InvariantSolutionSpec<T>,
    params: &PhysicalParams<T>,
    grid: &Arc<Grid<T>>,
    t: T,
) -> Result<FlowState<T>> {
    spec.check_periodic(grid)?;
    let jet = |x, z| spec.jet(params, t, x, z);
    let v = ScalarField::from_fn(grid, |x, z| jet(x, z).v)?;
    let rho = ScalarField::from_fn(grid, |x, z| jet(x, z).rho)?;
    let psi = ScalarField::from_fn(grid, |x, z| jet(x, z).psi)?;
    FlowState::from_psi(t, v, rho, psi)
}
