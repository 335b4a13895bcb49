use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coriolis parameter `f`, buoyancy frequency `n` and gravity `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams<T> {
    pub f: T,
    #[serde(rename = "N")]
    pub n: T,
    pub g: T,
}

impl<T: Real> PhysicalParams<T> {
    pub fn new(f: T, n: T, g: T) -> Result<Self> {
        let p = Self { f, n, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !self.f.is_finite() {
            problems.push(format!("f must be finite (got {})", self.f));
        }
        if !(self.n.is_finite() && self.n > T::zero()) {
            problems.push(format!("N must be positive and finite (got {})", self.n));
        }
        if !(self.g.is_finite() && self.g > T::zero()) {
            problems.push(format!("g must be positive and finite (got {})", self.g));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(problems.join("; ")))
        }
    }

    /// `N²/g`, the coefficient of `ψ_x` in the density equation.
    pub fn n2_over_g(&self) -> T {
        self.n * self.n / self.g
    }

    /// `g²/N²`, the weight of `ρ²` in the energy.
    pub fn g2_over_n2(&self) -> T {
        self.g * self.g / (self.n * self.n)
    }

    /// Fastest linear wave frequency, `max(N, |f|)`.
    pub fn max_frequency(&self) -> T {
        self.n.max(self.f.abs())
    }
}

impl Default for PhysicalParams<f64> {
    fn default() -> Self {
        Self {
            f: 0.5,
            n: 1.0,
            g: 9.81,
        }
    }
}
