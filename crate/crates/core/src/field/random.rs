use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use super::grid::Grid;
use super::scalar_field::ScalarField;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Recipe for a random real field whose spectrum is confined to
/// `|kx index| <= max_mode`, `|kz index| <= max_mode`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandLimited {
    pub max_mode: usize,
    /// Target root-mean-square after generation.
    pub rms: f64,
    pub zero_mean: bool,
}

impl Default for BandLimited {
    fn default() -> Self {
        Self {
            max_mode: 8,
            rms: 1.0,
            zero_mean: true,
        }
    }
}

fn bin(s: i64, n: usize) -> usize {
    s.rem_euclid(n as i64) as usize
}

impl BandLimited {
    pub fn sample<T: Real, R: Rng + ?Sized>(&self, grid: &Arc<Grid<T>>, rng: &mut R) -> Result<ScalarField<T>> {
        let (nx, nz) = (grid.nx(), grid.nz());
        if 2 * self.max_mode >= nx.min(nz) || self.max_mode == 0 {
            return Err(Error::InvalidGrid(format!(
                "band limit {} does not fit a {nx}x{nz} grid",
                self.max_mode
            )));
        }
        let k = self.max_mode as i64;
        let zero = Complex::new(T::zero(), T::zero());
        let mut coeffs = vec![zero; nx * nz];
        for p in -k..=k {
            for q in 0..=k {
                if q == 0 && p <= 0 {
                    continue;
                }
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                let c = Complex::new(T::lit(re), T::lit(im));
                coeffs[bin(p, nx) * nz + bin(q, nz)] = c;
                coeffs[bin(-p, nx) * nz + bin(-q, nz)] = c.conj();
            }
        }
        if !self.zero_mean {
            let m: f64 = rng.gen_range(-1.0..1.0);
            coeffs[0] = Complex::new(T::lit(m), T::zero());
        }
        let field = ScalarField::from_spectrum(grid, coeffs)?;
        let rms = field.rms();
        Ok(if rms > T::zero() {
            field.scale(T::lit(self.rms) / rms)
        } else {
            field
        })
    }
}
