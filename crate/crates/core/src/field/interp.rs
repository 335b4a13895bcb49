use num_complex::Complex;

use super::grid::signed_index;
use super::scalar_field::ScalarField;
use crate::scalar::Real;

/// Trigonometric interpolant of a periodic field, evaluable with
/// derivatives at arbitrary points.
///
/// At grid nodes it reproduces the samples exactly; for band-limited data
/// it is exact everywhere. The Nyquist bins are dropped from derivatives in
/// the same way as [`ScalarField::ddx`].
#[derive(Clone, Debug)]
pub struct FourierInterpolant<T: Real> {
    nx: usize,
    nz: usize,
    origin: (T, T),
    kx: Vec<T>,
    kz: Vec<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierInterpolant<T> {
    pub fn new(field: &ScalarField<T>) -> Self {
        let grid = field.grid();
        Self {
            nx: grid.nx(),
            nz: grid.nz(),
            origin: grid.spec().origin(),
            kx: grid.kx().to_vec(),
            kz: grid.kz().to_vec(),
            coeffs: field.spectrum(),
        }
    }

    fn phases(k: &[T], shift: T) -> Vec<Complex<T>> {
        k.iter()
            .map(|&kk| {
                let a = kk * shift;
                Complex::new(a.cos(), a.sin())
            })
            .collect()
    }

    fn factor(k: T, order: u32, nyquist: bool) -> Complex<T> {
        if order == 0 {
            return Complex::new(T::one(), T::zero());
        }
        if nyquist {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::new(T::zero(), k).powu(order)
    }

    /// Evaluates `d^a/dx^a d^b/dz^b` for every `(a, b)` in `orders`.
    pub fn eval_orders(&self, x: T, z: T, orders: &[(u32, u32)]) -> Vec<T> {
        let ex = Self::phases(&self.kx, x - self.origin.0);
        let ez = Self::phases(&self.kz, z - self.origin.1);
        orders
            .iter()
            .map(|&(a, b)| {
                let mut total = Complex::new(T::zero(), T::zero());
                for (p, (&kx, &phase)) in self.kx.iter().zip(&ex).enumerate() {
                    let fx = Self::factor(kx, a, p == self.nx / 2 && self.nx.is_multiple_of(2));
                    if fx.norm_sqr() == T::zero() {
                        continue;
                    }
                    let row = &self.coeffs[p * self.nz..(p + 1) * self.nz];
                    let mut inner = Complex::new(T::zero(), T::zero());
                    for q in 0..self.nz {
                        let fz = Self::factor(self.kz[q], b, q == self.nz / 2 && self.nz.is_multiple_of(2));
                        inner += row[q] * fz * ez[q];
                    }
                    total += inner * fx * phase;
                }
                total.re
            })
            .collect()
    }

    pub fn eval(&self, x: T, z: T) -> T {
        self.eval_orders(x, z, &[(0, 0)])[0]
    }

    /// Largest signed wavenumber index carrying energy above `tol` (relative).
    pub fn bandwidth(&self, tol: T) -> (u64, u64) {
        let peak = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        let mut bw = (0u64, 0u64);
        for p in 0..self.nx {
            for q in 0..self.nz {
                if self.coeffs[p * self.nz + q].norm() > tol * peak {
                    bw.0 = bw.0.max(signed_index(p, self.nx).unsigned_abs());
                    bw.1 = bw.1.max(signed_index(q, self.nz).unsigned_abs());
                }
            }
        }
        bw
    }
}
