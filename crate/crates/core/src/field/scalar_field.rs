use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex;

use super::grid::{Grid, GridSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A real field sampled on a periodic grid, row-major over `(x, z)`.
///
/// Every constructor rejects non-finite samples. The arithmetic operators
/// panic when the operands live on different grids; the named spectral
/// operations report [`Error::GridMismatch`] instead.
#[derive(Clone)]
pub struct ScalarField<T: Real> {
    grid: Arc<Grid<T>>,
    values: Vec<T>,
}

impl<T: Real> std::fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("grid", self.grid.spec())
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

fn check_finite<T: Real>(values: &[T], what: &'static str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}

impl<T: Real> ScalarField<T> {
    pub fn from_values(grid: &Arc<Grid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        check_finite(&values, "field samples")?;
        Ok(Self {
            grid: Arc::clone(grid),
            values,
        })
    }

    /// Samples `f(x, z)` at every grid point.
    pub fn from_fn(grid: &Arc<Grid<T>>, f: impl Fn(T, T) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for &x in grid.xs() {
            for &z in grid.zs() {
                values.push(f(x, z));
            }
        }
        Self::from_values(grid, values)
    }

    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        Self::constant(grid, T::zero())
    }

    pub fn constant(grid: &Arc<Grid<T>>, c: T) -> Self {
        assert!(c.is_finite(), "constant field value must be finite");
        Self::raw(grid, vec![c; grid.len()])
    }

    /// The coordinate `x` as a field (not periodic; never differentiate it spectrally).
    pub fn coord_x(grid: &Arc<Grid<T>>) -> Self {
        let nz = grid.nz();
        Self::raw(grid, (0..grid.len()).map(|n| grid.xs()[n / nz]).collect())
    }

    /// The coordinate `z` as a field (not periodic; never differentiate it spectrally).
    pub fn coord_z(grid: &Arc<Grid<T>>) -> Self {
        let nz = grid.nz();
        Self::raw(grid, (0..grid.len()).map(|n| grid.zs()[n % nz]).collect())
    }

    pub(crate) fn raw(grid: &Arc<Grid<T>>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    pub fn spec(&self) -> &GridSpec<T> {
        self.grid.spec()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid.same_as(&other.grid)
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Re-validates finiteness, e.g. after a long chain of arithmetic.
    pub fn check_finite(&self, what: &'static str) -> Result<()> {
        check_finite(&self.values, what)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Root-mean-square over the samples.
    pub fn rms(&self) -> T {
        let s: T = self.values.iter().map(|&v| v * v).sum();
        (s / T::from_count(self.values.len())).sqrt()
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_count(self.values.len())
    }

    /// Largest absolute difference; panics on grid mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert!(self.same_grid(other), "grid mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Largest value on the outermost ring of samples.
    pub fn boundary_max_abs(&self) -> T {
        let (nx, nz) = (self.grid.nx(), self.grid.nz());
        let mut m = T::zero();
        for i in 0..nx {
            m = m.max(self.at(i, 0).abs()).max(self.at(i, nz - 1).abs());
        }
        for j in 0..nz {
            m = m.max(self.at(0, j).abs()).max(self.at(nx - 1, j).abs());
        }
        m
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::raw(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination; errors on grid mismatch.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Ok(Self::raw(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    /// Multiplies by the coordinate `x` pointwise.
    pub fn times_x(&self) -> Self {
        let nz = self.grid.nz();
        let xs = self.grid.xs();
        Self::raw(
            &self.grid,
            self.values.iter().enumerate().map(|(n, &v)| xs[n / nz] * v).collect(),
        )
    }

    /// Multiplies by the coordinate `z` pointwise.
    pub fn times_z(&self) -> Self {
        let nz = self.grid.nz();
        let zs = self.grid.zs();
        Self::raw(
            &self.grid,
            self.values.iter().enumerate().map(|(n, &v)| zs[n % nz] * v).collect(),
        )
    }

    // ---- spectral operations -------------------------------------------------

    fn spectral_map(&self, f: impl Fn(usize, usize, Complex<T>) -> Complex<T>) -> Self {
        let grid = &self.grid;
        let nz = grid.nz();
        let mut hat = grid.forward(&self.values);
        for (n, c) in hat.iter_mut().enumerate() {
            *c = f(n / nz, n % nz, *c);
        }
        Self::raw(grid, grid.inverse(hat))
    }

    /// Spectral `d/dx`; the Nyquist mode is discarded.
    pub fn ddx(&self) -> Self {
        let k = self.grid.kx_odd().to_vec();
        self.spectral_map(|p, _, c| c * Complex::new(T::zero(), k[p]))
    }

    /// Spectral `d/dz`; the Nyquist mode is discarded.
    pub fn ddz(&self) -> Self {
        let k = self.grid.kz_odd().to_vec();
        self.spectral_map(|_, q, c| c * Complex::new(T::zero(), k[q]))
    }

    /// Both first derivatives from a single forward transform.
    pub fn gradient(&self) -> (Self, Self) {
        self.gradient_masked(false)
    }

    // gradient of the 2/3-truncated field, still one forward transform
    fn gradient_masked(&self, truncate: bool) -> (Self, Self) {
        let grid = &self.grid;
        let nz = grid.nz();
        let hat = grid.forward(&self.values);
        let (kx, kz) = (grid.kx_odd(), grid.kz_odd());
        let mut hx = hat.clone();
        let mut hz = hat;
        for n in 0..hx.len() {
            if truncate && !grid.keeps(n / nz, n % nz) {
                hx[n] = Complex::new(T::zero(), T::zero());
                hz[n] = hx[n];
                continue;
            }
            hx[n] *= Complex::new(T::zero(), kx[n / nz]);
            hz[n] *= Complex::new(T::zero(), kz[n % nz]);
        }
        (Self::raw(grid, grid.inverse(hx)), Self::raw(grid, grid.inverse(hz)))
    }

    pub fn laplacian(&self) -> Self {
        let (kx, kz) = (self.grid.kx().to_vec(), self.grid.kz().to_vec());
        self.spectral_map(|p, q, c| c * -(kx[p] * kx[p] + kz[q] * kz[q]))
    }

    /// Solves `laplacian(psi) = self` for the zero-mean `psi`.
    pub fn invert_laplacian(&self) -> Result<Self> {
        let scale = T::one().max(self.max_abs());
        let mean = self.mean();
        if mean.abs() > T::lit(1e4) * T::epsilon() * scale {
            return Err(Error::Solvability {
                mean: mean.to_f64_lossy(),
            });
        }
        let (kx, kz) = (self.grid.kx().to_vec(), self.grid.kz().to_vec());
        Ok(self.spectral_map(|p, q, c| {
            if p == 0 && q == 0 {
                Complex::new(T::zero(), T::zero())
            } else {
                c / -(kx[p] * kx[p] + kz[q] * kz[q])
            }
        }))
    }

    /// 2/3-rule truncation.
    pub fn dealias(&self) -> Self {
        let grid = Arc::clone(&self.grid);
        self.spectral_map(|p, q, c| {
            if grid.keeps(p, q) {
                c
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Product with both factors and the result truncated by the 2/3 rule.
    pub fn mul_dealiased(&self, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let a = self.dealias();
        let b = other.dealias();
        Ok((&a * &b).dealias())
    }

    /// `J(a, b) = a_x b_z - a_z b_x` with 2/3-rule dealiasing.
    pub fn jacobian(&self, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let (ax, az) = self.gradient_masked(true);
        let (bx, bz) = other.gradient_masked(true);
        let prod: Vec<T> = (0..ax.values.len())
            .map(|n| ax.values[n] * bz.values[n] - az.values[n] * bx.values[n])
            .collect();
        Ok(Self::raw(&self.grid, prod).dealias())
    }

    /// `|grad psi|^2`, dealiased.
    pub fn grad_norm_sq(&self) -> Self {
        let (px, pz) = self.gradient_masked(true);
        let sq: Vec<T> = px
            .values
            .iter()
            .zip(&pz.values)
            .map(|(&a, &b)| a * a + b * b)
            .collect();
        Self::raw(&self.grid, sq).dealias()
    }

    /// Uniform-weight quadrature `sum(values) * dx * dz`.
    pub fn integrate(&self) -> T {
        let spec = self.grid.spec();
        self.values.iter().copied().sum::<T>() * spec.dx() * spec.dz()
    }

    /// Normalized complex Fourier coefficients (forward DFT divided by `nx*nz`).
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let norm = T::one() / T::from_count(self.grid.len());
        self.grid.forward(&self.values).into_iter().map(|c| c * norm).collect()
    }

    /// Inverse of [`ScalarField::spectrum`]; imaginary residue is discarded.
    pub fn from_spectrum(grid: &Arc<Grid<T>>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let n = T::from_count(grid.len());
        let vals = grid.inverse(coeffs.into_iter().map(|c| c * n).collect());
        Self::from_values(grid, vals)
    }
}

// ---- operator impls ------------------------------------------------------------

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a, T: Real> $tr<&'a ScalarField<T>> for &'a ScalarField<T> {
            type Output = ScalarField<T>;
            fn $method(self, rhs: &'a ScalarField<T>) -> ScalarField<T> {
                assert!(self.same_grid(rhs), "grid mismatch");
                ScalarField::raw(
                    &self.grid,
                    self.values.iter().zip(&rhs.values).map(|(&a, &b)| a $op b).collect(),
                )
            }
        }
        impl<T: Real> $tr<ScalarField<T>> for ScalarField<T> {
            type Output = ScalarField<T>;
            fn $method(self, rhs: ScalarField<T>) -> ScalarField<T> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, T: Real> $tr<&'a ScalarField<T>> for ScalarField<T> {
            type Output = ScalarField<T>;
            fn $method(self, rhs: &'a ScalarField<T>) -> ScalarField<T> {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl<T: Real> Mul<T> for &ScalarField<T> {
    type Output = ScalarField<T>;
    fn mul(self, c: T) -> ScalarField<T> {
        self.scale(c)
    }
}

impl<T: Real> Mul<T> for ScalarField<T> {
    type Output = ScalarField<T>;
    fn mul(mut self, c: T) -> ScalarField<T> {
        self.values.iter_mut().for_each(|v| *v *= c);
        self
    }
}

impl<T: Real> Neg for &ScalarField<T> {
    type Output = ScalarField<T>;
    fn neg(self) -> ScalarField<T> {
        self.map(|v| -v)
    }
}

impl<T: Real> Neg for ScalarField<T> {
    type Output = ScalarField<T>;
    fn neg(mut self) -> ScalarField<T> {
        self.values.iter_mut().for_each(|v| *v = -*v);
        self
    }
}

impl<T: Real> AddAssign<&ScalarField<T>> for ScalarField<T> {
    fn add_assign(&mut self, rhs: &ScalarField<T>) {
        assert!(self.same_grid(rhs), "grid mismatch");
        self.values.iter_mut().zip(&rhs.values).for_each(|(a, &b)| *a += b);
    }
}

impl<T: Real> SubAssign<&ScalarField<T>> for ScalarField<T> {
    fn sub_assign(&mut self, rhs: &ScalarField<T>) {
        assert!(self.same_grid(rhs), "grid mismatch");
        self.values.iter_mut().zip(&rhs.values).for_each(|(a, &b)| *a -= b);
    }
}

impl<T: Real> ScalarField<T> {
    /// `self + c * other`, the workhorse of the Runge-Kutta stages.
    pub fn axpy(&self, c: T, other: &Self) -> Self {
        assert!(self.same_grid(other), "grid mismatch");
        Self::raw(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| a + c * b).collect(),
        )
    }
}
