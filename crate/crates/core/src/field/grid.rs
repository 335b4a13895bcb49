use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape and extent of a doubly periodic box centred on the origin.
///
/// Samples sit at `x_i = -lx/2 + i*lx/nx`, `z_j = -lz/2 + j*lz/nz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub nx: usize,
    pub nz: usize,
    pub lx: T,
    pub lz: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, nz: usize, lx: T, lz: T) -> Result<Self> {
        let spec = Self { nx, nz, lx, lz };
        spec.validate()?;
        Ok(spec)
    }

    /// Square `n x n` box of side `2*pi`.
    pub fn periodic_2pi(n: usize) -> Result<Self> {
        Self::new(n, n, T::TAU(), T::TAU())
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, n) in [("nx", self.nx), ("nz", self.nz)] {
            if n < 8 || n % 2 != 0 {
                problems.push(format!("{name} must be even and >= 8 (got {n})"));
            }
        }
        for (name, l) in [("lx", self.lx), ("lz", self.lz)] {
            if !(l.is_finite() && l > T::zero()) {
                problems.push(format!("{name} must be positive and finite (got {l})"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGrid(problems.join("; ")))
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> T {
        self.lx / T::from_count(self.nx)
    }

    pub fn dz(&self) -> T {
        self.lz / T::from_count(self.nz)
    }

    /// Coordinate of the first sample in each direction.
    pub fn origin(&self) -> (T, T) {
        (-self.lx / T::lit(2.0), -self.lz / T::lit(2.0))
    }

    pub fn x(&self, i: usize) -> T {
        self.origin().0 + T::from_count(i) * self.dx()
    }

    pub fn z(&self, j: usize) -> T {
        self.origin().1 + T::from_count(j) * self.dz()
    }

    /// Whether `(x, z)` lies in the closed box `[-lx/2, lx/2] x [-lz/2, lz/2]`.
    pub fn contains(&self, x: T, z: T) -> bool {
        let hx = self.lx / T::lit(2.0);
        let hz = self.lz / T::lit(2.0);
        x >= -hx && x <= hx && z >= -hz && z <= hz
    }
}

/// Signed integer wavenumber index for FFT bin `k` of an `n`-point transform.
pub(crate) fn signed_index(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// A validated grid together with its coordinate arrays, wavenumbers and
/// FFT plans. Shared between fields through an `Arc`.
///
/// FFT plans are immutable; every transform allocates its own scratch, so a
/// grid can be used from several threads at once.
pub struct Grid<T: Real> {
    spec: GridSpec<T>,
    xs: Vec<T>,
    zs: Vec<T>,
    /// Angular wavenumbers `2*pi*k/L`, Nyquist included.
    kx: Vec<T>,
    kz: Vec<T>,
    /// Wavenumbers used for odd derivatives; the Nyquist bin is zeroed.
    kx_odd: Vec<T>,
    kz_odd: Vec<T>,
    /// 2/3-rule mask per direction.
    keep_x: Vec<bool>,
    keep_z: Vec<bool>,
    fwd_x: Arc<dyn Fft<T>>,
    inv_x: Arc<dyn Fft<T>>,
    fwd_z: Arc<dyn Fft<T>>,
    inv_z: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid").field("spec", &self.spec).finish()
    }
}

fn wavenumbers<T: Real>(n: usize, l: T) -> (Vec<T>, Vec<T>, Vec<bool>) {
    let base = T::TAU() / l;
    let mut k = Vec::with_capacity(n);
    let mut k_odd = Vec::with_capacity(n);
    let mut keep = Vec::with_capacity(n);
    for bin in 0..n {
        let s = signed_index(bin, n);
        let kk = T::lit(s as f64) * base;
        k.push(kk);
        k_odd.push(if bin == n / 2 { T::zero() } else { kk });
        // Retain |k| < n/3 so aliases of quadratic products fall outside the kept band.
        keep.push(3 * s.unsigned_abs() < n as u64);
    }
    (k, k_odd, keep)
}

impl<T: Real> Grid<T> {
    pub fn new(spec: GridSpec<T>) -> Result<Arc<Self>> {
        spec.validate()?;
        let mut planner = FftPlanner::new();
        let (kx, kx_odd, keep_x) = wavenumbers(spec.nx, spec.lx);
        let (kz, kz_odd, keep_z) = wavenumbers(spec.nz, spec.lz);
        Ok(Arc::new(Self {
            xs: (0..spec.nx).map(|i| spec.x(i)).collect(),
            zs: (0..spec.nz).map(|j| spec.z(j)).collect(),
            kx,
            kz,
            kx_odd,
            kz_odd,
            keep_x,
            keep_z,
            fwd_x: planner.plan_fft_forward(spec.nx),
            inv_x: planner.plan_fft_inverse(spec.nx),
            fwd_z: planner.plan_fft_forward(spec.nz),
            inv_z: planner.plan_fft_inverse(spec.nz),
            spec,
        }))
    }

    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn nx(&self) -> usize {
        self.spec.nx
    }

    pub fn nz(&self) -> usize {
        self.spec.nz
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.is_empty()
    }

    /// Exact (non-periodic) coordinate arrays.
    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn zs(&self) -> &[T] {
        &self.zs
    }

    pub fn kx(&self) -> &[T] {
        &self.kx
    }

    pub fn kz(&self) -> &[T] {
        &self.kz
    }

    pub(crate) fn kx_odd(&self) -> &[T] {
        &self.kx_odd
    }

    pub(crate) fn kz_odd(&self) -> &[T] {
        &self.kz_odd
    }

    /// Whether spectral bin `(p, q)` survives 2/3-rule truncation.
    #[inline]
    pub fn keeps(&self, p: usize, q: usize) -> bool {
        self.keep_x[p] && self.keep_z[q]
    }

    /// Flat index of sample `(i, j)`; x is the slow index.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.spec.nz + j
    }

    /// Largest retained wavenumber index after dealiasing.
    pub fn dealias_cutoff(&self) -> (usize, usize) {
        ((self.spec.nx - 1) / 3, (self.spec.nz - 1) / 3)
    }

    /// Same extent and resolution, ignoring plan identity.
    pub fn same_as(&self, other: &Grid<T>) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }

    /// Unnormalized forward 2-D DFT of real samples.
    pub(crate) fn forward(&self, values: &[T]) -> Vec<Complex<T>> {
        let mut data: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut data, true);
        data
    }

    /// Inverse 2-D DFT (normalized), real part.
    pub(crate) fn inverse(&self, mut data: Vec<Complex<T>>) -> Vec<T> {
        self.transform(&mut data, false);
        let norm = T::one() / T::from_count(self.len());
        data.into_iter().map(|c| c.re * norm).collect()
    }

    fn transform(&self, data: &mut [Complex<T>], forward: bool) {
        let (nx, nz) = (self.spec.nx, self.spec.nz);
        let (fz, fx) = if forward {
            (&self.fwd_z, &self.fwd_x)
        } else {
            (&self.inv_z, &self.inv_x)
        };
        let zero = Complex::new(T::zero(), T::zero());
        let mut scratch = vec![zero; fz.get_inplace_scratch_len().max(fx.get_inplace_scratch_len())];
        // rows are contiguous in z
        fz.process_with_scratch(data, &mut scratch);
        let mut cols = vec![zero; nx * nz];
        transpose::transpose(data, &mut cols, nz, nx);
        fx.process_with_scratch(&mut cols, &mut scratch);
        transpose::transpose(&cols, data, nx, nz);
    }
}
