//! Fields of the form `sum x^p z^q F_pq(x, z)` with periodic coefficients.
//!
//! The coordinates `x`, `z` are not periodic, so a weighted quantity such as
//! `x * psi * v_z` cannot be differentiated spectrally as a whole. Keeping the
//! monomials symbolic lets `ddx`/`ddz` apply the product rule exactly and hand
//! only periodic coefficients to the FFT.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::grid::Grid;
use super::scalar_field::ScalarField;
use crate::scalar::Real;

/// Exponents `(p, q)` of the monomial `x^p z^q`.
pub type Monomial = (u32, u32);

#[derive(Clone, Debug)]
pub struct Weighted<T: Real> {
    grid: Arc<Grid<T>>,
    terms: BTreeMap<Monomial, ScalarField<T>>,
}

impl<T: Real> Weighted<T> {
    pub fn zero(grid: &Arc<Grid<T>>) -> Self {
        Self {
            grid: Arc::clone(grid),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(grid: &Arc<Grid<T>>, c: T) -> Self {
        Self::from(ScalarField::constant(grid, c))
    }

    /// The coordinate `x`.
    pub fn x(grid: &Arc<Grid<T>>) -> Self {
        Self::monomial((1, 0), ScalarField::constant(grid, T::one()))
    }

    /// The coordinate `z`.
    pub fn z(grid: &Arc<Grid<T>>) -> Self {
        Self::monomial((0, 1), ScalarField::constant(grid, T::one()))
    }

    pub fn monomial(m: Monomial, coeff: ScalarField<T>) -> Self {
        let mut terms = BTreeMap::new();
        let grid = Arc::clone(coeff.grid());
        terms.insert(m, coeff);
        Self { grid, terms }
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarField<T>)> {
        self.terms.iter()
    }

    /// Coefficient of `x^p z^q`, if present.
    pub fn coeff(&self, m: Monomial) -> Option<&ScalarField<T>> {
        self.terms.get(&m)
    }

    /// Highest total degree among the monomials present.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(p, q)| p + q).max().unwrap_or(0)
    }

    fn accumulate(&mut self, m: Monomial, f: ScalarField<T>) {
        match self.terms.get_mut(&m) {
            Some(existing) => *existing += &f,
            None => {
                self.terms.insert(m, f);
            }
        }
    }

    fn map_coeffs(&self, f: impl Fn(&ScalarField<T>) -> ScalarField<T>) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            terms: self.terms.iter().map(|(&m, c)| (m, f(c))).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map_coeffs(|f| f.scale(c))
    }

    pub fn times_x(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            terms: self.terms.iter().map(|(&(p, q), c)| ((p + 1, q), c.clone())).collect(),
        }
    }

    pub fn times_z(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            terms: self.terms.iter().map(|(&(p, q), c)| ((p, q + 1), c.clone())).collect(),
        }
    }

    /// `d/dx` with the product rule applied to every monomial.
    pub fn ddx(&self) -> Self {
        let mut out = Self::zero(&self.grid);
        for (&(p, q), c) in &self.terms {
            out.accumulate((p, q), c.ddx());
            if p > 0 {
                out.accumulate((p - 1, q), c.scale(T::from_count(p as usize)));
            }
        }
        out
    }

    /// `d/dz` with the product rule applied to every monomial.
    pub fn ddz(&self) -> Self {
        let mut out = Self::zero(&self.grid);
        for (&(p, q), c) in &self.terms {
            out.accumulate((p, q), c.ddz());
            if q > 0 {
                out.accumulate((p, q - 1), c.scale(T::from_count(q as usize)));
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        &self.ddx().ddx() + &self.ddz().ddz()
    }

    /// `a_x b_z - a_z b_x`.
    pub fn jacobian(&self, other: &Self) -> Self {
        &(&self.ddx() * &other.ddz()) - &(&self.ddz() * &other.ddx())
    }

    /// Trapezoidal quadrature over the closed box `[-Lx/2, Lx/2] × [-Lz/2, Lz/2]`
    /// with the coefficients extended periodically. For a purely periodic field
    /// this reduces to [`ScalarField::integrate`]; for weighted terms it keeps
    /// the odd symmetry of `x` and `z` about the box centre.
    pub fn integrate(&self) -> T {
        let spec = self.grid.spec();
        let (nx, nz) = (spec.nx, spec.nz);
        let (ox, oz) = spec.origin();
        let (dx, dz) = (spec.dx(), spec.dz());
        let half = T::lit(0.5);
        let mut total = T::zero();
        for (&(p, q), c) in &self.terms {
            if p == 0 && q == 0 {
                total += c.integrate();
                continue;
            }
            let vals = c.values();
            let mut sum = T::zero();
            for i in 0..=nx {
                let wx = if i == 0 || i == nx { half } else { T::one() };
                let xp = (ox + T::from_count(i) * dx).powi(p as i32);
                let row = &vals[(i % nx) * nz..(i % nx + 1) * nz];
                let mut inner = T::zero();
                for j in 0..=nz {
                    let wz = if j == 0 || j == nz { half } else { T::one() };
                    inner += wz * (oz + T::from_count(j) * dz).powi(q as i32) * row[j % nz];
                }
                sum += wx * xp * inner;
            }
            total += sum * dx * dz;
        }
        total
    }

    /// Evaluates the polynomial weights on the grid coordinates.
    pub fn eval(&self) -> ScalarField<T> {
        let grid = &self.grid;
        let nz = grid.nz();
        let (xs, zs) = (grid.xs(), grid.zs());
        let mut out = vec![T::zero(); grid.len()];
        for (&(p, q), c) in &self.terms {
            let p = p as i32;
            let q = q as i32;
            for (n, (o, &v)) in out.iter_mut().zip(c.values()).enumerate() {
                *o += xs[n / nz].powi(p) * zs[n % nz].powi(q) * v;
            }
        }
        ScalarField::raw(grid, out)
    }
}

impl<T: Real> From<ScalarField<T>> for Weighted<T> {
    fn from(f: ScalarField<T>) -> Self {
        Self::monomial((0, 0), f)
    }
}

impl<T: Real> From<&ScalarField<T>> for Weighted<T> {
    fn from(f: &ScalarField<T>) -> Self {
        Self::monomial((0, 0), f.clone())
    }
}

impl<'a, T: Real> Add<&'a Weighted<T>> for &'a Weighted<T> {
    type Output = Weighted<T>;
    fn add(self, rhs: &'a Weighted<T>) -> Weighted<T> {
        assert!(self.grid.same_as(&rhs.grid), "grid mismatch");
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.accumulate(m, c.clone());
        }
        out
    }
}

impl<'a, T: Real> Sub<&'a Weighted<T>> for &'a Weighted<T> {
    type Output = Weighted<T>;
    fn sub(self, rhs: &'a Weighted<T>) -> Weighted<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Neg for &Weighted<T> {
    type Output = Weighted<T>;
    fn neg(self) -> Weighted<T> {
        self.map_coeffs(|c| -c)
    }
}

/// Product with dealiased coefficient products.
impl<'a, T: Real> Mul<&'a Weighted<T>> for &'a Weighted<T> {
    type Output = Weighted<T>;
    fn mul(self, rhs: &'a Weighted<T>) -> Weighted<T> {
        assert!(self.grid.same_as(&rhs.grid), "grid mismatch");
        let mut out = Weighted::zero(&self.grid);
        for (&(p1, q1), a) in &self.terms {
            for (&(p2, q2), b) in &rhs.terms {
                let prod = a.mul_dealiased(b).expect("same grid");
                out.accumulate((p1 + p2, q1 + q2), prod);
            }
        }
        out
    }
}

impl<T: Real> Mul<T> for &Weighted<T> {
    type Output = Weighted<T>;
    fn mul(self, c: T) -> Weighted<T> {
        self.scale(c)
    }
}

macro_rules! owned_forward {
    ($tr:ident, $method:ident) => {
        impl<T: Real> $tr<Weighted<T>> for Weighted<T> {
            type Output = Weighted<T>;
            fn $method(self, rhs: Weighted<T>) -> Weighted<T> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, T: Real> $tr<&'a Weighted<T>> for Weighted<T> {
            type Output = Weighted<T>;
            fn $method(self, rhs: &'a Weighted<T>) -> Weighted<T> {
                (&self).$method(rhs)
            }
        }
    };
}

owned_forward!(Add, add);
owned_forward!(Sub, sub);
owned_forward!(Mul, mul);

impl<T: Real> Mul<T> for Weighted<T> {
    type Output = Weighted<T>;
    fn mul(self, c: T) -> Weighted<T> {
        self.scale(c)
    }
}

impl<T: Real> Neg for Weighted<T> {
    type Output = Weighted<T>;
    fn neg(self) -> Weighted<T> {
        -&self
    }
}
