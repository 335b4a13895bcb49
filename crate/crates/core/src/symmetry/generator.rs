use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::PhysicalParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The nine basis operators of the symmetry algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorId {
    /// `∂/∂v`
    X1,
    /// `∂/∂ρ`
    X2,
    /// `a(t) ∂/∂ψ`
    X3,
    /// `∂/∂t`
    X4,
    /// `b(t)[∂/∂x − f ∂/∂v] + b'(t) z ∂/∂ψ`
    X5,
    /// `c(t)[∂/∂z + (N²/g) ∂/∂ρ] − c'(t) x ∂/∂ψ`
    X6,
    /// Uniform dilation of `x, z, v, ρ` with `ψ` weighted twice.
    X7,
    /// Semi-dilation: `t∂_t + 2x∂_x + 2z∂_z + 3ψ∂_ψ − 2fx∂_v + 2(N²/g)z∂_ρ`.
    X8,
    /// Rotation: `z∂_x − x∂_z − (1/f)[gρ + (f²−N²)z]∂_v + (1/g)[fv + (f²−N²)x]∂_ρ`.
    X9,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 9] = [
        GeneratorId::X1,
        GeneratorId::X2,
        GeneratorId::X3,
        GeneratorId::X4,
        GeneratorId::X5,
        GeneratorId::X6,
        GeneratorId::X7,
        GeneratorId::X8,
        GeneratorId::X9,
    ];

    /// Whether the operator carries an arbitrary function of time.
    pub fn needs_profile(self) -> bool {
        matches!(self, GeneratorId::X3 | GeneratorId::X5 | GeneratorId::X6)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorId::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidGenerator(format!("unknown generator '{s}' (expected X1..X9)")))
    }
}

/// Time profile `Σ p_i t^i + Σ [s_j sin(σ_j t) + c_j cos(σ_j t)]`, `i ≤ 4`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeProfile<T> {
    #[serde(default)]
    pub poly: Vec<T>,
    #[serde(default)]
    pub trig: Vec<TrigTerm<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm<T> {
    pub sigma: T,
    pub sin: T,
    pub cos: T,
}

impl<T: Real> TimeProfile<T> {
    pub const MAX_DEGREE: usize = 4;

    pub fn new(poly: Vec<T>, trig: Vec<TrigTerm<T>>) -> Result<Self> {
        if poly.len() > Self::MAX_DEGREE + 1 {
            return Err(Error::InvalidGenerator(format!(
                "time profile polynomial degree {} exceeds {}",
                poly.len() - 1,
                Self::MAX_DEGREE
            )));
        }
        let finite = poly.iter().all(|c| c.is_finite())
            && trig.iter().all(|t| t.sigma.is_finite() && t.sin.is_finite() && t.cos.is_finite());
        if !finite {
            return Err(Error::InvalidGenerator("time profile coefficients must be finite".into()));
        }
        Ok(Self { poly, trig })
    }

    pub fn constant(c: T) -> Self {
        Self {
            poly: vec![c],
            trig: Vec::new(),
        }
    }

    /// `d^order/dt^order` at `t`.
    pub fn derivative(&self, t: T, order: u32) -> T {
        let mut total = T::zero();
        for (i, &c) in self.poly.iter().enumerate() {
            if (i as u32) < order {
                continue;
            }
            // falling factorial i (i-1) ... (i-order+1)
            let mut fall = T::one();
            for r in 0..order {
                fall *= T::from_count(i - r as usize);
            }
            total += c * fall * t.powi((i as u32 - order) as i32);
        }
        for term in &self.trig {
            let arg = term.sigma * t;
            let (s, c) = (arg.sin(), arg.cos());
            let (ds, dc) = match order % 4 {
                0 => (s, c),
                1 => (c, -s),
                2 => (-s, -c),
                _ => (-c, s),
            };
            total += term.sigma.powi(order as i32) * (term.sin * ds + term.cos * dc);
        }
        total
    }

    pub fn value(&self, t: T) -> T {
        self.derivative(t, 0)
    }
}

/// Affine function `c + x·X + z·Z + v·V + ρ·R + ψ·P` of position and state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Affine<T> {
    pub c: T,
    pub x: T,
    pub z: T,
    pub v: T,
    pub rho: T,
    pub psi: T,
}

impl<T: Real> Affine<T> {
    pub fn zero() -> Self {
        Self {
            c: T::zero(),
            x: T::zero(),
            z: T::zero(),
            v: T::zero(),
            rho: T::zero(),
            psi: T::zero(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self { c, ..Self::zero() }
    }

    pub fn eval(&self, x: T, z: T, v: T, rho: T, psi: T) -> T {
        self.c + self.x * x + self.z * z + self.v * v + self.rho * rho + self.psi * psi
    }

    pub fn depends_on_state(&self) -> bool {
        self.v != T::zero() || self.rho != T::zero() || self.psi != T::zero()
    }
}

impl<T: Real> Add for Affine<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            c: self.c + o.c,
            x: self.x + o.x,
            z: self.z + o.z,
            v: self.v + o.v,
            rho: self.rho + o.rho,
            psi: self.psi + o.psi,
        }
    }
}

impl<T: Real> Mul<T> for Affine<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            c: self.c * s,
            x: self.x * s,
            z: self.z * s,
            v: self.v * s,
            rho: self.rho * s,
            psi: self.psi * s,
        }
    }
}

/// Coefficients `ξ^t, ξ^x, ξ^z, η^v, η^ρ, η^ψ` of a vector field, frozen at one
/// instant. Every operator of the algebra (and every linear combination) has
/// coefficients affine in `(x, z, v, ρ, ψ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Infinitesimal<T> {
    pub xi_t: T,
    pub xi_x: Affine<T>,
    pub xi_z: Affine<T>,
    pub eta_v: Affine<T>,
    pub eta_rho: Affine<T>,
    pub eta_psi: Affine<T>,
}

impl<T: Real> Infinitesimal<T> {
    pub fn zero() -> Self {
        Self {
            xi_t: T::zero(),
            xi_x: Affine::zero(),
            xi_z: Affine::zero(),
            eta_v: Affine::zero(),
            eta_rho: Affine::zero(),
            eta_psi: Affine::zero(),
        }
    }
}

impl<T: Real> Add for Infinitesimal<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            xi_t: self.xi_t + o.xi_t,
            xi_x: self.xi_x + o.xi_x,
            xi_z: self.xi_z + o.xi_z,
            eta_v: self.eta_v + o.eta_v,
            eta_rho: self.eta_rho + o.eta_rho,
            eta_psi: self.eta_psi + o.eta_psi,
        }
    }
}

impl<T: Real> Mul<T> for Infinitesimal<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            xi_t: self.xi_t * s,
            xi_x: self.xi_x * s,
            xi_z: self.xi_z * s,
            eta_v: self.eta_v * s,
            eta_rho: self.eta_rho * s,
            eta_psi: self.eta_psi * s,
        }
    }
}

/// One operator of the algebra, bound to the physical parameters and (for
/// X3, X5, X6) to its time profile `a(t)`, `b(t)` or `c(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<T: Real> {
    id: GeneratorId,
    profile: Option<TimeProfile<T>>,
    params: PhysicalParams<T>,
}

impl<T: Real> Generator<T> {
    pub fn new(id: GeneratorId, profile: Option<TimeProfile<T>>, params: PhysicalParams<T>) -> Result<Self> {
        params.validate()?;
        if id == GeneratorId::X9 && params.f == T::zero() {
            return Err(Error::InvalidGenerator(
                "X9 divides by the Coriolis parameter and requires f != 0".into(),
            ));
        }
        if id.needs_profile() && profile.is_none() {
            return Err(Error::InvalidGenerator(format!("{id} requires a time profile")));
        }
        if !id.needs_profile() && profile.is_some() {
            return Err(Error::InvalidGenerator(format!("{id} takes no time profile")));
        }
        Ok(Self { id, profile, params })
    }

    /// Convenience for the operators without a time profile.
    pub fn basic(id: GeneratorId, params: PhysicalParams<T>) -> Result<Self> {
        Self::new(id, None, params)
    }

    pub fn id(&self) -> GeneratorId {
        self.id
    }

    pub fn profile(&self) -> Option<&TimeProfile<T>> {
        self.profile.as_ref()
    }

    pub fn params(&self) -> &PhysicalParams<T> {
        &self.params
    }

    pub(crate) fn profile_at(&self, t: T, order: u32) -> T {
        self.profile.as_ref().map_or(T::zero(), |p| p.derivative(t, order))
    }

    /// Coefficients at time `t` (`order = 0`) or their `order`-th explicit
    /// time derivative.
    pub fn infinitesimal_derivative(&self, t: T, order: u32) -> Infinitesimal<T> {
        let p = &self.params;
        let two = T::lit(2.0);
        let one = T::one();
        let zero = T::zero();
        let k = if order == 0 { one } else { zero };
        let mut inf = Infinitesimal::zero();
        match self.id {
            GeneratorId::X1 => inf.eta_v = Affine::constant(k),
            GeneratorId::X2 => inf.eta_rho = Affine::constant(k),
            GeneratorId::X3 => inf.eta_psi = Affine::constant(self.profile_at(t, order)),
            GeneratorId::X4 => inf.xi_t = k,
            GeneratorId::X5 => {
                let b = self.profile_at(t, order);
                inf.xi_x = Affine::constant(b);
                inf.eta_v = Affine::constant(-p.f * b);
                inf.eta_psi = Affine {
                    z: self.profile_at(t, order + 1),
                    ..Affine::zero()
                };
            }
            GeneratorId::X6 => {
                let c = self.profile_at(t, order);
                inf.xi_z = Affine::constant(c);
                inf.eta_rho = Affine::constant(p.n2_over_g() * c);
                inf.eta_psi = Affine {
                    x: -self.profile_at(t, order + 1),
                    ..Affine::zero()
                };
            }
            GeneratorId::X7 => {
                inf.xi_x = Affine { x: k, ..Affine::zero() };
                inf.xi_z = Affine { z: k, ..Affine::zero() };
                inf.eta_v = Affine { v: k, ..Affine::zero() };
                inf.eta_rho = Affine { rho: k, ..Affine::zero() };
                inf.eta_psi = Affine { psi: two * k, ..Affine::zero() };
            }
            GeneratorId::X8 => {
                inf.xi_t = match order {
                    0 => t,
                    1 => one,
                    _ => zero,
                };
                inf.xi_x = Affine { x: two * k, ..Affine::zero() };
                inf.xi_z = Affine { z: two * k, ..Affine::zero() };
                inf.eta_psi = Affine { psi: T::lit(3.0) * k, ..Affine::zero() };
                inf.eta_v = Affine { x: -two * p.f * k, ..Affine::zero() };
                inf.eta_rho = Affine { z: two * p.n2_over_g() * k, ..Affine::zero() };
            }
            GeneratorId::X9 => {
                let d = p.f * p.f - p.n * p.n;
                inf.xi_x = Affine { z: k, ..Affine::zero() };
                inf.xi_z = Affine { x: -k, ..Affine::zero() };
                inf.eta_v = Affine {
                    rho: -p.g / p.f * k,
                    z: -d / p.f * k,
                    ..Affine::zero()
                };
                inf.eta_rho = Affine {
                    v: p.f / p.g * k,
                    x: d / p.g * k,
                    ..Affine::zero()
                };
            }
        }
        inf
    }

    pub fn infinitesimal(&self, t: T) -> Infinitesimal<T> {
        self.infinitesimal_derivative(t, 0)
    }
}

/// A linear combination `Σ c_i X_i` of operators.
#[derive(Clone, Debug, Default)]
pub struct Combination<T: Real> {
    pub terms: Vec<(T, Generator<T>)>,
}

impl<T: Real> Combination<T> {
    pub fn infinitesimal_derivative(&self, t: T, order: u32) -> Infinitesimal<T> {
        self.terms
            .iter()
            .fold(Infinitesimal::zero(), |acc, (c, g)| acc + g.infinitesimal_derivative(t, order) * *c)
    }

    pub fn infinitesimal(&self, t: T) -> Infinitesimal<T> {
        self.infinitesimal_derivative(t, 0)
    }
}
