use super::generator::{Generator, GeneratorId};
use super::ode::dopri5;
use super::sampler::SolutionSampler;
use crate::dynamics::{PhysicalParams, PointJet};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance for the numerically integrated X9 flow.
pub const X9_TOLERANCE: f64 = 1e-12;

/// A point `(t, x, z, v, ρ, ψ)` of the space of independent and dependent
/// variables.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point<T> {
    pub t: T,
    pub x: T,
    pub z: T,
    pub v: T,
    pub rho: T,
    pub psi: T,
}

/// Flow of X9 through parameter `ε`: the rotation `(cos ε, sin ε)` together
/// with the rows of the linear map `(x, z, v, ρ) ↦ (v̄, ρ̄)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationFlow<T> {
    pub cos: T,
    pub sin: T,
    pub v_row: [T; 4],
    pub rho_row: [T; 4],
}

impl<T: Real> RotationFlow<T> {
    /// Integrates `dv̄/dε = −(1/f)[gρ̄ + (f²−N²)z̄]`, `dρ̄/dε = (1/g)[f v̄ + (f²−N²)x̄]`
    /// for each unit initial condition in `(x, z, v, ρ)`.
    pub fn new(params: &PhysicalParams<T>, eps: T) -> Result<Self> {
        if params.f == T::zero() {
            return Err(Error::InvalidGenerator("X9 requires f != 0".into()));
        }
        let (f, g) = (params.f, params.g);
        let d = f * f - params.n * params.n;
        let rhs = |s: T, y: &[T; 8]| {
            let (sn, cs) = (s.sin(), s.cos());
            let mut out = [T::zero(); 8];
            for col in 0..4 {
                // rotated coordinates of the column's initial (x, z)
                let (x0, z0) = match col {
                    0 => (T::one(), T::zero()),
                    1 => (T::zero(), T::one()),
                    _ => (T::zero(), T::zero()),
                };
                let xs = x0 * cs + z0 * sn;
                let zs = z0 * cs - x0 * sn;
                let (v, rho) = (y[2 * col], y[2 * col + 1]);
                out[2 * col] = -(g * rho + d * zs) / f;
                out[2 * col + 1] = (f * v + d * xs) / g;
            }
            out
        };
        let mut y0 = [T::zero(); 8];
        y0[4] = T::one();
        y0[7] = T::one();
        let tol = T::lit(X9_TOLERANCE).max(T::lit(64.0) * T::epsilon());
        let y = dopri5(rhs, y0, eps, tol)?;
        Ok(Self {
            cos: eps.cos(),
            sin: eps.sin(),
            v_row: [y[0], y[2], y[4], y[6]],
            rho_row: [y[1], y[3], y[5], y[7]],
        })
    }

    fn apply(&self, p: &Point<T>) -> Point<T> {
        let dot = |r: &[T; 4]| r[0] * p.x + r[1] * p.z + r[2] * p.v + r[3] * p.rho;
        Point {
            t: p.t,
            x: p.x * self.cos + p.z * self.sin,
            z: p.z * self.cos - p.x * self.sin,
            v: dot(&self.v_row),
            rho: dot(&self.rho_row),
            psi: p.psi,
        }
    }
}

/// Image of a point under the one-parameter group of `gen` at parameter `eps`.
pub fn transform_point<T: Real>(gen: &Generator<T>, eps: T, p: Point<T>) -> Result<Point<T>> {
    let params = gen.params();
    let mut q = p;
    match gen.id() {
        GeneratorId::X1 => q.v += eps,
        GeneratorId::X2 => q.rho += eps,
        GeneratorId::X3 => q.psi += eps * gen.profile_at(p.t, 0),
        GeneratorId::X4 => q.t += eps,
        GeneratorId::X5 => {
            let b = gen.profile_at(p.t, 0);
            q.x += eps * b;
            q.v -= eps * params.f * b;
            q.psi += eps * gen.profile_at(p.t, 1) * p.z;
        }
        GeneratorId::X6 => {
            let c = gen.profile_at(p.t, 0);
            q.z += eps * c;
            q.rho += eps * params.n2_over_g() * c;
            q.psi -= eps * gen.profile_at(p.t, 1) * p.x;
        }
        GeneratorId::X7 => {
            let a = eps.exp();
            q = Point {
                t: p.t,
                x: p.x * a,
                z: p.z * a,
                v: p.v * a,
                rho: p.rho * a,
                psi: p.psi * a * a,
            };
        }
        GeneratorId::X8 => {
            let a = eps.exp();
            let a2 = a * a;
            q = Point {
                t: p.t * a,
                x: p.x * a2,
                z: p.z * a2,
                v: p.v + params.f * p.x * (T::one() - a2),
                rho: p.rho + params.n2_over_g() * p.z * (a2 - T::one()),
                psi: p.psi * a2 * a,
            };
        }
        GeneratorId::X9 => q = RotationFlow::new(params, eps)?.apply(&p),
    }
    Ok(q)
}

/// The solution obtained from `inner` by the group element `exp(eps X)`.
pub struct Transformed<T: Real, S> {
    inner: S,
    gen: Generator<T>,
    eps: T,
    rotation: Option<RotationFlow<T>>,
}

/// Maps the solution `sol` by the finite transformation of `gen` with
/// parameter `eps`.
pub fn finite_transform<T: Real, S: SolutionSampler<T>>(
    gen: &Generator<T>,
    eps: T,
    sol: S,
) -> Result<Transformed<T, S>> {
    if !eps.is_finite() {
        return Err(Error::InvalidGenerator("group parameter must be finite".into()));
    }
    let rotation = match gen.id() {
        GeneratorId::X9 => Some(RotationFlow::new(gen.params(), eps)?),
        _ => None,
    };
    Ok(Transformed {
        inner: sol,
        gen: gen.clone(),
        eps,
        rotation,
    })
}

impl<T: Real, S> Transformed<T, S> {
    pub fn generator(&self) -> &Generator<T> {
        &self.gen
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<T: Real, S: SolutionSampler<T>> SolutionSampler<T> for Transformed<T, S> {
    /// Pulls `(t̄, x̄, z̄)` back to the source solution and pushes the jet
    /// forward by the chain rule.
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>> {
        let eps = self.eps;
        let p = self.gen.params();
        let n2g = p.n2_over_g();
        let one = T::one();
        let out = match self.gen.id() {
            GeneratorId::X1 => {
                let mut j = self.inner.jet(t, x, z)?;
                j.v += eps;
                j
            }
            GeneratorId::X2 => {
                let mut j = self.inner.jet(t, x, z)?;
                j.rho += eps;
                j
            }
            GeneratorId::X3 => {
                let mut j = self.inner.jet(t, x, z)?;
                j.psi += eps * self.gen.profile_at(t, 0);
                j.psi_t += eps * self.gen.profile_at(t, 1);
                j
            }
            GeneratorId::X4 => self.inner.jet(t - eps, x, z)?,
            GeneratorId::X5 => {
                let (b0, b1, b2) = (
                    eps * self.gen.profile_at(t, 0),
                    eps * self.gen.profile_at(t, 1),
                    eps * self.gen.profile_at(t, 2),
                );
                let mut j = self.inner.jet(t, x - b0, z)?;
                j.v_t -= b1 * j.v_x + p.f * b1;
                j.v -= p.f * b0;
                j.rho_t -= b1 * j.rho_x;
                j.psi_t += b2 * z - b1 * j.psi_x;
                j.psi += b1 * z;
                j.psi_z += b1;
                j.zeta_t -= b1 * j.zeta_x;
                j
            }
            GeneratorId::X6 => {
                let (c0, c1, c2) = (
                    eps * self.gen.profile_at(t, 0),
                    eps * self.gen.profile_at(t, 1),
                    eps * self.gen.profile_at(t, 2),
                );
                let mut j = self.inner.jet(t, x, z - c0)?;
                j.v_t -= c1 * j.v_z;
                j.rho_t += n2g * c1 - c1 * j.rho_z;
                j.rho += n2g * c0;
                j.psi_t -= c2 * x + c1 * j.psi_z;
                j.psi -= c1 * x;
                j.psi_x -= c1;
                j.zeta_t -= c1 * j.zeta_z;
                j
            }
            GeneratorId::X7 => {
                let a = eps.exp();
                let j = self.inner.jet(t, x / a, z / a)?;
                PointJet {
                    v: a * j.v,
                    v_t: a * j.v_t,
                    rho: a * j.rho,
                    rho_t: a * j.rho_t,
                    psi: a * a * j.psi,
                    psi_t: a * a * j.psi_t,
                    psi_x: a * j.psi_x,
                    psi_z: a * j.psi_z,
                    zeta_x: j.zeta_x / a,
                    zeta_z: j.zeta_z / a,
                    ..j
                }
            }
            GeneratorId::X8 => {
                let a = eps.exp();
                let a2 = a * a;
                let shrink = one / a2 - one;
                let j = self.inner.jet(t / a, x / a2, z / a2)?;
                PointJet {
                    v: j.v + p.f * x * shrink,
                    v_t: j.v_t / a,
                    v_x: j.v_x / a2 + p.f * shrink,
                    v_z: j.v_z / a2,
                    rho: j.rho - n2g * z * shrink,
                    rho_t: j.rho_t / a,
                    rho_x: j.rho_x / a2,
                    rho_z: j.rho_z / a2 - n2g * shrink,
                    psi: a2 * a * j.psi,
                    psi_t: a2 * j.psi_t,
                    psi_x: a * j.psi_x,
                    psi_z: a * j.psi_z,
                    zeta: j.zeta / a,
                    zeta_t: j.zeta_t / a2,
                    zeta_x: j.zeta_x / (a2 * a),
                    zeta_z: j.zeta_z / (a2 * a),
                }
            }
            GeneratorId::X9 => {
                let r = self.rotation.as_ref().expect("built with the transform");
                let (c, s) = (r.cos, r.sin);
                let j = self.inner.jet(t, x * c - z * s, x * s + z * c)?;
                // ∂/∂x̄ = c ∂/∂x + s ∂/∂z,  ∂/∂z̄ = −s ∂/∂x + c ∂/∂z
                let dx = |qx: T, qz: T| c * qx + s * qz;
                let dz = |qx: T, qz: T| c * qz - s * qx;
                let (x0, z0) = (x * c - z * s, x * s + z * c);
                let lin = |row: &[T; 4]| {
                    let val = row[0] * x0 + row[1] * z0 + row[2] * j.v + row[3] * j.rho;
                    let gx = row[0] + row[2] * j.v_x + row[3] * j.rho_x;
                    let gz = row[1] + row[2] * j.v_z + row[3] * j.rho_z;
                    (val, row[2] * j.v_t + row[3] * j.rho_t, dx(gx, gz), dz(gx, gz))
                };
                let (v, v_t, v_x, v_z) = lin(&r.v_row);
                let (rho, rho_t, rho_x, rho_z) = lin(&r.rho_row);
                PointJet {
                    v,
                    v_t,
                    v_x,
                    v_z,
                    rho,
                    rho_t,
                    rho_x,
                    rho_z,
                    psi_x: dx(j.psi_x, j.psi_z),
                    psi_z: dz(j.psi_x, j.psi_z),
                    zeta_x: dx(j.zeta_x, j.zeta_z),
                    zeta_z: dz(j.zeta_x, j.zeta_z),
                    ..j
                }
            }
        };
        Ok(out)
    }
}
