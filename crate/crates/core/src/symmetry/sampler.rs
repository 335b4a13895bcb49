use crate::dynamics::{FlowState, InvariantSolutionSpec, PhysicalParams, PointJet, Tendencies};
use crate::error::{Error, Result};
use crate::field::{FourierInterpolant, GridSpec};
use crate::scalar::Real;

/// A continuous solution: anything that can report the local jet of
/// `(v, ρ, ψ, ζ)` at a space-time point.
pub trait SolutionSampler<T: Real>: Send + Sync {
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>>;

    /// `(v, ρ, ψ)` at one point.
    fn sample(&self, t: T, x: T, z: T) -> Result<(T, T, T)> {
        let j = self.jet(t, x, z)?;
        Ok((j.v, j.rho, j.psi))
    }
}

impl<T: Real, S: SolutionSampler<T> + ?Sized> SolutionSampler<T> for &S {
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>> {
        (**self).jet(t, x, z)
    }
}

impl<T: Real, S: SolutionSampler<T> + ?Sized> SolutionSampler<T> for Box<S> {
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>> {
        (**self).jet(t, x, z)
    }
}

/// The travelling-phase invariant solution, defined for all `(t, x, z)`.
#[derive(Clone, Debug)]
pub struct ClosedForm<T: Real> {
    pub spec: InvariantSolutionSpec<T>,
    pub params: PhysicalParams<T>,
}

impl<T: Real> ClosedForm<T> {
    pub fn new(spec: InvariantSolutionSpec<T>, params: PhysicalParams<T>) -> Self {
        Self { spec, params }
    }
}

impl<T: Real> SolutionSampler<T> for ClosedForm<T> {
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>> {
        Ok(self.spec.jet(&self.params, t, x, z))
    }
}

struct Knot<T: Real> {
    values: [FourierInterpolant<T>; 4],
    rates: [FourierInterpolant<T>; 4],
}

/// Stored trajectory evaluated by Fourier interpolation in space and cubic
/// Hermite interpolation in time (knot values plus stored tendencies).
pub struct TrajectorySampler<T: Real> {
    spec: GridSpec<T>,
    times: Vec<T>,
    knots: Vec<Knot<T>>,
}

impl<T: Real> TrajectorySampler<T> {
    pub fn new(states: &[FlowState<T>], tends: &[Tendencies<T>]) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::EmptyTrajectory);
        }
        if states.len() != tends.len() {
            return Err(Error::InconsistentTrajectory(format!(
                "{} states but {} tendency sets",
                states.len(),
                tends.len()
            )));
        }
        let grid = states[0].grid();
        for (s, d) in states.iter().zip(tends) {
            if !s.grid().same_as(grid) || !d.grid().same_as(grid) {
                return Err(Error::GridMismatch);
            }
        }
        if states.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InconsistentTrajectory("times must increase strictly".into()));
        }
        let knots = states
            .iter()
            .zip(tends)
            .map(|(s, d)| Knot {
                values: [&s.v, &s.rho, &s.psi, &s.zeta].map(FourierInterpolant::new),
                rates: [&d.dv_dt, &d.drho_dt, &d.dpsi_dt, &d.dzeta_dt].map(FourierInterpolant::new),
            })
            .collect();
        Ok(Self {
            spec: *grid.spec(),
            times: states.iter().map(|s| s.t).collect(),
            knots,
        })
    }

    pub fn time_range(&self) -> (T, T) {
        (self.times[0], *self.times.last().expect("at least two knots"))
    }
}

impl<T: Real> SolutionSampler<T> for TrajectorySampler<T> {
    fn jet(&self, t: T, x: T, z: T) -> Result<PointJet<T>> {
        let (t0, t1) = self.time_range();
        if !(t >= t0 && t <= t1) || !self.spec.contains(x, z) {
            return Err(Error::OutOfDomain {
                t: t.to_f64_lossy(),
                x: x.to_f64_lossy(),
                z: z.to_f64_lossy(),
            });
        }
        let i = self.times.partition_point(|&ti| ti <= t).clamp(1, self.times.len() - 1) - 1;
        let h = self.times[i + 1] - self.times[i];
        let s = (t - self.times[i]) / h;
        let (two, three, four, six) = (T::lit(2.0), T::lit(3.0), T::lit(4.0), T::lit(6.0));
        let s2 = s * s;
        let s3 = s2 * s;
        let w = [two * s3 - three * s2 + T::one(), (s3 - two * s2 + s) * h, three * s2 - two * s3, (s3 - s2) * h];
        let dw = [
            (six * s2 - six * s) / h,
            three * s2 - four * s + T::one(),
            (six * s - six * s2) / h,
            three * s2 - two * s,
        ];
        let orders = [(0, 0), (1, 0), (0, 1)];
        let (a, b) = (&self.knots[i], &self.knots[i + 1]);
        let mut out = [[T::zero(); 4]; 4];
        for (q, o) in out.iter_mut().enumerate() {
            let parts = [
                a.values[q].eval_orders(x, z, &orders),
                a.rates[q].eval_orders(x, z, &orders),
                b.values[q].eval_orders(x, z, &orders),
                b.rates[q].eval_orders(x, z, &orders),
            ];
            for n in 0..4 {
                o[0] += w[n] * parts[n][0];
                o[1] += dw[n] * parts[n][0];
                o[2] += w[n] * parts[n][1];
                o[3] += w[n] * parts[n][2];
            }
        }
        let [v, rho, psi, zeta] = out;
        Ok(PointJet {
            v: v[0],
            v_t: v[1],
            v_x: v[2],
            v_z: v[3],
            rho: rho[0],
            rho_t: rho[1],
            rho_x: rho[2],
            rho_z: rho[3],
            psi: psi[0],
            psi_t: psi[1],
            psi_x: psi[2],
            psi_z: psi[3],
            zeta: zeta[0],
            zeta_t: zeta[1],
            zeta_x: zeta[2],
            zeta_z: zeta[3],
        })
    }
}
