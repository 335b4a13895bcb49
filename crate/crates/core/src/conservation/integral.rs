use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::laws::{density_weighted, DivergenceResidual, LawId};
use crate::dynamics::{FlowState, PhysicalParams, SUPPORT_EDGE_TOL};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The five integrals at one instant.
///
/// `support_flag` is true when `v`, `ρ` and `∇ψ` vanish on the box edge
/// (relative to their peak, within [`SUPPORT_EDGE_TOL`]). When it is false the
/// weighted integrals I4 and I5 are reported but the boundary flux need not
/// vanish, so they are not expected to be constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet<T> {
    pub t: T,
    #[serde(rename = "I1")]
    pub i1: T,
    #[serde(rename = "I2")]
    pub i2: T,
    #[serde(rename = "I3")]
    pub i3: T,
    #[serde(rename = "I4")]
    pub i4: T,
    #[serde(rename = "I5")]
    pub i5: T,
    pub support_flag: bool,
}

impl<T: Real> ConservedSet<T> {
    pub fn get(&self, law: LawId) -> T {
        self.values()[law.index()]
    }

    pub fn values(&self) -> [T; 5] {
        [self.i1, self.i2, self.i3, self.i4, self.i5]
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.values().iter().all(|v| v.is_finite())
    }
}

/// Largest edge value of `v`, `ρ`, `ψ_x`, `ψ_z` relative to their largest
/// value anywhere; zero for the zero state.
pub fn edge_ratio<T: Real>(state: &FlowState<T>) -> T {
    let (px, pz) = state.psi.gradient();
    let fields = [&state.v, &state.rho, &px, &pz];
    let peak = fields.iter().fold(T::zero(), |m, f| m.max(f.max_abs()));
    if peak == T::zero() {
        return T::zero();
    }
    fields.iter().fold(T::zero(), |m, f| m.max(f.boundary_max_abs())) / peak
}

/// Quadratures of the five densities over the box.
///
/// Weighted densities are integrated with the closed-box trapezoidal rule,
/// which keeps the odd symmetry of `x`, `z` about the centre.
pub fn integral_invariants<T: Real>(state: &FlowState<T>, params: &PhysicalParams<T>) -> ConservedSet<T> {
    let v = LawId::ALL.map(|law| density_weighted(law, state, params).integrate());
    ConservedSet {
        t: state.t,
        i1: v[0],
        i2: v[1],
        i3: v[2],
        i4: v[3],
        i5: v[4],
        support_flag: edge_ratio(state) <= T::lit(SUPPORT_EDGE_TOL),
    }
}

/// Drift of one integral along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LawDrift {
    pub law: LawId,
    pub initial: f64,
    pub max_abs_change: f64,
    pub scale: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub t_start: f64,
    pub t_end: f64,
    pub laws: Vec<LawDrift>,
}

impl DriftReport {
    pub fn law(&self, law: LawId) -> &LawDrift {
        &self.laws[law.index()]
    }
}

/// Below this fraction of the initial energy, a law's own initial value is
/// replaced by the energy as the drift scale.
pub const DRIFT_FLOOR: f64 = 1e-12;

/// `max_t |I_k(t) − I_k(0)| / scale_k` for each law, with
/// `scale_k = |I_k(0)|`, or `I3(0)` when `|I_k(0)| < 1e-12·I3(0)`.
pub fn drift_report<T: Real>(trajectory: &[ConservedSet<T>]) -> Result<DriftReport> {
    let first = trajectory.first().ok_or(Error::EmptyTrajectory)?;
    let e0 = first.i3.to_f64_lossy().abs();
    let laws = LawId::ALL
        .iter()
        .map(|&law| {
            let initial = first.get(law).to_f64_lossy();
            let max_abs_change = trajectory
                .iter()
                .map(|s| (s.get(law).to_f64_lossy() - initial).abs())
                .fold(0.0, f64::max);
            let scale = if initial.abs() < DRIFT_FLOOR * e0 { e0 } else { initial.abs() };
            let relative = if max_abs_change == 0.0 {
                0.0
            } else if scale == 0.0 {
                f64::INFINITY
            } else {
                max_abs_change / scale
            };
            LawDrift {
                law,
                initial,
                max_abs_change,
                scale,
                relative,
            }
        })
        .collect();
    Ok(DriftReport {
        t_start: first.t.to_f64_lossy(),
        t_end: trajectory.last().map_or(0.0, |s| s.t.to_f64_lossy()),
        laws,
    })
}

/// Time for which the weighted integrals of a compactly supported state are
/// trusted: half the distance from the support to the box edge divided by a
/// speed estimate.
///
/// The speed is `max(N, |f|)/κ̄ + max|∇ψ|`, where `κ̄` is the energy-weighted
/// mean wavenumber (internal-wave group velocity is bounded by
/// `max(N, |f|)/κ`) and the second term covers advection. Returns zero when
/// the support already touches the edge and infinity for the zero state.
pub fn trust_horizon<T: Real>(state: &FlowState<T>, params: &PhysicalParams<T>) -> T {
    let spec = *state.grid().spec();
    let (px, pz) = state.psi.gradient();
    let fields = [&state.v, &state.rho, &px, &pz];
    let peak = fields.iter().fold(T::zero(), |m, f| m.max(f.max_abs()));
    if peak == T::zero() {
        return T::infinity();
    }
    let tol = T::lit(SUPPORT_EDGE_TOL) * peak;
    let (mut ex, mut ez) = (T::zero(), T::zero());
    for i in 0..spec.nx {
        for j in 0..spec.nz {
            if fields.iter().any(|f| f.at(i, j).abs() > tol) {
                ex = ex.max(spec.x(i).abs());
                ez = ez.max(spec.z(j).abs());
            }
        }
    }
    let half = T::lit(0.5);
    let distance = (spec.lx * half - ex).min(spec.lz * half - ez);
    if distance <= T::zero() {
        return T::zero();
    }
    let grid = state.grid();
    let wave_amp = params.g / params.n;
    let mut num = T::zero();
    let mut den = T::zero();
    for (f, w) in [(&state.v, T::one()), (&state.rho, wave_amp), (&px, T::one()), (&pz, T::one())] {
        let c = f.spectrum();
        for p in 0..spec.nx {
            for q in 0..spec.nz {
                let (kx, kz) = (grid.kx()[p], grid.kz()[q]);
                let k = (kx * kx + kz * kz).sqrt();
                if k > T::zero() {
                    let e = w * w * c[p * spec.nz + q].norm_sqr();
                    num += k * e;
                    den += e;
                }
            }
        }
    }
    let advect = (0..px.values().len())
        .map(|n| (px.values()[n].powi(2) + pz.values()[n].powi(2)).sqrt())
        .fold(T::zero(), T::max);
    let wave = if den > T::zero() {
        params.n.max(params.f.abs()) * den / num
    } else {
        T::zero()
    };
    let speed = wave + advect;
    if speed == T::zero() {
        T::infinity()
    } else {
        half * distance / speed
    }
}

/// Writes the invariant time series with columns `t, I1..I5, support_flag`.
pub fn write_invariants_csv<T: Real + Serialize, W: Write>(out: W, sets: &[ConservedSet<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in sets {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_invariants_csv<R: Read>(input: R) -> Result<Vec<ConservedSet<f64>>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// JSON-friendly view of a divergence residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub law: LawId,
    pub t: f64,
    pub max_residual: f64,
    pub l2_residual: f64,
}

impl<T: Real> DivergenceResidual<T> {
    pub fn record(&self) -> ResidualRecord {
        ResidualRecord {
            law: self.law,
            t: self.t.to_f64_lossy(),
            max_residual: self.max_residual.to_f64_lossy(),
            l2_residual: self.l2_residual.to_f64_lossy(),
        }
    }
}
