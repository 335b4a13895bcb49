use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{FlowState, PhysicalParams, Tendencies};
use crate::error::{Error, Result};
use crate::field::{ScalarField, Weighted};
use crate::scalar::Real;

/// The five nontrivial conservation laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LawId {
    /// `∫∫ v`
    VMean,
    /// `∫∫ ρ`
    RhoMean,
    /// `∫∫ v² + (g²/N²) ρ² + |∇ψ|²`
    Energy,
    /// `∫∫ f x v − g z ρ − ½|∇ψ|²`
    SemiDilation,
    /// `∫∫ v ρ + f x ρ − (N²/g) z v`
    Rotation,
}

impl LawId {
    pub const ALL: [LawId; 5] = [
        LawId::VMean,
        LawId::RhoMean,
        LawId::Energy,
        LawId::SemiDilation,
        LawId::Rotation,
    ];

    /// Column label of the integral, `I1` … `I5`.
    pub fn label(self) -> &'static str {
        match self {
            LawId::VMean => "I1",
            LawId::RhoMean => "I2",
            LawId::Energy => "I3",
            LawId::SemiDilation => "I4",
            LawId::Rotation => "I5",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LawId::VMean => "V_MEAN",
            LawId::RhoMean => "RHO_MEAN",
            LawId::Energy => "ENERGY",
            LawId::SemiDilation => "SEMI_DILATION",
            LawId::Rotation => "ROTATION",
        }
    }

    /// Whether the density carries the coordinates `x`, `z` explicitly.
    pub fn is_weighted(self) -> bool {
        matches!(self, LawId::SemiDilation | LawId::Rotation)
    }

    /// Whether the flux needs `ψ_xt`, `ψ_zt`.
    pub fn needs_tendencies(self) -> bool {
        matches!(self, LawId::Energy | LawId::SemiDilation)
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s.trim()) || l.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown conservation law '{s}'")))
    }
}

/// Density and flux components on one grid.
#[derive(Clone, Debug)]
pub struct DensityFluxSet<T: Real> {
    pub density: ScalarField<T>,
    pub flux_x: ScalarField<T>,
    pub flux_z: ScalarField<T>,
}

/// [`DensityFluxSet`] before the coordinate weights are evaluated, so that it
/// can be differentiated exactly.
#[derive(Clone, Debug)]
pub struct WeightedFluxSet<T: Real> {
    pub density: Weighted<T>,
    pub flux_x: Weighted<T>,
    pub flux_z: Weighted<T>,
}

impl<T: Real> WeightedFluxSet<T> {
    pub fn eval(&self) -> DensityFluxSet<T> {
        DensityFluxSet {
            density: self.density.eval(),
            flux_x: self.flux_x.eval(),
            flux_z: self.flux_z.eval(),
        }
    }

    /// `D_x C² + D_z C³`.
    pub fn divergence(&self) -> Weighted<T> {
        self.flux_x.ddx() + self.flux_z.ddz()
    }
}

/// Shorthand for building weighted expressions from state fields.
struct Terms<T: Real> {
    v: Weighted<T>,
    rho: Weighted<T>,
    psi: Weighted<T>,
    psi_x: Weighted<T>,
    psi_z: Weighted<T>,
    x: Weighted<T>,
    z: Weighted<T>,
}

impl<T: Real> Terms<T> {
    fn new(state: &FlowState<T>) -> Self {
        let grid = state.grid();
        let (px, pz) = state.psi.gradient();
        Self {
            v: Weighted::from(&state.v),
            rho: Weighted::from(&state.rho),
            psi: Weighted::from(&state.psi),
            psi_x: Weighted::from(px),
            psi_z: Weighted::from(pz),
            x: Weighted::x(grid),
            z: Weighted::z(grid),
        }
    }

    fn grad2(&self) -> Weighted<T> {
        &self.psi_x * &self.psi_x + &self.psi_z * &self.psi_z
    }
}

fn density_terms<T: Real>(law: LawId, s: &Terms<T>, params: &PhysicalParams<T>) -> Weighted<T> {
    match law {
        LawId::VMean => s.v.clone(),
        LawId::RhoMean => s.rho.clone(),
        LawId::Energy => &s.v * &s.v + (&s.rho * &s.rho).scale(params.g2_over_n2()) + s.grad2(),
        LawId::SemiDilation => {
            (&s.x * &s.v).scale(params.f) - (&s.z * &s.rho).scale(params.g) - s.grad2().scale(T::lit(0.5))
        }
        LawId::Rotation => {
            &s.v * &s.rho + (&s.x * &s.rho).scale(params.f) - (&s.z * &s.v).scale(params.n2_over_g())
        }
    }
}

/// Density of `law` in weighted form.
pub fn density_weighted<T: Real>(law: LawId, state: &FlowState<T>, params: &PhysicalParams<T>) -> Weighted<T> {
    density_terms(law, &Terms::new(state), params)
}

/// Pointwise density of `law`, with `x`, `z` the centred grid coordinates.
pub fn density<T: Real>(law: LawId, state: &FlowState<T>, params: &PhysicalParams<T>) -> ScalarField<T> {
    density_weighted(law, state, params).eval()
}

/// Density and flux of `law` in weighted form.
///
/// `tend` supplies `ψ_xt`, `ψ_zt` and is required for the energy and
/// semi-dilation laws.
pub fn flux_weighted<T: Real>(
    law: LawId,
    state: &FlowState<T>,
    tend: Option<&Tendencies<T>>,
    params: &PhysicalParams<T>,
) -> Result<WeightedFluxSet<T>> {
    if let Some(d) = tend {
        if !d.grid().same_as(state.grid()) {
            return Err(Error::GridMismatch);
        }
    }
    let s = Terms::new(state);
    let density = density_terms(law, &s, params);
    let (f, g) = (params.f, params.g);
    let (n2, n2g, g2n2) = (params.n * params.n, params.n2_over_g(), params.g2_over_n2());
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let psi_t_grad = || {
        tend.map(|d| {
            let (a, b) = d.psi_t_gradient();
            (Weighted::from(a), Weighted::from(b))
        })
        .ok_or(Error::MissingTendencies(law.name()))
    };
    let (flux_x, flux_z) = match law {
        LawId::VMean => (&s.v * &s.psi_z, s.psi.scale(f) - &s.v * &s.psi_x),
        LawId::RhoMean => (s.psi.scale(n2g) + &s.rho * &s.psi_z, -(&s.rho * &s.psi_x)),
        LawId::Energy => {
            let (pxt, pzt) = psi_t_grad()?;
            let wave = &s.v * &s.v + (&s.rho * &s.rho).scale(g2n2);
            let psi2 = &s.psi * &s.psi;
            let zeta = s.psi.laplacian();
            let cx = (&s.rho * &s.psi).scale(two * g) + &wave * &s.psi_z - (&s.psi * &pxt).scale(two)
                + &psi2 * &zeta.ddz();
            let cz = (&s.v * &s.psi).scale(two * f) - &wave * &s.psi_x - (&s.psi * &pzt).scale(two)
                - &psi2 * &zeta.ddx();
            (cx, cz)
        }
        LawId::SemiDilation => {
            let (pxt, pzt) = psi_t_grad()?;
            let psi2 = &s.psi * &s.psi;
            let zeta = s.psi.laplacian();
            let xpsi = &s.x * &s.psi;
            let zpsi = &s.z * &s.psi;
            let cx = -zpsi.scale(n2) - (&xpsi * &s.v.ddz()).scale(f) + (&zpsi * &s.rho.ddz()).scale(g)
                + &s.psi * &pxt
                - (&psi2 * &zeta.ddz()).scale(half);
            let cz = xpsi.scale(f * f) + (&xpsi * &s.v.ddx()).scale(f) - (&zpsi * &s.rho.ddx()).scale(g)
                + &s.psi * &pzt
                + (&psi2 * &zeta.ddx()).scale(half);
            (cx, cz)
        }
        LawId::Rotation => {
            // the f-terms carry x in C² and z in C³; this is what makes the
            // divergence vanish on solutions
            let q = density.clone();
            let cx = &q * &s.psi_z + (&s.x * &s.psi).scale(n2g * f);
            let cz = -(&q * &s.psi_x) - (&s.z * &s.psi).scale(n2g * f);
            (cx, cz)
        }
    };
    Ok(WeightedFluxSet {
        density,
        flux_x,
        flux_z,
    })
}

/// Density and flux components of `law` on the grid.
pub fn flux<T: Real>(
    law: LawId,
    state: &FlowState<T>,
    tend: Option<&Tendencies<T>>,
    params: &PhysicalParams<T>,
) -> Result<DensityFluxSet<T>> {
    Ok(flux_weighted(law, state, tend, params)?.eval())
}

/// `D_t` of the density by the product rule from the tendencies.
pub fn density_rate<T: Real>(
    law: LawId,
    state: &FlowState<T>,
    tend: &Tendencies<T>,
    params: &PhysicalParams<T>,
) -> Result<Weighted<T>> {
    if !tend.grid().same_as(state.grid()) {
        return Err(Error::GridMismatch);
    }
    let s = Terms::new(state);
    let v_t = Weighted::from(&tend.dv_dt);
    let rho_t = Weighted::from(&tend.drho_dt);
    let (a, b) = tend.psi_t_gradient();
    let grad_dot = &s.psi_x * &Weighted::from(a) + &s.psi_z * &Weighted::from(b);
    let two = T::lit(2.0);
    Ok(match law {
        LawId::VMean => v_t,
        LawId::RhoMean => rho_t,
        LawId::Energy => {
            (&s.v * &v_t).scale(two) + (&s.rho * &rho_t).scale(two * params.g2_over_n2()) + grad_dot.scale(two)
        }
        LawId::SemiDilation => (&s.x * &v_t).scale(params.f) - (&s.z * &rho_t).scale(params.g) - grad_dot,
        LawId::Rotation => {
            &v_t * &s.rho + &s.v * &rho_t + (&s.x * &rho_t).scale(params.f)
                - (&s.z * &v_t).scale(params.n2_over_g())
        }
    })
}

/// One stored time level: the state and the tendencies recorded with it.
#[derive(Clone, Debug)]
pub struct Snapshot<T: Real> {
    pub state: FlowState<T>,
    pub tend: Tendencies<T>,
}

/// How `D_t` of the density is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDerivative {
    /// Product rule with the stored tendencies of the centre snapshot.
    ProductRule,
    /// Three-point difference of the densities of neighbouring snapshots.
    SnapshotDifference,
}

/// Residual of `D_t C^t + D_x C² + D_z C³` at the centre of a window.
#[derive(Clone, Debug)]
pub struct DivergenceResidual<T: Real> {
    pub law: LawId,
    pub t: T,
    pub max_residual: T,
    /// `(∫∫ r²)^½` over the box.
    pub l2_residual: T,
    pub field: ScalarField<T>,
}

/// Evaluates the differential form of `law` at the centre snapshot of
/// `window` (at least three consecutive stored levels).
pub fn divergence_residual<T: Real>(
    law: LawId,
    window: &[Snapshot<T>],
    params: &PhysicalParams<T>,
    mode: TimeDerivative,
) -> Result<DivergenceResidual<T>> {
    if window.len() < 3 {
        return Err(Error::InconsistentTrajectory(format!(
            "divergence window needs at least 3 snapshots (got {})",
            window.len()
        )));
    }
    let grid = window[0].state.grid();
    for s in window {
        if !s.state.grid().same_as(grid) || !s.tend.grid().same_as(grid) {
            return Err(Error::GridMismatch);
        }
    }
    if window.windows(2).any(|w| w[1].state.t.partial_cmp(&w[0].state.t) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InconsistentTrajectory("snapshot times must increase".into()));
    }
    let c = window.len() / 2;
    let centre = &window[c];
    let set = flux_weighted(law, &centre.state, Some(&centre.tend), params)?;
    let rate = match mode {
        TimeDerivative::ProductRule => density_rate(law, &centre.state, &centre.tend, params)?.eval(),
        TimeDerivative::SnapshotDifference => {
            let (t0, t1, t2) = (window[c - 1].state.t, centre.state.t, window[c + 1].state.t);
            let (h1, h2) = (t1 - t0, t2 - t1);
            let d0 = density(law, &window[c - 1].state, params);
            let d1 = set.density.eval();
            let d2 = density(law, &window[c + 1].state, params);
            let w0 = -h2 / (h1 * (h1 + h2));
            let w1 = (h2 - h1) / (h1 * h2);
            let w2 = h1 / (h2 * (h1 + h2));
            &(&d0.scale(w0) + &d1.scale(w1)) + &d2.scale(w2)
        }
    };
    let field = &rate + &set.divergence().eval();
    Ok(DivergenceResidual {
        law,
        t: centre.state.t,
        max_residual: field.max_abs(),
        l2_residual: field.map(|r| r * r).integrate().sqrt(),
        field,
    })
}
