use std::f64::consts::TAU;
use std::sync::Arc;

use super::*;
use crate::field::{Grid, GridSpec, ScalarField};

fn params() -> PhysicalParams<f64> {
    PhysicalParams::new(0.5, 1.0, 9.81).unwrap()
}

fn grid(n: usize) -> Arc<Grid<f64>> {
    Grid::new(GridSpec::periodic_2pi(n).unwrap()).unwrap()
}

fn wave(p: &PhysicalParams<f64>) -> InvariantSolutionSpec<f64> {
    InvariantSolutionSpec::with_dispersion(1.0, 2.0, TrigProfile::sin(1.0), TrigProfile::cos(0.5), p).unwrap()
}

fn max_state_diff(a: &FlowState<f64>, b: &FlowState<f64>) -> f64 {
    a.v.max_abs_diff(&b.v)
        .max(a.rho.max_abs_diff(&b.rho))
        .max(a.psi.max_abs_diff(&b.psi))
}

#[test]
fn params_validation() {
    assert!(PhysicalParams::new(0.0, 1.0, 9.81).is_ok());
    assert!(PhysicalParams::new(1.0, 0.0, 9.81).is_err());
    assert!(PhysicalParams::new(1.0, 1.0, -1.0).is_err());
    assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0).is_err());
}

#[test]
fn zero_state_has_zero_tendencies() {
    let s = FlowState::zeros(&grid(16), 0.0);
    let t = tendencies(&s, &params()).unwrap();
    assert_eq!(t.max_abs(), 0.0);
}

#[test]
fn constant_fields_are_steady() {
    let g = grid(16);
    let s = FlowState::from_psi(
        0.0,
        ScalarField::constant(&g, 1.3),
        ScalarField::constant(&g, -0.7),
        ScalarField::zeros(&g),
    )
    .unwrap();
    assert!(tendencies(&s, &params()).unwrap().max_abs() < 1e-14);
}

#[test]
fn tendencies_match_analytic_time_derivatives() {
    let p = params();
    let g = grid(128);
    let spec = wave(&p);
    let s = invariant_solution(&spec, &p, &g, 0.0).unwrap();
    let num = tendencies(&s, &p).unwrap();
    let exact = spec.analytic_tendencies(&p, &g, 0.0).unwrap();
    assert!(num.dv_dt.max_abs_diff(&exact.dv_dt) <= 1e-8);
    assert!(num.drho_dt.max_abs_diff(&exact.drho_dt) <= 1e-8);
    assert!(num.dzeta_dt.max_abs_diff(&exact.dzeta_dt) <= 1e-8);
    assert!(num.dpsi_dt.max_abs_diff(&exact.dpsi_dt) <= 1e-8);
}

#[test]
fn tendency_invariants() {
    let p = params();
    let g = grid(32);
    let s = random_state(
        &g,
        &RandomSpec {
            max_mode: 5,
            rms_v: 0.3,
            rms_rho: 0.02,
            rms_psi: 0.2,
            seed: 7,
        },
        0.0,
    )
    .unwrap();
    let t = tendencies(&s, &p).unwrap();
    assert!(t.dpsi_dt.mean().abs() < 1e-15);
    assert!(t.dpsi_dt.laplacian().max_abs_diff(&t.dzeta_dt) <= 1e-10);
    // discrete form of the mean laws
    assert!(t.dv_dt.mean().abs() <= 1e-11);
    assert!(t.drho_dt.mean().abs() <= 1e-11);
}

#[test]
fn tendencies_are_shift_equivariant() {
    let p = params();
    let g = grid(32);
    let s = random_state(
        &g,
        &RandomSpec {
            max_mode: 5,
            rms_v: 0.3,
            rms_rho: 0.02,
            rms_psi: 0.2,
            seed: 8,
        },
        0.0,
    )
    .unwrap();
    let base = tendencies(&s, &p).unwrap();
    for (dv, drho) in [(2.5, 0.0), (0.0, -1.25)] {
        let mut shifted = s.clone();
        shifted.v = shifted.v.map(|x| x + dv);
        shifted.rho = shifted.rho.map(|x| x + drho);
        let t = tendencies(&shifted, &p).unwrap();
        assert!(t.dv_dt.max_abs_diff(&base.dv_dt) < 1e-13);
        assert!(t.drho_dt.max_abs_diff(&base.drho_dt) < 1e-13);
        assert!(t.dzeta_dt.max_abs_diff(&base.dzeta_dt) < 1e-13);
    }
}

#[test]
fn invariant_solution_at_time_zero() {
    let p = params();
    let g = grid(32);
    let spec = InvariantSolutionSpec::with_dispersion(1.0, 2.0, TrigProfile::sin(1.0), TrigProfile::zero(), &p).unwrap();
    let s = invariant_solution(&spec, &p, &g, 0.0).unwrap();
    let want = ScalarField::from_fn(&g, |x, z| (x + 2.0 * z).sin()).unwrap();
    assert!(s.psi.max_abs_diff(&want) < 1e-14);
    assert!(s.v.max_abs() < 1e-15);
    assert!(s.rho.max_abs() < 1e-15);
    s.validate().unwrap();
}

#[test]
fn dispersion_relation_is_confirmed_by_substitution() {
    let p = params();
    let g = grid(128);
    let spec = wave(&p);
    let w2 = spec.omega * spec.omega;
    assert!((w2 - (1.0 * 1.0 + 0.25 * 4.0) / 5.0).abs() < 1e-15);
    let s = invariant_solution(&spec, &p, &g, 0.3).unwrap();
    let exact = spec.analytic_tendencies(&p, &g, 0.3).unwrap();
    let r = pde_residual(&s, &p, ResidualMode::Oracle(&exact)).unwrap();
    assert!(r.max_abs() <= 1e-8, "residual {:e}", r.max_abs());

    // off the dispersion relation the vorticity equation is violated
    let off = InvariantSolutionSpec::with_frequency(1.0, 2.0, 1.1 * spec.omega, TrigProfile::sin(1.0), TrigProfile::cos(0.5)).unwrap();
    let s = invariant_solution(&off, &p, &g, 0.3).unwrap();
    let exact = off.analytic_tendencies(&p, &g, 0.3).unwrap();
    assert!(pde_residual(&s, &p, ResidualMode::Oracle(&exact)).unwrap().max_abs() > 1e-2);
}

#[test]
fn horizontal_wave_needs_buoyancy_frequency() {
    let p = params();
    let g = grid(32);
    let residual_for = |omega: f64| {
        let spec = InvariantSolutionSpec::with_frequency(1.0, 0.0, omega, TrigProfile::sin(1.0), TrigProfile::cos(0.3)).unwrap();
        let s = invariant_solution(&spec, &p, &g, 0.4).unwrap();
        let exact = spec.analytic_tendencies(&p, &g, 0.4).unwrap();
        pde_residual(&s, &p, ResidualMode::Oracle(&exact)).unwrap().max_abs()
    };
    assert!(residual_for(p.n) < 1e-12);
    assert!(residual_for(0.9 * p.n) > 1e-3);
    assert!((dispersion_omega(1.0, 0.0, &p) - p.n).abs() < 1e-15);
}

#[test]
fn non_integer_wavenumbers_are_rejected() {
    let p = params();
    let spec = InvariantSolutionSpec::with_dispersion(1.5, 2.0, TrigProfile::sin(1.0), TrigProfile::zero(), &p).unwrap();
    assert!(matches!(
        invariant_solution(&spec, &p, &grid(16), 0.0),
        Err(crate::Error::Periodicity(_))
    ));
    assert!(InvariantSolutionSpec::with_dispersion(0.0, 0.0, TrigProfile::sin(1.0), TrigProfile::zero(), &p).is_err());
}

#[test]
fn trig_profile_derivatives() {
    let prof: TrigProfile<f64> = TrigProfile {
        harmonics: vec![
            Harmonic { j: 1, sin: 0.3, cos: -1.0 },
            Harmonic { j: 3, sin: 0.5, cos: 0.25 },
        ],
    };
    let h = 1e-4;
    for order in 0..4 {
        let lam = 0.77;
        let fd = (prof.derivative(lam + h, order) - prof.derivative(lam - h, order)) / (2.0 * h);
        assert!((fd - prof.derivative(lam, order + 1)).abs() < 1e-6 * 27.0);
    }
}

#[test]
fn zero_state_is_a_fixed_point() {
    let s = FlowState::zeros(&grid(16), 0.0);
    let next = step_rk4(&s, 0.37, &params()).unwrap();
    assert_eq!(max_state_diff(&s, &next), 0.0);
    assert!((next.t - 0.37).abs() < 1e-15);
}

#[test]
fn step_rejects_bad_dt() {
    let s = FlowState::zeros(&grid(16), 0.0);
    assert!(step_rk4(&s, 0.0, &params()).is_err());
    assert!(step_rk4(&s, f64::NAN, &params()).is_err());
}

#[test]
fn instability_is_reported_with_time() {
    let g = grid(16);
    let mut s = FlowState::zeros(&g, 2.0);
    s.v = ScalarField::from_fn(&g, |x, _| 1e300 * x.sin()).unwrap();
    s.psi = ScalarField::from_fn(&g, |_, z| 1e300 * z.sin()).unwrap();
    s.zeta = s.psi.laplacian();
    match step_rk4(&s, 1.0, &params()) {
        Err(crate::Error::Instability { t, .. }) => assert!(t >= 2.0),
        other => panic!("expected instability, got {other:?}"),
    }
}

fn run_to(spec: &InvariantSolutionSpec<f64>, p: &PhysicalParams<f64>, g: &Arc<Grid<f64>>, dt: f64, t_end: f64) -> FlowState<f64> {
    let s = invariant_solution(spec, p, g, 0.0).unwrap();
    let steps = (t_end / dt).round() as usize;
    integrate(s, dt, steps, steps, p, |_| Ok(())).unwrap()
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let p = params();
    let g = grid(32);
    let spec = wave(&p);
    let exact = invariant_solution(&spec, &p, &g, 1.0).unwrap();
    let errs: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&dt| max_state_diff(&run_to(&spec, &p, &g, dt, 1.0), &exact))
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}, errors {errs:?}");
    }
}

#[test]
fn richardson_local_error_is_fifth_order() {
    let p = params();
    let g = grid(32);
    let spec = wave(&p);
    let s = invariant_solution(&spec, &p, &g, 0.0).unwrap();
    let local = |dt: f64| {
        let full = step_rk4(&s, dt, &p).unwrap();
        let half = step_rk4(&step_rk4(&s, dt / 2.0, &p).unwrap(), dt / 2.0, &p).unwrap();
        max_state_diff(&full, &half)
    };
    let (a, b) = (local(0.4), local(0.2));
    let ratio = a / b;
    assert!((24.0..=40.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn stable_dt_takes_the_tighter_limit() {
    let p = params();
    let g = grid(32);
    let still = FlowState::zeros(&g, 0.0);
    assert!((stable_dt(&still, &p) - 0.5 / 1.0).abs() < 1e-15);
    let psi = ScalarField::from_fn(&g, |x, _| 3.0 * x.sin()).unwrap();
    let s = FlowState::from_psi(0.0, ScalarField::zeros(&g), ScalarField::zeros(&g), psi).unwrap();
    let want = 0.5 * (TAU / 32.0) / 3.0;
    assert!((stable_dt(&s, &p) - want).abs() < 1e-12);
}

#[test]
fn gaussian_ic_cases() {
    let g = grid(128);
    let spec = GaussianSpec {
        center: (0.0, 0.0),
        width: TAU / 10.0,
        amp_v: 0.0,
        amp_rho: 0.0,
        amp_psi: 0.0,
    };
    let s = gaussian_ic(&g, &spec, 0.0).unwrap();
    assert_eq!(max_state_diff(&s, &FlowState::zeros(&g, 0.0)), 0.0);

    let spec = GaussianSpec {
        amp_v: 0.8,
        amp_rho: -0.05,
        amp_psi: 0.3,
        ..spec
    };
    let s = gaussian_ic(&g, &spec, 0.0).unwrap();
    assert!(s.v.boundary_max_abs() <= 1e-12);
    assert!(s.rho.boundary_max_abs() <= 1e-12);
    assert!(s.psi.mean().abs() < 1e-15);
    assert!((s.v.integrate() - 0.8 * spec.bump_integral()).abs() <= 1e-9);

    let wide = GaussianSpec {
        width: TAU / 7.0,
        ..spec
    };
    assert!(matches!(gaussian_ic(&g, &wide, 0.0), Err(crate::Error::Support(_))));
    let off = GaussianSpec {
        center: (3.0, 0.0),
        ..spec
    };
    assert!(matches!(gaussian_ic(&g, &off, 0.0), Err(crate::Error::Support(_))));
}

#[test]
fn residual_detectors() {
    let p = params();
    let g = grid(32);
    let zero = FlowState::zeros(&g, 0.0);
    let none = Tendencies::zeros(&g);
    assert_eq!(pde_residual(&zero, &p, ResidualMode::Oracle(&none)).unwrap().max_abs(), 0.0);

    let s = random_state(
        &g,
        &RandomSpec {
            max_mode: 4,
            rms_v: 0.5,
            rms_rho: 0.05,
            rms_psi: 0.5,
            seed: 99,
        },
        0.0,
    )
    .unwrap();
    let r = pde_residual(&s, &p, ResidualMode::Oracle(&none)).unwrap();
    assert!(r.rms() > 1e-3);
    let r = pde_residual(&s, &p, ResidualMode::SelfConsistent).unwrap();
    assert!(r.max_abs() < 1e-12);

    let other = Tendencies::zeros(&grid(16));
    assert!(matches!(
        pde_residual(&s, &p, ResidualMode::Oracle(&other)),
        Err(crate::Error::ModeMismatch(_))
    ));
}

#[test]
fn checkpoint_round_trip() {
    let p = params();
    let g = Grid::new(GridSpec::new(16, 8, 3.0, 2.0).unwrap()).unwrap();
    let s = random_state(
        &g,
        &RandomSpec {
            max_mode: 2,
            rms_v: 1.0,
            rms_rho: 1.0,
            rms_psi: 1.0,
            seed: 1,
        },
        1.25,
    )
    .unwrap();
    let mut buf = Vec::new();
    write_checkpoint(&s, &p, &mut buf).unwrap();
    assert_eq!(buf.len(), CHECKPOINT_HEADER_LEN + 4 * (32 + 8 * 128));
    let (back, bp) = read_checkpoint::<f64, _>(buf.as_slice()).unwrap();
    assert_eq!(bp, p);
    assert_eq!(back.t, 1.25);
    assert_eq!(back.zeta.values(), s.zeta.values());
    assert_eq!(back.psi.values(), s.psi.values());
    buf[1] = 0;
    assert!(read_checkpoint::<f64, _>(buf.as_slice()).is_err());
}

#[test]
fn single_precision_step_runs() {
    let p = PhysicalParams::<f32>::new(0.5, 1.0, 9.81).unwrap();
    let g: Arc<Grid<f32>> = Grid::new(GridSpec::periodic_2pi(16).unwrap()).unwrap();
    let spec = InvariantSolutionSpec::with_dispersion(1.0, 1.0, TrigProfile::sin(1.0), TrigProfile::zero(), &p).unwrap();
    let s = invariant_solution(&spec, &p, &g, 0.0).unwrap();
    let next = step_rk4(&s, 0.05, &p).unwrap();
    let exact = invariant_solution(&spec, &p, &g, 0.05).unwrap();
    assert!(next.psi.max_abs_diff(&exact.psi) < 1e-5);
}
