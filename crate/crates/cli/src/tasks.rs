//! The five tasks. Each one fills a [`Report`] and writes its artifacts into
//! the output directory.

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::Path;
use std::sync::Arc;

use igw_lab::conservation::{
    divergence_residual, drift_report, integral_invariants, jacobian_identity_check, rotation_density_assembly_check,
    semi_dilation_reduction_check, trust_horizon, write_invariants_csv, ConservedSet, IdentityFields, JacobianIdentity,
    LawId, Snapshot, TimeDerivative,
};
use igw_lab::dynamics::{
    gaussian_ic, invariant_solution, pde_residual, random_state, read_checkpoint, stable_dt, step_rk4, tendencies,
    write_checkpoint, FlowState, RandomSpec, ResidualMode,
};
use igw_lab::field::{Grid, ScalarField};
use igw_lab::symmetry::{
    characteristics, displacement_identity_residuals, first_order_check, raw_density, semi_dilation_expanded_density,
    solution_map_check, transform_point, ClosedForm, Generator, Point,
};
use igw_lab::{Error, GridSpec64, Params64, State64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, InitialConfig, Issue, RunConfig, Task};
use crate::report::{Abort, Check, Report, RunInfo};

/// Why a run could not produce a verdict.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Io(io::Error),
    /// The numerics failed; a partial report may still have been written.
    Numerical(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => e.fmt(f),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
            RunError::Numerical(e) => write!(f, "numerical abort: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => RunError::Io(e),
            Error::Csv(e) => RunError::Io(io::Error::other(e)),
            other => RunError::Numerical(other),
        }
    }
}

fn config_error(field: &str, message: String) -> RunError {
    RunError::Config(ConfigError {
        issues: vec![Issue {
            field: field.into(),
            message,
        }],
    })
}

/// Runs the configured task. `Ok` carries the report (already on disk);
/// whether it passed is in `report.passed`.
pub fn run(cfg: &RunConfig) -> Result<Report, RunError> {
    fs::create_dir_all(&cfg.output.dir)?;
    let mut report = Report::new(cfg);
    let outcome = match cfg.task {
        Task::Simulate => simulate(cfg, &mut report),
        Task::VerifyIdentities => verify_identities(cfg, &mut report),
        Task::VerifySymmetry => verify_symmetry(cfg, &mut report),
        Task::VerifyLaws => verify_laws(cfg, &mut report),
        Task::ExactSolution => exact_solution(cfg, &mut report),
    };
    match outcome {
        Ok(()) => {
            report.finish();
            report.write(&cfg.output.dir)?;
            Ok(report)
        }
        Err(RunError::Numerical(e)) => {
            report.abort = Some(Abort {
                t: match &e {
                    Error::Instability { t, .. } => *t,
                    _ => f64::NAN,
                },
                detail: e.to_string(),
            });
            report.finish();
            report.write(&cfg.output.dir)?;
            Err(RunError::Numerical(e))
        }
        Err(e) => Err(e),
    }
}

fn grid(cfg: &RunConfig) -> Result<Arc<Grid<f64>>, RunError> {
    let spec = cfg.grid_spec();
    spec.validate()?;
    Ok(Grid::new(spec)?)
}

fn params(cfg: &RunConfig) -> Result<Params64, RunError> {
    let p = cfg.physical();
    p.validate()?;
    Ok(p)
}

/// The configured initial state at `t = 0`.
pub fn initial_state(cfg: &RunConfig, g: &Arc<Grid<f64>>) -> Result<State64, RunError> {
    let p = params(cfg)?;
    let state = match &cfg.initial {
        InitialConfig::Invariant { .. } => {
            let wave = cfg.wave().ok_or_else(|| config_error("initial", "invalid invariant solution".into()))?;
            invariant_solution(&wave, &p, g, 0.0)?
        }
        InitialConfig::Gaussian { .. } => {
            let spec = cfg.gaussian().expect("gaussian initial condition");
            gaussian_ic(g, &spec, 0.0).map_err(|e| config_error("initial", e.to_string()))?
        }
        InitialConfig::Random { .. } => random_state(g, &cfg.random().expect("random initial condition"), 0.0)?,
        InitialConfig::Zero => FlowState::zeros(g, 0.0),
        InitialConfig::File { path } => {
            let file = File::open(path).map_err(|e| config_error("initial.path", format!("{}: {e}", path.display())))?;
            let (state, _): (State64, Params64) = read_checkpoint(io::BufReader::new(file))
                .map_err(|e| config_error("initial.path", format!("{}: {e}", path.display())))?;
            if *state.grid().spec() != *g.spec() {
                return Err(config_error(
                    "initial.path",
                    format!("checkpoint grid {:?} differs from the configured grid", state.grid().spec()),
                ));
            }
            state
        }
    };
    Ok(state)
}

fn write_csv(dir: &Path, sets: &[ConservedSet<f64>]) -> Result<(), RunError> {
    let file = File::create(dir.join("invariants.csv"))?;
    write_invariants_csv(BufWriter::new(file), sets)?;
    Ok(())
}

fn write_state(dir: &Path, name: &str, state: &State64, p: &Params64) -> Result<(), RunError> {
    let file = File::create(dir.join(name))?;
    write_checkpoint(state, p, BufWriter::new(file))?;
    Ok(())
}

fn simulate(cfg: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let g = grid(cfg)?;
    let p = params(cfg)?;
    let tol = &cfg.tolerances;
    let dir = &cfg.output.dir;
    let mut state = initial_state(cfg, &g)?;
    let bound = stable_dt(&state, &p);
    let dt_max = match cfg.time.dt {
        Some(dt) if dt > bound => {
            return Err(config_error(
                "time.dt",
                format!("dt = {dt} exceeds the CFL bound {bound} of the initial state"),
            ))
        }
        Some(dt) => dt,
        None => 0.5 * bound,
    };
    let t_end = cfg.time.t_end;
    let steps = (t_end / dt_max).ceil().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let horizon = trust_horizon(&state, &p);
    report.run = Some(RunInfo {
        dt,
        steps,
        t_end,
        trust_horizon: horizon,
    });

    let stride = cfg.time.stride;
    let every = cfg.time.checkpoint_every;
    let mut sets = vec![integral_invariants(&state, &p)];
    if every > 0 {
        write_state(dir, &checkpoint_name(0), &state, &p)?;
    }
    let mut failure = None;
    for n in 1..=steps {
        match step_rk4(&state, dt, &p) {
            Ok(mut next) => {
                next.t = n as f64 * dt;
                state = next;
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        if n % stride == 0 || n == steps {
            sets.push(integral_invariants(&state, &p));
        }
        if (every > 0 && n % every == 0) || n == steps {
            write_state(dir, &checkpoint_name(n), &state, &p)?;
        }
    }
    write_csv(dir, &sets)?;
    if let Some(e) = failure {
        // `state` is the last finite one
        let last = ((state.t / dt).round() as usize).min(steps);
        write_state(dir, &checkpoint_name(last), &state, &p)?;
        report.drift = drift_report(&sets).ok();
        return Err(e.into());
    }
    let drift = drift_report(&sets)?;

    for (law, tolerance) in [
        (LawId::VMean, tol.mean_drift),
        (LawId::RhoMean, tol.mean_drift),
        (LawId::Energy, tol.energy_drift),
    ] {
        report.push(Check::at_most(
            format!("{} ({}) relative drift", law.label(), law.name()),
            drift.law(law).relative,
            tolerance,
        ));
    }
    let supported = sets[0].support_flag;
    let within: Vec<_> = sets.iter().copied().filter(|s| s.t <= horizon).collect();
    let weighted = drift_report(&within).ok();
    for law in [LawId::SemiDilation, LawId::Rotation] {
        let name = format!("{} ({}) relative drift within the trust horizon", law.label(), law.name());
        let measured = weighted.as_ref().map_or(f64::NAN, |w| w.law(law).relative);
        report.push(if !supported {
            Check::skipped(
                name,
                measured,
                tol.weighted_drift,
                "initial fields reach the boundary; weighted integrals are not conserved on the periodic box",
            )
        } else if within.len() < 2 {
            Check::skipped(name, measured, tol.weighted_drift, "trust horizon shorter than one output stride")
        } else {
            Check::at_most(name, measured, tol.weighted_drift)
        });
    }
    report.drift = Some(drift);
    Ok(())
}

fn checkpoint_name(step: usize) -> String {
    format!("checkpoint_{step:06}.swc")
}

fn verify_identities(cfg: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let g = grid(cfg)?;
    let p = params(cfg)?;
    let tol = cfg.tolerances.identity;
    let mut worst = [0.0f64; 9];
    for i in 0..cfg.identities.fields {
        let spec = RandomSpec {
            max_mode: cfg.identities.max_mode,
            rms_v: 1.0,
            rms_rho: 0.2,
            rms_psi: 0.3,
            seed: cfg.seed.wrapping_add(i as u64),
        };
        let state = random_state(&g, &spec, 0.0)?;
        let tend = tendencies(&state, &p)?;
        let fields = IdentityFields::from(&state);
        let mut r = [0.0f64; 9];
        for (k, which) in JacobianIdentity::ALL.into_iter().enumerate() {
            r[k] = jacobian_identity_check(which, &fields)?;
        }
        let [d1, d2] = displacement_identity_residuals(&state, &p);
        r[4] = d1;
        r[5] = d2;
        let x8 = Generator::basic(igw_lab::symmetry::GeneratorId::X8, p)?;
        let raw = raw_density(&state, &characteristics(&x8, &state, &tend)?, &p)?;
        r[6] = raw.max_abs_diff(&semi_dilation_expanded_density(&state, &tend, &p)?);
        r[7] = semi_dilation_reduction_check(&state, &tend, &p)?;
        r[8] = rotation_density_assembly_check(&state, &tend, &p)?;
        for (w, v) in worst.iter_mut().zip(r) {
            *w = if v.is_nan() { f64::NAN } else { w.max(v) };
        }
    }
    let names = [
        "jacobian identity (a): vJ(psi,rho) + rhoJ(psi,v) = D_z(v rho psi_x) - D_x(v rho psi_z)",
        "jacobian identity (b): xJ(psi,rho) - rho psi_z = D_z(x rho psi_x) - D_x(x rho psi_z)",
        "jacobian identity (c): zJ(psi,v) + v psi_x = D_z(z v psi_x) - D_x(z v psi_z)",
        "jacobian identity (d): z psi_z - x psi_x = D_z(z psi) - D_x(x psi)",
        "displacement identity for v^2 + (g^2/N^2) rho^2",
        "displacement identity for |grad psi|^2",
        "X8 conserved-vector density equals its expanded form",
        "reduced X8 density equals 2P - 2E",
        "rotation density rate equals the substituted equations of motion",
    ];
    for (name, w) in names.iter().zip(worst) {
        report.push(
            Check::at_most(*name, w, tol).with_note(format!("max over {} random states", cfg.identities.fields)),
        );
    }
    Ok(())
}

fn sample_point(rng: &mut ChaCha8Rng, spec: &GridSpec64) -> Point<f64> {
    Point {
        t: rng.gen_range(-1.0..1.0),
        x: rng.gen_range(-0.5..0.5) * spec.lx,
        z: rng.gen_range(-0.5..0.5) * spec.lz,
        v: rng.gen_range(-1.0..1.0),
        rho: rng.gen_range(-1.0..1.0),
        psi: rng.gen_range(-1.0..1.0),
    }
}

fn point_distance(a: &Point<f64>, b: &Point<f64>) -> f64 {
    [a.t - b.t, a.x - b.x, a.z - b.z, a.v - b.v, a.rho - b.rho, a.psi - b.psi]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
}

fn verify_symmetry(cfg: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let g = grid(cfg)?;
    let p = params(cfg)?;
    let tol = &cfg.tolerances;
    let sym = &cfg.symmetry;
    let id = cfg.generator_id();
    let gen = Generator::new(id, cfg.time_profile(), p).map_err(|e| config_error("symmetry", e.to_string()))?;
    let eps = sym.eps;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut round_trip, mut composition) = (0.0f64, 0.0f64);
    for _ in 0..sym.samples {
        let q = sample_point(&mut rng, g.spec());
        let there = transform_point(&gen, eps, q)?;
        round_trip = round_trip.max(point_distance(&transform_point(&gen, -eps, there)?, &q));
        let split = transform_point(&gen, 0.5 * eps, transform_point(&gen, 0.5 * eps, q)?)?;
        composition = composition.max(point_distance(&split, &there));
    }
    let note = format!("{} random points, eps = {eps}", sym.samples);
    report.push(Check::at_most(format!("{id} round trip exp(-eps X) exp(eps X) = id"), round_trip, tol.group).with_note(note.clone()));
    report.push(
        Check::at_most(format!("{id} composition exp(eps/2 X) exp(eps/2 X) = exp(eps X)"), composition, tol.group)
            .with_note(note),
    );

    if let Some(wave) = cfg.wave() {
        let lattice = GridSpec64::new(sym.lattice, sym.lattice, g.spec().lx, g.spec().lz)?;
        let period = wave.period();
        let times = [0.0, 0.3 * period];
        let r = solution_map_check(&gen, eps, ClosedForm::new(wave, p), &lattice, &times)?;
        report.push(
            Check::at_most(format!("{id} image of the invariant solution satisfies the equations"), r.max_residual, tol.solution_map)
                .with_note(format!("{} lattice points x {} times", sym.lattice * sym.lattice, times.len())),
        );
    } else {
        report.push(Check::skipped(
            format!("{id} image of the invariant solution satisfies the equations"),
            f64::NAN,
            tol.solution_map,
            "initial condition is not the closed-form solution",
        ));
    }

    let state = initial_state(cfg, &g)?;
    let first = first_order_check(&gen, &sym.first_order_eps, &state, &p)?;
    let largest = first.residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    let scale = 1.0f64.max(state.v.max_abs()).max(state.rho.max_abs()).max(state.zeta.max_abs());
    let floor = 1e-10 * scale;
    let name = format!("{id} first-order residual of u + eps W scales like eps^2");
    report.push(if largest <= floor {
        Check::at_most(name, largest, floor).with_note("residual at round-off for every eps; no slope to fit")
    } else {
        Check::at_least(name, first.fitted_order, tol.first_order_order).with_note(format!(
            "eps = {:?}, residuals = {:?}",
            first.eps, first.residuals
        ))
    });
    Ok(())
}

fn verify_laws(cfg: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let g = grid(cfg)?;
    let p = params(cfg)?;
    let wave = cfg.wave().ok_or_else(|| config_error("initial.kind", "needs the invariant solution".into()))?;
    let (t, h) = (cfg.laws.t, cfg.laws.h);
    let mut window = Vec::new();
    for s in [t - h, t, t + h] {
        window.push(Snapshot {
            state: invariant_solution(&wave, &p, &g, s)?,
            tend: wave.analytic_tendencies(&p, &g, s)?,
        });
    }
    let sets: Vec<_> = window.iter().map(|s| integral_invariants(&s.state, &p)).collect();
    write_csv(&cfg.output.dir, &sets)?;
    for law in LawId::ALL {
        let r = divergence_residual(law, &window, &p, TimeDerivative::ProductRule)?;
        report.push(Check::at_most(
            format!("{} ({}) divergence residual", law.label(), law.name()),
            r.max_residual,
            cfg.tolerances.law_residual,
        ));
        report.residuals.push(r.record());
    }
    Ok(())
}

fn exact_solution(cfg: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let g = grid(cfg)?;
    let p = params(cfg)?;
    let tol = &cfg.tolerances;
    let wave = cfg.wave().ok_or_else(|| config_error("initial.kind", "needs the invariant solution".into()))?;
    let period = wave.period();
    let mut sets = Vec::new();
    for (i, &frac) in cfg.exact.period_fractions.iter().enumerate() {
        let t = frac * period;
        let state = invariant_solution(&wave, &p, &g, t)?;
        let tend = wave.analytic_tendencies(&p, &g, t)?;
        let r = pde_residual(&state, &p, ResidualMode::Oracle(&tend))?;
        report.push(Check::at_most(format!("PDE residual at t = {frac} T"), r.max_abs(), tol.pde_residual));
        let numeric = igw_lab::conservation::density(LawId::SemiDilation, &state, &p);
        let closed = ScalarField::from_fn(&g, |x, z| wave.semi_dilation_density(&p, t, x, z))?;
        report.push(Check::at_most(
            format!("semi-dilation density P against its closed form at t = {frac} T"),
            numeric.max_abs_diff(&closed),
            tol.density,
        ));
        write_state(&cfg.output.dir, &format!("exact_{i:02}.swc"), &state, &p)?;
        sets.push(integral_invariants(&state, &p));
    }
    write_csv(&cfg.output.dir, &sets)?;
    Ok(())
}
