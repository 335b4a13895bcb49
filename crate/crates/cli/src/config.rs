//! Run configuration: a TOML document with one table per concern.
//!
//! Every key has a default, so an empty document is a valid configuration.
//! Parsing collects all problems (unknown keys, constraint violations) before
//! reporting, so one round of edits fixes a config.

use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;

use igw_lab::dynamics::{dispersion_omega, GaussianSpec, Harmonic, InvariantSolutionSpec, RandomSpec, TrigProfile};
use igw_lab::symmetry::{GeneratorId, TimeProfile, TrigTerm};
use igw_lab::{GridSpec64, Params64};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Simulate,
    VerifyIdentities,
    VerifySymmetry,
    VerifyLaws,
    ExactSolution,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Simulate => "simulate",
            Task::VerifyIdentities => "verify-identities",
            Task::VerifySymmetry => "verify-symmetry",
            Task::VerifyLaws => "verify-laws",
            Task::ExactSolution => "exact-solution",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub nz: usize,
    pub lx: f64,
    pub lz: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nx: 64,
            nz: 64,
            lx: TAU,
            lz: TAU,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub f: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub g: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { f: 0.5, n: 1.0, g: 9.81 }
    }
}

/// Coefficients of `sin(jλ)` and `cos(jλ)`, `j = 1, 2, …`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseProfile {
    pub sin: Vec<f64>,
    pub cos: Vec<f64>,
}

impl PhaseProfile {
    pub fn to_trig(&self) -> TrigProfile<f64> {
        let n = self.sin.len().max(self.cos.len());
        TrigProfile {
            harmonics: (0..n)
                .map(|i| Harmonic {
                    j: i as u32 + 1,
                    sin: self.sin.get(i).copied().unwrap_or(0.0),
                    cos: self.cos.get(i).copied().unwrap_or(0.0),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialConfig {
    /// Travelling-phase solution with `λ = kx + mz`.
    Invariant {
        k: f64,
        m: f64,
        /// Overrides the dispersion relation; off-relation waves are not solutions.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega: Option<f64>,
        #[serde(default)]
        a: PhaseProfile,
        #[serde(default)]
        b: PhaseProfile,
    },
    Gaussian {
        #[serde(default)]
        center: [f64; 2],
        /// Full width at half maximum; defaults to a tenth of the shorter side.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<f64>,
        #[serde(default)]
        v: f64,
        #[serde(default)]
        rho: f64,
        #[serde(default)]
        psi: f64,
    },
    Random {
        #[serde(default = "default_max_mode")]
        max_mode: usize,
        #[serde(default = "default_rms_v")]
        rms_v: f64,
        #[serde(default = "default_rms_rho")]
        rms_rho: f64,
        #[serde(default = "default_rms_psi")]
        rms_psi: f64,
    },
    Zero,
    /// Checkpoint written by `simulate`.
    File { path: PathBuf },
}

fn default_max_mode() -> usize {
    8
}
fn default_rms_v() -> f64 {
    0.25
}
fn default_rms_rho() -> f64 {
    0.025
}
fn default_rms_psi() -> f64 {
    0.05
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::Invariant {
            k: 1.0,
            m: 2.0,
            omega: None,
            a: PhaseProfile {
                sin: vec![1.0],
                cos: vec![],
            },
            b: PhaseProfile {
                sin: vec![],
                cos: vec![0.5],
            },
        }
    }
}

impl InitialConfig {
    fn kind(&self) -> &'static str {
        match self {
            InitialConfig::Invariant { .. } => "invariant",
            InitialConfig::Gaussian { .. } => "gaussian",
            InitialConfig::Random { .. } => "random",
            InitialConfig::Zero => "zero",
            InitialConfig::File { .. } => "file",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    /// Step size; when absent, half of the stable step of the initial state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Steps between rows of `invariants.csv`.
    pub stride: usize,
    /// Steps between checkpoints; 0 writes only the final state.
    pub checkpoint_every: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            dt: None,
            t_end: 1.0,
            stride: 1,
            checkpoint_every: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub poly: Vec<f64>,
    pub trig: Vec<TrigTermConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTermConfig {
    pub sigma: f64,
    #[serde(default)]
    pub sin: f64,
    #[serde(default)]
    pub cos: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetryConfig {
    pub generator: String,
    pub eps: f64,
    pub first_order_eps: Vec<f64>,
    /// Random points for the round-trip and composition checks.
    pub samples: usize,
    /// Nodes per side of the lattice the transformed solution is checked on.
    pub lattice: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        Self {
            generator: "X8".into(),
            eps: 0.2,
            first_order_eps: vec![1e-2, 5e-3, 2.5e-3],
            samples: 1000,
            lattice: 32,
            profile: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitiesConfig {
    /// Number of random states the identities are checked on.
    pub fields: usize,
    pub max_mode: usize,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        Self { fields: 20, max_mode: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawsConfig {
    /// Centre of the three-snapshot window.
    pub t: f64,
    /// Spacing of the window.
    pub h: f64,
}

impl Default for LawsConfig {
    fn default() -> Self {
        Self { t: 0.5, h: 1e-2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactConfig {
    /// Sample times as fractions of the wave period.
    pub period_fractions: Vec<f64>,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            period_fractions: vec![0.0, 0.3, 0.7],
        }
    }
}

/// Thresholds every check is judged against; all are reported alongside the
/// measured values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity: f64,
    pub pde_residual: f64,
    pub density: f64,
    pub law_residual: f64,
    pub mean_drift: f64,
    pub energy_drift: f64,
    pub weighted_drift: f64,
    pub group: f64,
    pub solution_map: f64,
    pub first_order_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            pde_residual: 1e-8,
            density: 1e-9,
            law_residual: 1e-7,
            mean_drift: 1e-10,
            energy_drift: 1e-6,
            weighted_drift: 1e-5,
            group: 1e-10,
            solution_map: 1e-7,
            first_order_order: 1.9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Document {
    seed: u64,
    grid: GridConfig,
    params: ParamsConfig,
    initial: InitialConfig,
    time: TimeConfig,
    symmetry: SymmetryConfig,
    identities: IdentitiesConfig,
    laws: LawsConfig,
    exact: ExactConfig,
    tolerances: Tolerances,
    output: OutputConfig,
}

/// A validated configuration. The output directory is kept out of the
/// serialized form so that reports do not depend on where they are written.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub task: Task,
    pub seed: u64,
    pub grid: GridConfig,
    pub params: ParamsConfig,
    pub initial: InitialConfig,
    pub time: TimeConfig,
    pub symmetry: SymmetryConfig,
    pub identities: IdentitiesConfig,
    pub laws: LawsConfig,
    pub exact: ExactConfig,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn grid_spec(&self) -> GridSpec64 {
        GridSpec64 {
            nx: self.grid.nx,
            nz: self.grid.nz,
            lx: self.grid.lx,
            lz: self.grid.lz,
        }
    }

    pub fn physical(&self) -> Params64 {
        Params64 {
            f: self.params.f,
            n: self.params.n,
            g: self.params.g,
        }
    }

    pub fn generator_id(&self) -> GeneratorId {
        // validated in `parse_config`
        self.symmetry.generator.parse().expect("validated generator id")
    }

    pub fn time_profile(&self) -> Option<TimeProfile<f64>> {
        self.symmetry.profile.as_ref().map(|p| TimeProfile {
            poly: p.poly.clone(),
            trig: p
                .trig
                .iter()
                .map(|t| TrigTerm {
                    sigma: t.sigma,
                    sin: t.sin,
                    cos: t.cos,
                })
                .collect(),
        })
    }

    /// The invariant-solution spec, when the initial condition is one.
    pub fn wave(&self) -> Option<InvariantSolutionSpec<f64>> {
        match &self.initial {
            InitialConfig::Invariant { k, m, omega, a, b } => {
                let p = self.physical();
                let omega = omega.unwrap_or_else(|| dispersion_omega(*k, *m, &p));
                InvariantSolutionSpec::with_frequency(*k, *m, omega, a.to_trig(), b.to_trig()).ok()
            }
            _ => None,
        }
    }

    pub fn gaussian(&self) -> Option<GaussianSpec<f64>> {
        match &self.initial {
            InitialConfig::Gaussian {
                center,
                width,
                v,
                rho,
                psi,
            } => Some(GaussianSpec {
                center: (center[0], center[1]),
                width: width.unwrap_or(self.grid.lx.min(self.grid.lz) / 10.0),
                amp_v: *v,
                amp_rho: *rho,
                amp_psi: *psi,
            }),
            _ => None,
        }
    }

    pub fn random(&self) -> Option<RandomSpec> {
        match &self.initial {
            InitialConfig::Random {
                max_mode,
                rms_v,
                rms_rho,
                rms_psi,
            } => Some(RandomSpec {
                max_mode: *max_mode,
                rms_v: *rms_v,
                rms_rho: *rms_rho,
                rms_psi: *rms_psi,
                seed: self.seed,
            }),
            _ => None,
        }
    }
}

/// One violated rule, named by the dotted key it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub field: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub issues: Vec<Issue>,
}

impl ConfigError {
    fn single(field: &str, message: impl Into<String>) -> Self {
        Self {
            issues: vec![Issue {
                field: field.into(),
                message: message.into(),
            }],
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration ({} problem", self.issues.len())?;
        if self.issues.len() != 1 {
            f.write_str("s")?;
        }
        f.write_str(")")?;
        for i in &self.issues {
            write!(f, "\n  {}: {}", i.field, i.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Command-line adjustments applied on top of the document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    /// `key=value` pairs with dotted keys, e.g. `grid.nx=128`.
    pub set: Vec<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

const TOP_KEYS: &[&str] = &[
    "seed",
    "grid",
    "params",
    "initial",
    "time",
    "symmetry",
    "identities",
    "laws",
    "exact",
    "tolerances",
    "output",
];

fn section_keys(section: &str) -> &'static [&'static str] {
    match section {
        "grid" => &["nx", "nz", "lx", "lz"],
        "params" => &["f", "N", "g"],
        "time" => &["dt", "t_end", "stride", "checkpoint_every"],
        "symmetry" => &["generator", "eps", "first_order_eps", "samples", "lattice", "profile"],
        "identities" => &["fields", "max_mode"],
        "laws" => &["t", "h"],
        "exact" => &["period_fractions"],
        "tolerances" => &[
            "identity",
            "pde_residual",
            "density",
            "law_residual",
            "mean_drift",
            "energy_drift",
            "weighted_drift",
            "group",
            "solution_map",
            "first_order_order",
        ],
        "output" => &["dir"],
        _ => &[],
    }
}

fn initial_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "invariant" => &["kind", "k", "m", "omega", "a", "b"],
        "gaussian" => &["kind", "center", "width", "v", "rho", "psi"],
        "random" => &["kind", "max_mode", "rms_v", "rms_rho", "rms_psi"],
        "zero" => &["kind"],
        "file" => &["kind", "path"],
        _ => return None,
    })
}

fn unknown_in(table: &mut Table, allowed: &[&str], prefix: &str, out: &mut Vec<Issue>) {
    table.retain(|key, _| {
        let known = allowed.contains(&key);
        if !known {
            out.push(Issue {
                field: format!("{prefix}{key}"),
                message: "unknown key".into(),
            });
        }
        known
    });
}

fn sub_table<'a>(table: &'a mut Table, key: &str) -> Option<&'a mut Table> {
    table.get_mut(key).and_then(Value::as_table_mut)
}

/// Reports every key of `doc` that the schema does not know and removes it,
/// so that the rest of the document can still be validated.
fn unknown_keys(doc: &mut Table) -> Vec<Issue> {
    let mut out = Vec::new();
    unknown_in(doc, TOP_KEYS, "", &mut out);
    let mut drop_initial = false;
    for &section in TOP_KEYS {
        let Some(t) = sub_table(doc, section) else { continue };
        match section {
            "initial" => {
                let Some(kind) = t.get("kind").and_then(Value::as_str).map(str::to_owned) else {
                    out.push(Issue {
                        field: "initial.kind".into(),
                        message: "missing required key (invariant, gaussian, random, zero or file)".into(),
                    });
                    drop_initial = true;
                    continue;
                };
                match initial_keys(&kind) {
                    Some(keys) => unknown_in(t, keys, "initial.", &mut out),
                    None => {
                        out.push(Issue {
                            field: "initial.kind".into(),
                            message: format!(
                                "unknown initial condition '{kind}' (expected invariant, gaussian, random, zero or file)"
                            ),
                        });
                        drop_initial = true;
                        continue;
                    }
                }
                for side in ["a", "b"] {
                    if let Some(p) = sub_table(t, side) {
                        unknown_in(p, &["sin", "cos"], &format!("initial.{side}."), &mut out);
                    }
                }
            }
            "symmetry" => {
                unknown_in(t, section_keys(section), "symmetry.", &mut out);
                if let Some(p) = sub_table(t, "profile") {
                    unknown_in(p, &["poly", "trig"], "symmetry.profile.", &mut out);
                    if let Some(terms) = p.get_mut("trig").and_then(Value::as_array_mut) {
                        for (i, term) in terms.iter_mut().enumerate() {
                            if let Some(term) = term.as_table_mut() {
                                unknown_in(term, &["sigma", "sin", "cos"], &format!("symmetry.profile.trig[{i}]."), &mut out);
                            }
                        }
                    }
                }
            }
            "seed" => {}
            _ => unknown_in(t, section_keys(section), &format!("{section}."), &mut out),
        }
    }
    if drop_initial {
        doc.remove("initial");
    }
    out
}

fn parse_value(text: &str) -> Value {
    let wrapped = format!("v = {text}");
    match wrapped.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(text.into())),
        Err(_) => Value::String(text.into()),
    }
}

fn apply_set(doc: &mut Table, assignment: &str) -> Result<(), Issue> {
    let bad = |message: String| Issue {
        field: assignment.into(),
        message,
    };
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| bad("--set expects KEY=VALUE".into()))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(bad("empty key segment".into()));
    }
    let (last, parents) = path.split_last().expect("split yields at least one segment");
    let mut table = doc;
    for (depth, part) in parents.iter().enumerate() {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| bad(format!("{} is not a table", path[..=depth].join("."))))?;
    }
    table.insert(last.to_string(), parse_value(value.trim()));
    Ok(())
}

fn check(issues: &mut Vec<Issue>, ok: bool, field: &str, message: impl FnOnce() -> String) {
    if !ok {
        issues.push(Issue {
            field: field.into(),
            message: message(),
        });
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

fn validate(cfg: &RunConfig) -> Vec<Issue> {
    let mut out = Vec::new();
    let g = &cfg.grid;
    for (name, n) in [("nx", g.nx), ("nz", g.nz)] {
        check(&mut out, n >= 8 && n % 2 == 0, &format!("grid.{name}"), || {
            format!("{name} must be even and ≥ 8 (got {n})")
        });
    }
    for (name, l) in [("lx", g.lx), ("lz", g.lz)] {
        check(&mut out, positive(l), &format!("grid.{name}"), || {
            format!("{name} must be positive and finite (got {l})")
        });
    }

    let p = &cfg.params;
    check(&mut out, p.f.is_finite(), "params.f", || format!("f must be finite (got {})", p.f));
    check(&mut out, positive(p.n), "params.N", || format!("N must be positive and finite (got {})", p.n));
    check(&mut out, positive(p.g), "params.g", || format!("g must be positive and finite (got {})", p.g));
    let max_freq = p.n.abs().max(p.f.abs());

    let t = &cfg.time;
    if let Some(dt) = t.dt {
        check(&mut out, positive(dt), "time.dt", || format!("dt must be positive and finite (got {dt})"));
        let wave_bound = 0.5 / max_freq;
        check(&mut out, !dt.is_finite() || dt <= wave_bound, "time.dt", || {
            format!("dt = {dt} exceeds the CFL bound 0.5/max(N, |f|) = {wave_bound}")
        });
    }
    check(&mut out, positive(t.t_end), "time.t_end", || {
        format!("t_end must be positive and finite (got {})", t.t_end)
    });
    check(&mut out, t.stride >= 1, "time.stride", || "stride must be at least 1".into());

    match &cfg.initial {
        InitialConfig::Invariant { k, m, omega, a, b } => {
            check(&mut out, k.is_finite() && m.is_finite() && (*k != 0.0 || *m != 0.0), "initial.k", || {
                format!("wavevector (k, m) = ({k}, {m}) must be finite and non-zero")
            });
            for (name, w, l) in [("k", *k, g.lx), ("m", *m, g.lz)] {
                let cycles = w * l / TAU;
                check(
                    &mut out,
                    !cycles.is_finite() || (cycles - cycles.round()).abs() <= 1e-9 * cycles.abs().max(1.0),
                    &format!("initial.{name}"),
                    || format!("{name}·L/2π = {cycles} must be an integer for a periodic wave"),
                );
            }
            if let Some(w) = omega {
                check(&mut out, positive(*w), "initial.omega", || format!("omega must be positive (got {w})"));
            } else if positive(p.n) && p.f.is_finite() && (*k != 0.0 || *m != 0.0) {
                let w = dispersion_omega(*k, *m, &cfg.physical());
                check(&mut out, positive(w), "initial.omega", || {
                    "the dispersion relation gives a zero frequency for this wavevector".into()
                });
            }
            for (side, prof) in [("a", a), ("b", b)] {
                let finite = prof.sin.iter().chain(&prof.cos).all(|c| c.is_finite());
                check(&mut out, finite, &format!("initial.{side}"), || "profile coefficients must be finite".into());
            }
        }
        InitialConfig::Gaussian { center, .. } => {
            let w = cfg.gaussian().map_or(0.0, |s| s.width);
            let limit = g.lx.min(g.lz) / 8.0;
            check(&mut out, positive(w) && w <= limit, "initial.width", || {
                format!("width {w} must be positive and at most min(lx, lz)/8 = {limit}")
            });
            check(
                &mut out,
                center[0].abs() < g.lx / 2.0 && center[1].abs() < g.lz / 2.0,
                "initial.center",
                || format!("centre ({}, {}) lies outside the box", center[0], center[1]),
            );
        }
        InitialConfig::Random {
            max_mode,
            rms_v,
            rms_rho,
            rms_psi,
        } => {
            check(&mut out, *max_mode >= 1 && 2 * max_mode < g.nx.min(g.nz), "initial.max_mode", || {
                format!("max_mode {max_mode} must be at least 1 and below min(nx, nz)/2")
            });
            for (name, r) in [("rms_v", rms_v), ("rms_rho", rms_rho), ("rms_psi", rms_psi)] {
                check(&mut out, r.is_finite() && *r >= 0.0, &format!("initial.{name}"), || {
                    format!("{name} must be finite and non-negative (got {r})")
                });
            }
        }
        InitialConfig::Zero => {}
        InitialConfig::File { path } => {
            check(&mut out, !path.as_os_str().is_empty(), "initial.path", || "path must not be empty".into());
        }
    }

    let needs_wave = matches!(cfg.task, Task::VerifyLaws | Task::ExactSolution);
    check(&mut out, !needs_wave || cfg.initial.kind() == "invariant", "initial.kind", || {
        format!("{} evaluates the closed-form solution and needs kind = \"invariant\"", cfg.task)
    });

    let s = &cfg.symmetry;
    match s.generator.parse::<GeneratorId>() {
        Ok(id) => {
            check(&mut out, !(id == GeneratorId::X9 && p.f == 0.0), "symmetry.generator", || {
                "X9 requires f != 0: its coefficients carry 1/f (set params.f or pick another generator)".into()
            });
            if id.needs_profile() {
                check(&mut out, s.profile.is_some(), "symmetry.profile", || {
                    format!("missing required key: {id} needs a time profile (symmetry.profile.poly / .trig)")
                });
            } else {
                check(&mut out, s.profile.is_none(), "symmetry.profile", || format!("{id} takes no time profile"));
            }
        }
        Err(_) => out.push(Issue {
            field: "symmetry.generator".into(),
            message: format!("unknown generator '{}' (expected X1..X9)", s.generator),
        }),
    }
    if let Some(prof) = cfg.time_profile() {
        if let Err(e) = TimeProfile::new(prof.poly, prof.trig) {
            out.push(Issue {
                field: "symmetry.profile".into(),
                message: e.to_string(),
            });
        }
    }
    check(&mut out, s.eps.is_finite(), "symmetry.eps", || format!("eps must be finite (got {})", s.eps));
    check(
        &mut out,
        s.first_order_eps.len() >= 2 && s.first_order_eps.iter().all(|&e| positive(e)),
        "symmetry.first_order_eps",
        || "needs at least two positive step sizes".into(),
    );
    check(&mut out, s.samples >= 1, "symmetry.samples", || "samples must be at least 1".into());
    check(&mut out, s.lattice >= 8 && s.lattice.is_multiple_of(2), "symmetry.lattice", || {
        format!("lattice must be even and ≥ 8 (got {})", s.lattice)
    });

    let id = &cfg.identities;
    check(&mut out, id.fields >= 1, "identities.fields", || "fields must be at least 1".into());
    check(&mut out, id.max_mode >= 1 && 2 * id.max_mode < g.nx.min(g.nz), "identities.max_mode", || {
        format!("max_mode {} must be at least 1 and below min(nx, nz)/2", id.max_mode)
    });

    let l = &cfg.laws;
    check(&mut out, l.t.is_finite(), "laws.t", || format!("t must be finite (got {})", l.t));
    check(&mut out, positive(l.h), "laws.h", || format!("h must be positive and finite (got {})", l.h));
    check(
        &mut out,
        !cfg.exact.period_fractions.is_empty() && cfg.exact.period_fractions.iter().all(|f| f.is_finite()),
        "exact.period_fractions",
        || "needs at least one finite fraction".into(),
    );

    let tol = &cfg.tolerances;
    for (name, v) in [
        ("identity", tol.identity),
        ("pde_residual", tol.pde_residual),
        ("density", tol.density),
        ("law_residual", tol.law_residual),
        ("mean_drift", tol.mean_drift),
        ("energy_drift", tol.energy_drift),
        ("weighted_drift", tol.weighted_drift),
        ("group", tol.group),
        ("solution_map", tol.solution_map),
        ("first_order_order", tol.first_order_order),
    ] {
        check(&mut out, positive(v), &format!("tolerances.{name}"), || {
            format!("tolerance must be positive and finite (got {v})")
        });
    }
    out
}

/// Parses and validates `text` for `task`, with `overrides` applied first.
pub fn parse_config(text: &str, task: Task, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let mut doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::single("<document>", e.to_string().trim_end().to_string()))?;
    let mut issues = Vec::new();
    for s in &overrides.set {
        if let Err(i) = apply_set(&mut doc, s) {
            issues.push(i);
        }
    }
    if let Some(seed) = overrides.seed {
        match i64::try_from(seed) {
            Ok(s) => {
                doc.insert("seed".into(), Value::Integer(s));
            }
            Err(_) => issues.push(Issue {
                field: "--seed".into(),
                message: format!("seed {seed} does not fit a TOML integer (max 2^63 - 1)"),
            }),
        }
    }
    if let Some(out) = &overrides.out {
        let output = doc
            .entry("output".to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        match output.as_table_mut() {
            Some(t) => {
                t.insert("dir".into(), Value::String(out.to_string_lossy().into_owned()));
            }
            None => issues.push(Issue {
                field: "output".into(),
                message: "must be a table".into(),
            }),
        }
    }
    issues.extend(unknown_keys(&mut doc));
    let d: Document = match Document::deserialize(doc) {
        Ok(d) => d,
        Err(e) => {
            issues.push(Issue {
                field: "<document>".into(),
                message: e.to_string().trim_end().to_string(),
            });
            return Err(ConfigError { issues });
        }
    };
    let cfg = RunConfig {
        task,
        seed: d.seed,
        grid: d.grid,
        params: d.params,
        initial: d.initial,
        time: d.time,
        symmetry: d.symmetry,
        identities: d.identities,
        laws: d.laws,
        exact: d.exact,
        tolerances: d.tolerances,
        output: d.output,
    };
    issues.extend(validate(&cfg));
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { issues })
    }
}
