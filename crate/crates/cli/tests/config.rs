use igw_lab_cli::config::{parse_config, ConfigError, InitialConfig, Overrides, Task};

fn parse(text: &str, set: &[&str]) -> Result<igw_lab_cli::config::RunConfig, ConfigError> {
    let overrides = Overrides {
        set: set.iter().map(|s| s.to_string()).collect(),
        ..Overrides::default()
    };
    parse_config(text, Task::Simulate, &overrides)
}

fn messages(e: &ConfigError) -> Vec<String> {
    e.issues.iter().map(|i| format!("{}: {}", i.field, i.message)).collect()
}

#[test]
fn empty_document_gives_defaults() {
    let cfg = parse("", &[]).unwrap();
    assert_eq!((cfg.grid.nx, cfg.grid.nz), (64, 64));
    assert_eq!(cfg.params.f, 0.5);
    assert!(matches!(cfg.initial, InitialConfig::Invariant { .. }));
    assert!(cfg.wave().is_some());
}

#[test]
fn odd_nx_is_named() {
    let e = parse("[grid]\nnx = 7\n", &[]).unwrap_err();
    assert!(e.to_string().contains("nx must be even and ≥ 8"), "{e}");
    assert!(e.issues.iter().any(|i| i.field == "grid.nx"));
}

#[test]
fn rotation_generator_needs_rotation() {
    let e = parse("[params]\nf = 0.0\n[symmetry]\ngenerator = \"X9\"\n", &[]).unwrap_err();
    assert!(messages(&e).iter().any(|m| m.contains("X9 requires f != 0")), "{e}");
}

#[test]
fn every_problem_is_reported_at_once() {
    let text = "colour = 1\n[grid]\nnx = 7\nshape = \"square\"\n[time]\nt_end = -1.0\n";
    let e = parse(text, &["params.gee=3"]).unwrap_err();
    let m = messages(&e);
    for needle in ["colour: unknown key", "grid.shape: unknown key", "params.gee: unknown key", "grid.nx", "time.t_end"] {
        assert!(m.iter().any(|s| s.contains(needle)), "missing {needle} in {m:?}");
    }
}

#[test]
fn initial_table_needs_a_kind() {
    let e = parse("[initial]\nk = 1.0\n", &[]).unwrap_err();
    assert!(messages(&e).iter().any(|m| m.starts_with("initial.kind: missing required key")), "{e}");
}

#[test]
fn set_overrides_take_precedence() {
    let cfg = parse("[grid]\nnx = 32\n", &["grid.nx=128", "initial.kind=random", "initial.max_mode=6"]).unwrap();
    assert_eq!(cfg.grid.nx, 128);
    assert!(matches!(cfg.initial, InitialConfig::Random { max_mode: 6, .. }));
}

#[test]
fn seed_flag_overrides_document() {
    let overrides = Overrides {
        seed: Some(99),
        ..Overrides::default()
    };
    let cfg = parse_config("seed = 5\n", Task::VerifyIdentities, &overrides).unwrap();
    assert_eq!(cfg.seed, 99);
}

#[test]
fn explicit_dt_above_the_wave_bound_is_rejected() {
    let e = parse("[time]\ndt = 1.0\n", &[]).unwrap_err();
    assert!(e.issues.iter().any(|i| i.field == "time.dt"), "{e}");
}

#[test]
fn profile_generators_need_a_profile() {
    let e = parse("[symmetry]\ngenerator = \"X5\"\n", &[]).unwrap_err();
    assert!(messages(&e).iter().any(|m| m.contains("missing required key")), "{e}");
    parse("[symmetry]\ngenerator = \"X5\"\n[symmetry.profile]\npoly = [0.0, 1.0]\n", &[]).unwrap();
}
