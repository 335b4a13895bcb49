use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use igw_lab_cli::config::{parse_config, Overrides, Task};
use igw_lab_cli::report::Status;
use igw_lab_cli::tasks::{run, RunError};

/// Internal-wave laboratory: simulations and verification suites.
///
/// Exit codes: 0 all checks passed, 1 a check failed, 2 usage, configuration
/// or I/O error, 3 numerical abort.
#[derive(Parser)]
#[command(name = "igw-lab", version)]
struct Cli {
    #[command(subcommand)]
    task: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the equations and track the conserved integrals.
    Simulate(Common),
    /// Check the Jacobian and displacement identities on random fields.
    VerifyIdentities(Common),
    /// Check group properties and solution maps of a symmetry generator.
    VerifySymmetry(Common),
    /// Check the five conservation laws on the closed-form solution.
    VerifyLaws(Common),
    /// Evaluate the closed-form solution and its residuals.
    ExactSolution(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration value, e.g. `--set grid.nx=128`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (task, common) = match cli.task {
        Command::Simulate(c) => (Task::Simulate, c),
        Command::VerifyIdentities(c) => (Task::VerifyIdentities, c),
        Command::VerifySymmetry(c) => (Task::VerifySymmetry, c),
        Command::VerifyLaws(c) => (Task::VerifyLaws, c),
        Command::ExactSolution(c) => (Task::ExactSolution, c),
    };
    let text = match &common.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => String::new(),
    };
    let overrides = Overrides {
        set: common.set,
        seed: common.seed,
        out: common.out,
    };
    let cfg = match parse_config(&text, task, &overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: invalid configuration\n{e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(report) => {
            for check in &report.checks {
                let tag = match check.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                let measured = check.measured.map_or("n/a".to_string(), |m| format!("{m:.3e}"));
                println!("{tag} {} = {measured} (tol {:.1e})", check.name, check.tolerance);
            }
            println!("report: {}", cfg.output.dir.join("report.json").display());
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ RunError::Numerical(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
