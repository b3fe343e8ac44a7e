use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spaqt::config::{dim_cap_from_env, ConfigFile, Format, Scenario, Tolerances};
use spaqt::{emit, run};

/// Run a spaqt scenario and print or save its report.
///
/// Settings come from an optional key-value config file; flags override it.
/// The exit status is 1 when any assertion fails and 2 on usage or runtime
/// errors.
#[derive(Debug, Parser)]
#[command(name = "spaqt", version)]
struct Cli {
    /// Scenario to run; may also be given as `scenario = "..."` in the config file.
    #[arg(value_enum)]
    scenario_arg: Option<Scenario>,
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    /// Key-value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin-1 sites per chain.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Field axis: x, y, z (optionally signed) or "a,b,c".
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<String>,
    /// Second field axis of the holonomy loop.
    #[arg(long, allow_hyphen_values = true)]
    perp: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    /// Gap-profile samples.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// four, three, standard, or a file of [[embedding]] tables.
    #[arg(long)]
    embeddings: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Evaluate independent acceptance criteria concurrently.
    #[arg(long)]
    parallel: bool,
    /// Largest accepted 1 − fidelity.
    #[arg(long)]
    tol_infidelity: Option<f64>,
    /// Bound on algebraic residuals.
    #[arg(long)]
    tol_residual: Option<f64>,
    /// Bound on conserved-operator commutators.
    #[arg(long)]
    tol_symmetry: Option<f64>,
    /// Largest accepted step-doubling change.
    #[arg(long)]
    tol_convergence: Option<f64>,
}

impl Cli {
    fn overrides(self) -> ConfigFile {
        ConfigFile {
            scenario: self.scenario.or(self.scenario_arg),
            n: self.n,
            beta: self.beta,
            axis: self.axis,
            perp: self.perp,
            steps: self.steps,
            samples: self.samples,
            seed: self.seed,
            embeddings: self.embeddings,
            out: self.out,
            format: self.format,
            parallel: self.parallel.then_some(true),
            tol: Tolerances {
                infidelity: self.tol_infidelity,
                residual: self.tol_residual,
                symmetry: self.tol_symmetry,
                convergence: self.tol_convergence,
            },
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => ConfigFile::read(path)?,
        None => ConfigFile::default(),
    };
    let config = file.merge(cli.overrides()).resolve(dim_cap_from_env()?)?;
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    let report = run(&config)?;
    let text = emit(&report, config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    for a in report.failures() {
        eprintln!("FAIL {}: measured {:e}, tolerance {:e}", a.name, a.measured, a.tolerance);
    }
    Ok(report.passed)
}
