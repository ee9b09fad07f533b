use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use specdisp::cli::{load_config, run_scenario, ParticleSpec, ScenarioConfig};
use specdisp::verify::{run_suite, Suite};
use specdisp::Error;

#[derive(Parser)]
#[command(
    name = "specdisp",
    version,
    about = "Spectral wave-packet propagation and Fourier-side solvers for periodic potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its artifacts
    Run {
        /// Scenario JSON document
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV/JSON artifacts
        #[arg(long)]
        out: PathBuf,
        /// Re-express the configured particle in natural units (E0 = hbar = 1)
        #[arg(long)]
        natural_units: bool,
    },
    /// Run the acceptance suite and print one line per criterion
    Verify {
        /// One of: all, arith, dispersion, hill, cli
        #[arg(long)]
        suite: Option<String>,
    },
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::Json(_)
        | Error::BandViolation { .. }
        | Error::BoundaryMode { .. } => 2,
        _ => 1,
    }
}

fn run() -> Result<u8, (Error, u8)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            natural_units,
        } => {
            let mut cfg = load_config(&config).map_err(|e| (e, 2))?;
            if natural_units {
                if let ScenarioConfig::Dispersion(ref mut s) = cfg {
                    let l0 = s.particle.build().map_err(|e| (e, 2))?.compton_length();
                    s.particle = ParticleSpec::Natural {
                        natural_units: true,
                        l0,
                    };
                }
            }
            let summary = run_scenario(&cfg, &out).map_err(|e| {
                let code = classify(&e);
                (e, code)
            })?;
            if let Some((passed, total)) = summary.verified {
                println!("verify: {passed}/{total} criteria passed");
                if passed != total {
                    return Ok(1);
                }
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let filter = Suite::parse(suite.as_deref()).map_err(|e| (e, 2))?;
            let outcomes = run_suite(filter);
            for o in &outcomes {
                println!("{o}");
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            println!("verify: {passed}/{} criteria passed", outcomes.len());
            Ok(if passed == outcomes.len() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((e, code)) => {
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
