use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aqt_cli::protocol::cmd_protocol;
use aqt_cli::simulate::cmd_simulate;
use aqt_cli::sweep::cmd_sweep;
use aqt_cli::verify::{verify, Fault};
use aqt_cli::{CliError, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aqt", version, about = "Atomic quantum transistor simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    OmegaSign,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitude time series (analytic.csv, numeric.csv, summary.json)
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Protocol run (trace.json, protocol_summary.json)
    Protocol {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep (sweep.csv)
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite
    Verify {
        /// Only checks whose name contains this string
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn load(config: &Path) -> Result<RunConfig, CliError> {
    RunConfig::load(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = load(&config)?;
            let (sim, paths) = cmd_simulate(&cfg, &cfg.output_dir(out.as_deref()))?;
            report(&paths);
            if let Some(d) = sim.summary.max_deviation {
                println!("max analytic-numeric deviation: {d:.3e}");
            }
        }
        Command::Protocol { config, out } => {
            let cfg = load(&config)?;
            let (run, paths) = cmd_protocol(&cfg, &cfg.output_dir(out.as_deref()))?;
            report(&paths);
            if let Some(f) = run.summary.fidelity {
                println!("fidelity: {f:.15}");
            }
            println!("ME3 entropy: {:.9} bit", run.summary.entropies.me3);
        }
        Command::Sweep { config, out } => {
            let cfg = load(&config)?;
            let (_, path) = cmd_sweep(&cfg, &cfg.output_dir(out.as_deref()))?;
            report(&[path]);
        }
        Command::Verify {
            filter,
            inject_fault,
            json,
        } => {
            let fault = inject_fault.map(|FaultArg::OmegaSign| Fault::OmegaSign);
            let r = verify(filter.as_deref(), fault);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&r).expect("report serializes")
                );
            } else {
                print!("{}", r.table());
            }
            if r.checks.is_empty() {
                return Err(CliError::invalid("--filter", "no check matches"));
            }
            if r.failed() > 0 {
                return Err(CliError::Verification {
                    failed: r.failed(),
                    total: r.checks.len(),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
