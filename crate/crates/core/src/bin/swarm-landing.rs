use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swarm_landing::cli::{self, EXIT_OK, EXIT_RUNTIME};
use swarm_landing::sim::Termination;
use swarm_landing::Result;

/// Vision-guided drone swarm landing simulator.
#[derive(Parser)]
#[command(name = "swarm-landing", version, about, args_conflicts_with_subcommands = true)]
struct Args {
    /// Check a scenario file against the schema and exit.
    #[arg(long, value_name = "FILE")]
    validate: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario batch and write trajectories, records and summaries.
    Run {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Base seed; defaults to the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print the per-run table and aggregate of a batch directory.
    Report {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
    },
    /// Write plotting CSVs for every run in a batch directory.
    Plotdata {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn run(args: Args) -> Result<i32> {
    if let Some(path) = args.validate {
        cli::load_scenario(&path)?;
        println!("{}: ok", path.display());
        return Ok(EXIT_OK);
    }
    match args.command {
        None => {
            eprintln!("nothing to do; see --help");
            Ok(cli::EXIT_VALIDATION)
        }
        Some(Command::Run { scenario, seed, runs, out }) => {
            let config = cli::load_scenario(&scenario)?;
            let name = cli::scenario_name(&scenario);
            let batch = cli::run_batch_records(&name, &config, runs, seed.unwrap_or(config.seed))?;
            cli::write_batch(&batch, &out)?;
            print!("{}", cli::report(&out)?);
            let aborted = batch.iter().any(|r| r.summary.termination == Termination::Abort);
            Ok(if aborted { EXIT_RUNTIME } else { EXIT_OK })
        }
        Some(Command::Report { input }) => {
            print!("{}", cli::report(&input)?);
            Ok(EXIT_OK)
        }
        Some(Command::Plotdata { input, out }) => {
            let records = cli::load_records(&input)?;
            for path in cli::emit_plot_data(&records, &out)? {
                println!("{}", path.display());
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { cli::EXIT_VALIDATION as u8 } else { EXIT_OK as u8 });
        }
    };
    let code = run(args).unwrap_or_else(|err| {
        eprintln!("error: {err}");
        cli::exit_code(&err)
    });
    ExitCode::from(code as u8)
}
