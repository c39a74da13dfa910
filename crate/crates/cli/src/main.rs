use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxkit_cli::bench::{run_suite, Mutation};
use proxkit_cli::commands::{cmd_rates, cmd_solve, describe_fit, parse_window};
use proxkit_cli::{seed_from_env, CliError};

#[derive(Parser)]
#[command(name = "proxkit", version, about = "Run proximal splitting solvers and check convergence rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver described by a JSON config and log its trace as CSV.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit a convergence rate to one column of a trace CSV.
    Rates {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        column: String,
        /// Iteration window a:b.
        #[arg(long)]
        window: Option<String>,
    },
    /// Run a named benchmark suite and report PASS/FAIL per criterion.
    Bench {
        #[arg(long)]
        suite: String,
        /// Plant a known bug to check that the suite catches it.
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve { config } => {
            let report = cmd_solve(&config, seed_from_env()?)?;
            eprintln!("{}", report.summary);
            Ok(report.exit_code)
        }
        Command::Rates { csv, column, window } => {
            let window = window.as_deref().map(parse_window).transpose()?;
            let fit = cmd_rates(&csv, &column, window)?;
            println!("{}", describe_fit(&fit));
            Ok(0)
        }
        Command::Bench { suite, mutate } => {
            let mutation = match mutate.as_deref() {
                None => Mutation::None,
                Some(m) => m.parse()?,
            };
            let results = run_suite(&suite, mutation)?;
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            Ok(i32::from(failed > 0))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
