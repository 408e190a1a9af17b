mod args;
mod commands;
mod data;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, EXIT_CONFIG};

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Infer(args) => commands::infer(args, &cli.global),
        Command::Simulate(args) => commands::simulate(args, &cli.global),
        Command::Benchmark(args) => commands::benchmark(args, &cli.global),
        Command::OracleCheck(args) => {
            let (text, failures) = commands::oracle_check(args, &cli.global)?;
            print!("{text}");
            if failures > 0 {
                return Err(CliError::OracleFailed(failures));
            }
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("cumdir: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
