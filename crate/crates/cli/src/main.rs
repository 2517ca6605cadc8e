use std::process::ExitCode;

use clap::Parser;
use fuzzydea_cli::args::Cli;

fn main() -> ExitCode {
    match fuzzydea_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.kind as u8)
        }
    }
}
