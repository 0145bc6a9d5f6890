use std::io;
use std::process::ExitCode;

use clap::Parser;
use esd_cli::app::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse(), &mut io::stdout().lock(), &mut io::stderr()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
