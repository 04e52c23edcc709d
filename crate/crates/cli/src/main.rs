use clap::Parser;
use fuzzport_cli::args::{execute, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    execute(Cli::parse())
}
