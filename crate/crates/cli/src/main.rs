use std::process::ExitCode;

use andor_cli::{run, Cli, RunConfig, EXIT_USAGE};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match RunConfig::from_cli(cli) {
        Ok(cfg) => run(&cfg),
        Err(msg) => {
            eprintln!("andor: {msg}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
