//! `lifshitz`: command-line experiments. Exit codes: 0 success, 2 configuration
//! error, 3 numerical failure.

mod cli;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use lifshitz_core::Error;

fn main() -> ExitCode {
    let cli = cli::Cli::parse();
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let started = output::unix_now();
    let mut out = match output::Outputs::new(&cfg.out_dir) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cannot create {}: {e}", cfg.out_dir.display());
            return ExitCode::from(3);
        }
    };
    match commands::run(&cfg, &mut out) {
        Ok(summary) => {
            if let Err(e) = output::write_manifest(&cfg, &mut out, started) {
                eprintln!("cannot write manifest: {e}");
                return ExitCode::from(3);
            }
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            ExitCode::SUCCESS
        }
        Err(Error::InvalidArgument(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
    }
}
