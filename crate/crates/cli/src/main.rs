//! `multiplier-lab` command-line front end: one command per run, one
//! artifact per command.

mod commands;
mod config;
mod error;
mod table;

use std::process::ExitCode;

use clap::Parser;

use crate::config::RunConfig;
use crate::error::CliResult;

fn run(flags: RunConfig) -> CliResult<()> {
    let mut cfg = config::resolve(flags)?;
    if let Some(n) = cfg.threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let table = commands::dispatch(&mut cfg)?;
    let output = cfg.output.clone().expect("resolved config has an output");
    table::emit(&table, cfg.to_map(), cfg.format(), &output)
}

fn main() -> ExitCode {
    let flags = match RunConfig::try_parse() {
        Ok(f) => f,
        Err(e) => e.exit(),
    };
    match run(flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
