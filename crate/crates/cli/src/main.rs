//! `graphdim`: evaluate the construction, run verification campaigns, count boxes,
//! and export or plot samples of the graph.
//!
//! Exit status: 0 on success, 1 when a check finds failures, 2 on usage, parse,
//! domain or I/O errors.

mod args;
mod commands;
mod plot;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use args::Cli;

/// Whether every check in the command passed.
pub enum Status {
    Ok,
    ChecksFailed,
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let status = commands::dispatch(cli, &mut out)?;
    out.flush().context("flushing output")?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
