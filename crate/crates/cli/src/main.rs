//! `born`: amplitudes, cross sections, route comparison and the identity suite.
//!
//! Exit codes: 0 success, 1 a comparison or identity check failed, 2 invalid
//! input (domain, integrability, ladder), 3 numerical failure (no
//! convergence, strict-mode disagreement).

mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use born_core::BornError;
use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<BornError> for CliError {
    fn from(e: BornError) -> Self {
        CliError {
            code: if e.is_domain_like() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

fn run(raw: Vec<OsString>) -> Result<u8, CliError> {
    let args = config::effective_args(raw)?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    let cfg = RunConfig::from_cli(&cli)?;
    if cli.command == Command::Compare && cli.shared.method.is_some() {
        return Err(CliError::usage("compare always runs closed_form, screened_limit and cylindrical; drop --method"));
    }
    let rendered = match cfg.command_kind {
        Command::Amplitude => commands::run_amplitude(&cfg)?,
        Command::Xsec => commands::run_xsec(&cfg)?,
        Command::Compare => commands::run_compare(&cfg)?,
        Command::Verify => commands::run_verify(&cfg)?,
    };
    match &cli.shared.out {
        Some(path) => fs::write(path, &rendered.text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(rendered.text.as_bytes())
            .map_err(|e| CliError::io(format!("cannot write output: {e}")))?,
    }
    Ok(rendered.summary.exit_code())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
