// SPDX-License-Identifier: MIT OR Apache-2.0

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use clap::error::ErrorKind;

use segwise_cli::args::{Cli, Command, Format};
use segwise_cli::{cmd_cost_path, cmd_detect, cmd_simulate, cmd_uq, CliResult};

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Uq(args) => {
            let text = cmd_uq(&args)?;
            emit(args.pipeline.out.as_deref(), &text)
        }
        Command::CostPath(args) => {
            let text = cmd_cost_path(&args)?;
            emit(args.pipeline.out.as_deref(), &text)
        }
        Command::Detect(args) => {
            let text = cmd_detect(&args)?;
            emit(args.pipeline.out.as_deref(), &text)
        }
        Command::Simulate(args) => {
            let out = cmd_simulate(&args)?;
            if let Some(path) = &args.records {
                std::fs::write(path, &out.records_csv)?;
            }
            let text = match args.format {
                Format::Json => &out.summary_json,
                Format::Csv => &out.records_csv,
            };
            emit(args.out.as_deref(), text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("segwise: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
