//! `embcanon` command-line tool.
//!
//! ```text
//! embcanon spectrum model.txt
//! embcanon rotate model.txt -o canonical.txt
//! embcanon components model.txt --table-t 30 --components 10
//! embcanon align first.txt second.txt --top-t 50
//! embcanon retrain-check first.txt second.txt
//! ```
//!
//! Data goes to stdout, diagnostics to stderr. Set `EMBCANON_LOG` (e.g.
//! `info`) for progress and timings. Exit status is 0 on success, 1 for
//! usage errors and 2 when the input data cannot be processed.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Rotate(a) => commands::cmd_rotate(a),
        Command::Spectrum(a) => commands::cmd_spectrum(a),
        Command::Interp(a) => commands::cmd_interp(a),
        Command::Components(a) => commands::cmd_components(a),
        Command::Align(a) => commands::cmd_align(a),
        Command::RetrainCheck(a) => commands::cmd_retrain_check(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EMBCANON_LOG", "warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
