use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use flatfold::cli::{run, Cli, EXIT_INVALID};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID as u8),
            };
        }
    };
    match run(&cli) {
        Ok(out) => ExitCode::from(out.code as u8),
        Err(e) => {
            eprintln!("flatfold: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
