use std::process::ExitCode;

use clap::Parser;
use specsal::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match specsal::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specsal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
