use std::process::ExitCode;

use clap::Parser;
use joinrank::cli::{error_json, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match &out.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.text) {
                        let err = joinrank::Error::Parse(format!("{}: {e}", path.display()));
                        eprint!("{}", error_json(&err));
                        return ExitCode::from(err.exit_code() as u8);
                    }
                }
                None => print!("{}", out.text),
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprint!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
