use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use mtlogloss_cli::{execute, manifest_from, Cli, CliError, EXIT_RUNTIME, EXIT_VALIDATION};
use serde_json::json;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let record = json!({"error": "UsageError", "exit_code": EXIT_VALIDATION, "message": e.to_string().trim()});
            eprintln!("{record}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match manifest_from(cli).and_then(|m| execute(&m).map(|done| (m, done))) {
        Ok((m, done)) => {
            // keep stdout clean when the data itself goes there
            if m.output_path.is_some() {
                println!("{}", done.completed.summary);
            } else {
                eprintln!("{}", done.completed.summary);
            }
            match done.completed.flag {
                Some(flag) => {
                    eprintln!("{}", flag.record());
                    ExitCode::from(EXIT_RUNTIME)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.record());
    ExitCode::from(e.exit_code())
}
