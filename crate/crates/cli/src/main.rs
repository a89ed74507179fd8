use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use regprog_cli::{configure_threads, run, Cli, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    if let Err(e) = configure_threads().and_then(|_| run(cli)) {
        return fail(&e);
    }
    ExitCode::SUCCESS
}
