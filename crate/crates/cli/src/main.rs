use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rawlsian_cli::{run, Artifact, Cli, CliError};

/// Solver trace verbosity, e.g. `RAWLSIAN_LOG=debug`.
const LOG_ENV: &str = "RAWLSIAN_LOG";

fn write(artifact: &Artifact) -> Result<(), CliError> {
    match &artifact.path {
        Some(path) => std::fs::write(path, &artifact.text).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(artifact.text.as_bytes())
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match run(cli).and_then(|artifacts| artifacts.iter().try_for_each(write)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
