use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qshare_cli::{execute, Cli, CliError};

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not worth a nonzero exit.
            let _ = out.write_all(body.as_bytes());
            let _ = out.flush();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|report| {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        emit(&cli, &report.body)?;
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
