use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ifslab::{run_cli, Cli, RunError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run_cli(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            return ExitCode::from(RunError::EXIT_CODE as u8);
        }
    };
    let json = report.to_json();
    let mut stdout = std::io::stdout().lock();
    let written = match cli.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => stdout.write_all(json.as_bytes()),
        Some(p) => std::fs::write(p, &json).and_then(|_| {
            writeln!(
                stdout,
                "{}elapsed: {:.2?}",
                report.to_text(),
                start.elapsed()
            )
        }),
        None => writeln!(
            stdout,
            "{}elapsed: {:.2?}",
            report.to_text(),
            start.elapsed()
        ),
    };
    if let Err(e) = written {
        let _ = writeln!(std::io::stderr(), "error: {e}");
        return ExitCode::from(RunError::EXIT_CODE as u8);
    }
    ExitCode::from(report.outcome.exit_code() as u8)
}
