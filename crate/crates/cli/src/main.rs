mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use report::emit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::dispatch(&cli.command, &cli.global) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(
        &report.render(cli.global.format),
        cli.global.output.as_deref(),
    ) {
        eprintln!("error: IO: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
