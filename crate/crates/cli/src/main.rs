use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

mod args;
mod commands;
mod output;

use args::{Cli, Command, Common};
use output::{emit, Report};

fn run(cli: &Cli) -> Result<u8, String> {
    let started = Instant::now();
    let (report, common): (Result<Report, stabrank::Error>, &Common) = match &cli.command {
        Command::Rank(a) => (commands::rank(a), &a.common),
        Command::Witness(a) => (commands::witness(a), &a.common),
        Command::Pipeline(a) => (commands::pipeline(a), &a.common),
        Command::Binomial(a) => (commands::binomial(a), &a.common),
        Command::Enumerate(a) => (commands::enumerate(a), &a.common),
        Command::Rs(a) => (commands::rs(a), &a.common),
        Command::Generate(a) => {
            let text = commands::generate(a).map_err(|e| e.to_string())?;
            emit(&text, a.common.output.as_deref())?;
            return Ok(0);
        }
    };
    let report = report.map_err(|e| e.to_string())?;
    let text = report.render(common, started)?;
    emit(&text, common.output.as_deref())?;
    Ok(report.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
