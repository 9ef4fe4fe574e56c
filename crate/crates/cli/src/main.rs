use std::process::ExitCode;

use clap::Parser;
use fitbench::commands::run;
use fitbench::config::{Cli, JobConfig, Outcome};

fn main() -> ExitCode {
    let level = std::env::var("FITBENCH_LOG").unwrap_or_else(|_| "warn".into());
    env_logger::Builder::new()
        .parse_filters(&level)
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(Outcome::ConfigFailure.code());
        }
    };
    let outcome = match JobConfig::from_cli(cli) {
        Ok(config) => run(&config),
        Err(e) => {
            log::error!("{e}");
            Outcome::ConfigFailure
        }
    };
    ExitCode::from(outcome.code())
}
