mod args;
mod commands;
mod frontier_file;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprintln!("error[E_USAGE]: {}", one_line(first_line(&e.to_string())));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", error_code(&e), one_line(&message(&e)));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    if let Some(workers) = cli.workers {
        anyhow::ensure!(workers > 0, "worker count must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;
    }
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Run(a) => commands::run(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Analyze(a) => commands::analyze(&a),
    }
}

/// Stable code for the first recognised error in the chain.
fn error_code(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(core) = cause.downcast_ref::<mogavs::Error>() {
            return core.code();
        }
        if cause.is::<serde_json::Error>() {
            return "E_JSON";
        }
        if cause.is::<std::io::Error>() {
            return "E_IO";
        }
    }
    "E_USAGE"
}

/// The error chain joined with `: `, skipping causes already quoted by an
/// outer message.
fn message(e: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in e.chain() {
        let part = cause.to_string();
        if !text.contains(&part) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&part);
        }
    }
    text
}

fn first_line(s: &str) -> &str {
    let line = s.lines().next().unwrap_or("");
    line.strip_prefix("error: ").unwrap_or(line)
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
