mod args;
mod commands;
mod error;

use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use rayon::prelude::*;

use args::{Cli, Command};
use error::{CliError, EXIT_DOMAIN};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HOPF3_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Threads(raw.clone()))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one command and returns the lines to print plus the exit status.
fn run_one(cmd: &Command) -> anyhow::Result<(Vec<String>, u8)> {
    let (outcome, config) = commands::execute(cmd)?;
    if let Some(path) = &cmd.run_args().output {
        let doc = commands::document(cmd.name(), path, config, outcome.result);
        std::fs::write(path, doc)
            .map_err(|source| CliError::Write { path: path.clone(), source })
            .with_context(|| format!("writing the {} report", cmd.name()))?;
    }
    let mut lines = outcome.summary;
    let status = match outcome.failure {
        Some(e) => {
            lines.push(format!("error[{}]: {e}", e.code()));
            e.exit_code()
        }
        None => 0,
    };
    Ok((lines, status))
}

fn error_line(err: &anyhow::Error) -> (String, u8) {
    match err.chain().find_map(|e| e.downcast_ref::<CliError>()) {
        Some(c) => (format!("error[{}]: {c}", c.code()), c.exit_code()),
        None => (format!("error[E_INTERNAL]: {err:#}"), EXIT_DOMAIN),
    }
}

fn run_batch(path: &std::path::Path) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let argv = std::iter::once("hopf3").chain(line.split_whitespace());
        let cli = Cli::try_parse_from(argv)
            .map_err(|e| CliError::Batch { line: i + 1, message: e.to_string().lines().next().unwrap_or("").to_string() })?;
        let cmd = cli.command.ok_or(CliError::Batch { line: i + 1, message: "no command".into() })?;
        jobs.push((i + 1, cmd));
    }
    let results: Vec<(usize, Vec<String>, u8)> = jobs
        .par_iter()
        .map(|(line, cmd)| match run_one(cmd) {
            Ok((lines, status)) => (*line, lines, status),
            Err(e) => {
                let (msg, status) = error_line(&e);
                (*line, vec![msg], status)
            }
        })
        .collect();
    let mut worst = 0;
    for (line, lines, status) in results {
        for l in lines {
            println!("[line {line}] {l}");
        }
        worst = worst.max(status);
    }
    Ok(worst)
}

fn real_main() -> anyhow::Result<u8> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(0);
        }
        Err(e) => return Err(CliError::Usage(e.to_string().trim_end().to_string()).into()),
    };
    configure_threads()?;
    if let Some(path) = &cli.batch {
        return run_batch(path);
    }
    let Some(cmd) = cli.command else {
        return Err(CliError::Usage("no command given; see `hopf3 --help`".into()).into());
    };
    let (lines, status) = run_one(&cmd)?;
    for l in &lines[..lines.len() - usize::from(status != 0)] {
        println!("{l}");
    }
    if status != 0 {
        eprintln!("{}", lines.last().expect("failure line"));
    }
    Ok(status)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            let (msg, status) = error_line(&e);
            eprintln!("{msg}");
            ExitCode::from(status)
        }
    }
}
