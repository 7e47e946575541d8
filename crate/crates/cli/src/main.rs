mod cli;
mod commands;
mod output;
mod parse;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use cli::{Cli, Command, MetricCommand};
use output::{usage, Emitted, UsageError};

const EXIT_USAGE: u8 = 2;

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("METRIC_FORGE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("METRIC_FORGE_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Emitted> {
    configure_threads()?;
    match &cli.command {
        Command::Hamiltonian(a) => commands::hamiltonian(a, cli.format),
        Command::Spectrum(a) => commands::spectrum(a, cli.format),
        Command::Metric(MetricCommand::Basis(a)) => commands::metric_basis(a, cli.format),
        Command::Metric(MetricCommand::Verify(a)) => commands::metric_verify(a, cli.format),
        Command::Positivity(a) => commands::positivity_cmd(a, cli.format),
        Command::Continuum(a) => commands::continuum(a, cli.format),
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    use metric_forge::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        err.downcast_ref::<E>(),
        Some(
            E::Dimension(_)
                | E::NotSquare { .. }
                | E::SizeMismatch { .. }
                | E::UnsupportedSize(_)
                | E::CouplingDomain(_)
                | E::IndexRange { .. }
                | E::MissingSign(_)
                | E::InvalidArgument(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emitted = match run(&cli) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(if is_usage(&err) { EXIT_USAGE } else { 1 });
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &emitted.body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(emitted.body.as_bytes())
        }
    };
    if let Err(err) = written {
        eprintln!("error: cannot write output: {err}");
        return ExitCode::from(1);
    }
    ExitCode::from(emitted.exit_code)
}
