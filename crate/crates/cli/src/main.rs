mod args;
mod commands;
mod config;
mod error;
mod output;
mod plot;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use output::Output;

fn parse_args() -> CliResult<Cli> {
    let mut raw: Vec<OsString> = std::env::args_os().collect();
    let prog = raw.remove(0);
    let args = match config::find_config(&raw) {
        Some(path) => config::layer(raw, &PathBuf::from(path))?,
        None => raw,
    };
    Ok(Cli::parse_from(std::iter::once(prog).chain(args)))
}

/// The resolved configuration as TOML; it can be passed back via `--config`.
fn manifest(cli: &Cli) -> CliResult<String> {
    let body = toml::to_string(cli).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(format!(
        "# vcx {} {}\n{body}",
        env!("CARGO_PKG_VERSION"),
        cli.command.name()
    ))
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let out = Output::new(&cli.out)?;
    out.write("manifest.txt", &manifest(cli)?)?;
    match &cli.command {
        Command::Vc(a) => commands::vc(a),
        Command::Approx(a) => commands::approx(a, &out),
        Command::Compress(a) => commands::compress(a, &out),
        Command::Ratio(a) => commands::ratio(a, &out),
        Command::Lattice(a) => commands::lattice(a, cli.seed, &out),
        Command::Diffusion(a) => commands::diffusion(a, &out),
        Command::Figures(a) => commands::figures(a, cli.seed, &out),
    }
}

fn main() -> ExitCode {
    let result = parse_args().and_then(|cli| run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
