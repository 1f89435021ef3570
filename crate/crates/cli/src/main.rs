use std::process::ExitCode;

use clap::Parser;
use jtq_cli::cli::{Cli, Sub};
use jtq_cli::{document, render, replay, CliError, Format, Provenance};

fn write_output(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    if let Sub::Replay { input } = &cli.command {
        let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
        let (out, same) = replay(&text)?;
        write_output(cli, &out)?;
        if !same {
            return Err(CliError::ReplayMismatch);
        }
        eprintln!("replay: identical");
        return Ok(());
    }
    let config = cli.run_config()?;
    let (doc, outcome) = document(&config, Provenance::now())?;
    let text = match config.format {
        Format::Json => render::json(&doc),
        Format::Csv => render::csv(&config, &outcome),
        Format::Text => render::text(&outcome),
    };
    write_output(cli, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("jtq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
