mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};

/// Wavelet-domain exemplar inpainting for PGM/PPM images.
///
/// Exit codes: 0 success, 2 invalid input or configuration, 3 empty or full
/// mask, 4 no usable exemplar window for the patch size.
#[derive(Parser, Debug)]
#[command(name = "wavinpaint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fill the masked region of one image
    Inpaint(RunArgs),
    /// Run every method on one image and tabulate quality against a truth image
    Compare(RunArgs),
    /// Dump the Haar subbands of an image as normalized rasters
    Decompose(RunArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let (args, run): (&RunArgs, fn(&RunConfig) -> error::CliResult<u8>) = match &cli.command {
        Command::Inpaint(a) => (a, commands::inpaint),
        Command::Compare(a) => (a, commands::compare),
        Command::Decompose(a) => (a, commands::decompose),
    };
    match RunConfig::resolve(args).and_then(|cfg| run(&cfg)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
