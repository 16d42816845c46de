mod args;
mod commands;
mod config;
mod error;
mod output;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use error::CliError;

fn parse() -> Result<Cli, CliError> {
    let argv = config::expand(std::env::args().collect())?;
    let command = Cli::command().mut_subcommands(|sc| sc.allow_negative_numbers(true));
    let matches = match command.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))
}

fn run() -> Result<bool, CliError> {
    let cli = parse()?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::VerifyLemmas(a) => commands::verify_lemmas(a),
        Command::Illposed(a) => commands::illposed(a),
        Command::MuLimit(a) => commands::mu_limit(a),
        Command::Smoothing(a) => commands::smoothing(a),
        Command::Energy(a) => commands::energy(a),
        Command::Contraction(a) => commands::contraction(a),
    }
}

fn main() {
    let code = match run() {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("ks-lab: one or more checks failed; see the JSON summary");
            2
        }
        Err(e) => {
            eprintln!("ks-lab: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
