mod args;
mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Threshold(a) => run::threshold(a),
        Command::Potential(a) => run::potential(a),
        Command::Map(a) => run::map(a),
        Command::Optimize(a) => run::optimize(a),
        Command::Table(a) => run::table(a),
        Command::Simulate(a) => run::simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
