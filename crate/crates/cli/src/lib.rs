//! Command-line front end: single runs, parameter sweeps and closed-form
//! predictions, with CSV and JSON output.

pub mod args;
pub mod commands;
pub mod lists;
pub mod trajectory;

use std::io::Write;

use anyhow::Result;

pub use args::{Cli, Command};
pub use commands::Status;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    match &cli.command {
        Command::Simulate(args) => commands::simulate(args, out),
        Command::Sweep(args) => commands::sweep(args, out),
        Command::Predict(args) => commands::predict(args, out),
    }
}
