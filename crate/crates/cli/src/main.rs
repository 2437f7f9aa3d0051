//! `semireg`: command-line access to the metric catalog, curvature and
//! Einstein checks, and foliation figures.

mod args;
mod commands;
mod output;

use args::{Cli, Command};
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

fn run(cli: &Cli) -> commands::CmdResult {
    match &cli.command {
        Command::Metric { action } => commands::metric(action),
        Command::Check(a) => commands::check(a),
        Command::Curvature(a) => commands::curvature(a),
        Command::Einstein(a) => commands::einstein(a),
        Command::Foliate(a) => commands::foliate(a),
        Command::Expr { action } => commands::expr(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.json).as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
