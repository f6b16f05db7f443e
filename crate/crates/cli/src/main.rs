mod args;
mod commands;
mod error;
mod output;
mod settings;
mod svg;

use clap::Parser;

use args::{Cli, Command};
use error::EXIT_INPUT;

fn run(cli: Cli) -> Result<i32, error::CliError> {
    match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::BenchProx(a) => commands::bench(a),
        Command::Roc(a) => commands::roc(a),
        Command::ErrorVsN(a) => commands::error_n(a),
        Command::ErrorVsK(a) => commands::error_k(a),
        Command::ValidateBounds(a) => commands::validate_bounds(a),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        }),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            code
        }
    };
    std::process::exit(code);
}
