mod args;
mod commands;
mod config;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use commands::EXIT_USAGE;

fn run() -> i32 {
    let raw = match config::expand_args(std::env::args_os().collect()) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let command = Cli::command().args_override_self(true).mut_subcommands(|s| s.args_override_self(true));
    let cli = match command.try_get_matches_from(raw).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    let result = match &cli.command {
        Command::Measures(a) => commands::measures(a),
        Command::Phi(a) => commands::phi(a),
        Command::Fidelity(a) => commands::fidelity(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Critical(a) => commands::critical(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run());
}
