mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use usg_core::Error;

use args::{Cli, Command, Format, MultiCommand};
use commands::{Report, EXIT_NON_CONVERGENCE, EXIT_VALIDATION};

const EXIT_USAGE: u8 = 1;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. }
        | Error::Numerical(_)
        | Error::Indifferent { .. }
        | Error::InsufficientData { .. } => EXIT_NON_CONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let c = &cli.common;
    match &cli.command {
        Command::Solve { game, starts } => commands::solve(game, *starts, c),
        Command::Spectrum { game } => commands::spectrum(game, c),
        Command::Learn {
            game,
            rounds,
            trace,
            random_start,
        } => commands::learn(game, *rounds, trace.as_deref(), *random_start, c),
        Command::Approx { game } => commands::approx(game, c),
        Command::Multi {
            command: MultiCommand::Solve { game, trace },
        } => commands::multi_solve(game, trace.as_deref(), c),
        Command::Verify { result } => commands::verify(result),
        Command::Gen(args) => commands::gen(args, c),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("USG_LOG", "warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, &report.json) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_VALIDATION);
                }
            }
            let body = match cli.common.format {
                Format::Json => &report.json,
                Format::Text => &report.text,
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
            ExitCode::from(report.exit)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
