use std::process::ExitCode;

use clap::Parser;

use dilute_bose_cli::args::Cli;
use dilute_bose_cli::{execute, THREADS_ENV};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads = match value.parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {value:?}");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }

    let result = cli
        .command
        .resolve()
        .and_then(|config| execute(&config, &cli.out, cli.baseline.as_deref()));
    match result {
        Ok(_) => {
            println!(
                "{}",
                cli.out.join(dilute_bose_cli::output::MANIFEST).display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
