use std::process::ExitCode;

use clap::Parser;
use paracanonical::cli::{run, Cli, RunConfig, SEED_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let config = match RunConfig::from_cli(cli, env_seed.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (code, report) = run(&config);
    print!("{}", report.render(config.output));
    ExitCode::from(code as u8)
}
