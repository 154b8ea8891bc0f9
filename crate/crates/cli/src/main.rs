use clap::Parser;

use modrabi_cli::cli::{run, Cli};
use modrabi_cli::error::exit_code;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli).map_err(anyhow::Error::from) {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e));
    }
}
