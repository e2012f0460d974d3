use clap::Parser;

use tbrw_cli::args::Cli;
use tbrw_cli::{execute, Outcome};

fn main() {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Success) => {}
        Ok(Outcome::BoundViolations(count)) => {
            eprintln!("{count} bound check(s) failed");
            std::process::exit(3);
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            std::process::exit(err.exit_code());
        }
    }
}
