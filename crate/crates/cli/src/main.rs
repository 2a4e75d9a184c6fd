use clap::Parser;

use jc_cli::app::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(err) = execute(&cli, &mut stdout.lock()) {
        eprintln!("jcsim: {err}");
        std::process::exit(err.exit_code());
    }
}
