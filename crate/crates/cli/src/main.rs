use clap::Parser;
use mdms_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(&cli) {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}
