use std::io::Write;

use clap::Parser;
use ntu::commands::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let out = execute(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
