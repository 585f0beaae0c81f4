use clap::Parser;
use fracdiff::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
