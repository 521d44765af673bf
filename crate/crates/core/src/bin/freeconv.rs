use clap::Parser;

use freeprob::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
