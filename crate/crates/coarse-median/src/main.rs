use clap::Parser;

use coarse_median::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    std::process::exit(run(config));
}
