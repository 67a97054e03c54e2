use clap::Parser;
use cubica_cli::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(cubica_cli::execute(&cli));
}
