use clap::Parser;

fn main() {
    std::process::exit(gfdm::cli::run(gfdm::cli::Cli::parse()));
}
