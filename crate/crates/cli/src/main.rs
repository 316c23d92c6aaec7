use clap::Parser;

fn main() {
    let config = geovec_cli::RunConfig::parse();
    std::process::exit(geovec_cli::run(&config));
}
