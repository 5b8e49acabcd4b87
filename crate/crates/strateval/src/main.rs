use clap::Parser;

fn main() {
    env_logger::init();
    let cli = strateval::cli::Cli::parse();
    if let Err(error) = strateval::cli::run(cli) {
        eprintln!("error: {error}");
        std::process::exit(1);
    }
}
