use clap::Parser;

fn main() {
    let cli = qeuler_cli::Cli::parse();
    std::process::exit(qeuler_cli::run(&cli));
}
