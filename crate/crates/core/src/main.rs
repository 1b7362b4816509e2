use clap::Parser;

fn main() {
    let cli = morphic::cli::Cli::parse();
    std::process::exit(morphic::cli::run(&cli));
}
