use clap::Parser;

fn main() {
    let cli = boseglow::cli::Cli::parse();
    std::process::exit(boseglow::cli::execute(cli));
}
