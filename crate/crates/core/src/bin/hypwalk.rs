use clap::Parser;

fn main() {
    std::process::exit(hypwalk::cli::main_with(hypwalk::cli::Cli::parse()));
}
