use clap::Parser;
use nichols::cli::{main_with, Args};

fn main() {
    let args = Args::parse();
    let code = main_with(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
