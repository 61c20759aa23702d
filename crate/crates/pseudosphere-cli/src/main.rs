use clap::Parser;
use pseudosphere_cli::{run, Cli, EXIT_OK};

fn main() {
    let cli = Cli::parse();
    let (code, text) = run(&cli.command);
    if code == EXIT_OK {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    std::process::exit(code);
}
