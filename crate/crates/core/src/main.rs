use clap::Parser;

use berge_ramsey::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = run(&cli, &mut stdout.lock());
    std::process::exit(code);
}
