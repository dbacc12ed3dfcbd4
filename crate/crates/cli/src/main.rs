use clap::Parser;
use tilesed_cli::commands::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = run(cli, &mut stdout, |k| std::env::var(k).ok()) {
        eprintln!("tilesed: {e}");
        std::process::exit(e.exit_code());
    }
}
