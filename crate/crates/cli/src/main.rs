use clap::Parser;
use cone_rcb_cli::cli::{execute, Cli};
use std::io::{IsTerminal, Write};

fn main() {
    let cli = Cli::parse();
    let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    match execute(&cli, color) {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(o.output.as_bytes());
            let _ = out.flush();
            std::process::exit(o.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
