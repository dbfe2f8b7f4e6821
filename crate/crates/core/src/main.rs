use std::io::Write;

use clap::Parser;
use qstrata::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (doc, code) = run(&cli);
    let text = doc.to_json();
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("qstrata: cannot write result: {e}");
        std::process::exit(1);
    }
    std::process::exit(code);
}
