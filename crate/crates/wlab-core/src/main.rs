use std::io::{self, Write};

use clap::Parser;
use wlab_core::cli::{init_threads, render_error, run, source_text, Cli};

fn main() {
    let cli = Cli::parse();
    init_threads();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not an error for a command-line filter
            match stdout.write_all(out.stdout.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    std::process::exit(2);
                }
                Ok(()) => {}
            }
            std::process::exit(out.code);
        }
        Err(e) => {
            eprint!("{}", render_error(&e, source_text(&cli)));
            std::process::exit(2);
        }
    }
}
