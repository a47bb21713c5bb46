use clap::Parser;

use invalg_cli::{exit_code, render, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = run(&cli);
    let code = exit_code(&result);
    match result {
        Ok(v) => {
            let text = render(&v);
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        std::process::exit(1);
                    }
                }
                None => print!("{text}"),
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(code);
}
