use clap::Parser;

use cavmag_cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match outcome.stdout {
            Some(report) => println!("{report}"),
            None => {
                for f in &outcome.files {
                    println!("{}", f.display());
                }
            }
        },
        Err(e) => {
            eprintln!("{}", e.record());
            std::process::exit(e.exit_code());
        }
    }
}
