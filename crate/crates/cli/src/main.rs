use circlelab_cli::{effective, execute, Cli};
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, before anything is written
    let cli = Cli::parse();
    let eff = match effective(&cli) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if cli.common.dump_config {
        println!("{}", serde_json::to_string_pretty(&eff.to_config()).expect("config serializes"));
        return ExitCode::SUCCESS;
    }
    match execute(&eff) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
