use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ewkg::Mode;

/// Evolve and diagnose radially symmetric Einstein-wave-Klein-Gordon data.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// cauchy | null | crosscheck | converge | diagnose
    mode: Mode,
    /// Configuration file with one `key = value` per line.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match ewkg::cli::run(args.mode, &args.config, args.output_dir.as_deref()) {
        Ok(artifacts) => {
            println!("{}", artifacts.report.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
