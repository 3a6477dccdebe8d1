use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mixwidth::run::run;
use mixwidth::{Fault, Format, Mode, RunConfig};

/// Width estimates for intersections of mixed-norm balls.
///
/// Exit status: 0 on success, 1 when a verification suite fails, 2 on
/// input or usage errors.
#[derive(Debug, Parser)]
#[command(name = "mixwidth", version)]
struct Args {
    #[arg(long, value_enum, default_value = "estimate")]
    mode: Mode,
    /// JSON instance file (estimate, sweep and witness modes).
    #[arg(long)]
    instance: Option<PathBuf>,
    /// First n of a sweep (default 0).
    #[arg(long)]
    n_from: Option<u64>,
    /// Last n of a sweep (default mk/2).
    #[arg(long)]
    n_to: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Override for the numeric tolerance of every verification suite.
    #[arg(long)]
    tolerance_rel: Option<f64>,
    /// Trials per verification suite.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = RunConfig {
        mode: args.mode,
        instance: args.instance,
        n_from: args.n_from,
        n_to: args.n_to,
        seed: args.seed,
        format: args.format,
        tolerance_rel: args.tolerance_rel,
        trials: args.trials,
        fault: args.inject_fault,
    };
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
