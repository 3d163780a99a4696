use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ricci_pinch::config::parse_config;
use ricci_pinch::runner::{execute, reverdict, VerdictOptions, EXIT_USAGE};

#[derive(Parser)]
#[command(version, about = "Ricci flow runs with a pinching-estimate monitor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write its monitor trace.
    Run { config: PathBuf },
    /// Re-evaluate the verdict on a saved trace.
    Verdict {
        trace: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Run { config } => {
            let outcome = std::fs::read_to_string(&config)
                .map_err(ricci_pinch::Error::from)
                .and_then(|text| parse_config(&text))
                .and_then(|cfg| execute(&cfg));
            match outcome {
                Ok(o) => {
                    println!("{} output={}", o.summary_line(), o.output_path.display());
                    o.exit_code
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    EXIT_USAGE
                }
            }
        }
        Command::Verdict { trace, n, c1, c2, epsilon, tol } => {
            let opts = VerdictOptions { n, c1, c2, epsilon, tolerance: tol };
            match reverdict(&trace, &opts) {
                Ok(r) => {
                    let s = &r.summary;
                    let mut line = format!(
                        "samples={} pass={} fail={} min_margin={:.6e}",
                        s.samples, s.passed, s.failed, s.min_margin
                    );
                    if let Some(t) = s.first_failure_t {
                        line.push_str(&format!(" first_failure_t={t:.6e}"));
                    }
                    if let Some(term) = r.termination {
                        line.push_str(&format!(" termination={}", term.name()));
                    }
                    println!("{line}");
                    r.exit_code
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", trace.display());
                    EXIT_USAGE
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
