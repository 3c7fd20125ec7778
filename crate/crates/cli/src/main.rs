mod ops;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use ops::Op;

#[derive(Parser, Debug)]
#[command(name = "psllab", version, about = "Verification workbench for special linear groups over rings")]
struct Cli {
    /// Print the JSON report fragment instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every job of a manifest and write one JSON report.
    RunSuite {
        manifest: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    #[command(flatten)]
    Op(Op),
}

/// The subcommand as typed, for labeling single-job reports.
fn op_name() -> String {
    std::env::args().skip(1).find(|a| !a.starts_with('-')).unwrap_or_else(|| "job".into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::RunSuite { manifest, out, jobs } => {
            let text = match std::fs::read_to_string(&manifest) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", manifest.display());
                    return ExitCode::from(2);
                }
            };
            let parsed = match suite::parse_manifest(&text) {
                Ok(j) => j,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            let report = suite::run_suite(&parsed, jobs);
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{json}"),
            }
            let s = &report.summary;
            eprintln!("{} jobs: {} pass, {} fail, {} error, {} exploratory", s.total, s.pass, s.fail, s.error, s.exploratory);
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Op(op) => {
            let name = op_name();
            let start = Instant::now();
            let result = ops::run(&op);
            let text = result.as_ref().ok().map(|o| o.text.clone());
            let report = suite::judge(&name, &name, &[], &suite::Expect::Unspecified, result, start.elapsed().as_millis() as u64);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else if let Some(t) = text {
                println!("{t}");
            }
            if let Some(e) = &report.error {
                eprintln!("error: {e}");
            }
            let failed = report.status == "fail" || report.status == "error";
            ExitCode::from(u8::from(failed))
        }
    }
}
