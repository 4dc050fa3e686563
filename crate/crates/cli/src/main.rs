use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdouble_core::export::{export, ExportTarget};
use qdouble_core::verify::{parse_check_list, run_verification, VerifyOptions};
use qdouble_core::{CartanType, Error};

#[derive(Parser)]
#[command(name = "qdouble", version, about = "Exact verification suites for small quantum groups at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and print a report.
    Verify {
        #[arg(long = "type", value_parser = parse_type)]
        cartan_type: CartanType,
        #[arg(long)]
        n: i64,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for parallel sweeps.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Include wall-clock times (makes output non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Write an object's structure data as a JSON document.
    Export {
        #[arg(long = "type", value_parser = parse_type)]
        cartan_type: CartanType,
        #[arg(long)]
        n: i64,
        /// One of uqb, Aq, J, Phi, double-generators.
        #[arg(long)]
        what: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_type(s: &str) -> Result<CartanType, String> {
    s.parse::<CartanType>().map_err(|e| e.to_string())
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            cartan_type,
            n,
            checks,
            seed,
            jobs,
            format,
            timings,
        } => {
            if let Some(j) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
                    return usage_error(e);
                }
            }
            let checks = match parse_check_list(&checks) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let opts = VerifyOptions {
                checks,
                seed,
                timings,
                ..Default::default()
            };
            let report = match run_verification(cartan_type, n, &opts) {
                Ok(r) => r,
                Err(Error::InvalidParameters(v)) => {
                    for violation in &v {
                        eprintln!("parameter violation: {violation}");
                    }
                    return ExitCode::from(EXIT_USAGE);
                }
                Err(e) => return usage_error(e),
            };
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Structured => println!("{}", report.to_json()),
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Export {
            cartan_type,
            n,
            what,
            out,
        } => {
            let target: ExportTarget = match what.parse() {
                Ok(t) => t,
                Err(e) => return usage_error(e),
            };
            let doc = match export(cartan_type, n, target) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            if let Err(e) = std::fs::write(&out, doc.to_json()) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return ExitCode::from(EXIT_USAGE);
            }
            eprintln!("wrote {} entries to {}", doc.entries.len(), out.display());
            ExitCode::SUCCESS
        }
    }
}
