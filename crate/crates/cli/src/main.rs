use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qci_core::harness::battery::BatteryError;
use qci_core::harness::selftest::run_all;
use qci_core::harness::{emit_report, generate_instance, parse_instance, run_battery, BatteryOptions, Cache, Family, Format, GenParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qci", version, about = "Exact Poincaré series checks for surjections of graded rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification battery on an instance file.
    Check(CheckArgs),
    /// Print a generated instance file.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
    },
    /// Run the acceptance battery.
    Selftest,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    hmax: Option<usize>,
    #[arg(long)]
    dmax: Option<i32>,
    /// Override the characteristic given in the file.
    #[arg(long = "char")]
    characteristic: Option<u64>,
    /// Comma-separated check groups: koszul, large, inert, ci, qci, inertness, all.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, env = "QCI_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Drop redundant ideal generators instead of rejecting the instance.
    #[arg(long)]
    minimize: bool,
}

fn check(args: CheckArgs) -> anyhow::Result<u8> {
    let file = &args.file;
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return Ok(3);
        }
    };
    let mut opts = BatteryOptions::for_instance(&inst, args.hmax, args.dmax, args.checks);
    opts.minimize = args.minimize;
    opts.characteristic = args.characteristic;
    if let Some(dir) = &args.cache_dir {
        opts.cache = Some(Cache::new(dir).with_context(|| format!("cache directory {}", dir.display()))?);
    }
    match run_battery(&inst, &opts) {
        Ok(report) => {
            print!("{}", emit_report(&report, args.format));
            Ok(report.exit_code() as u8)
        }
        Err(e @ BatteryError::CertificateDisagreement { .. }) => {
            eprintln!("error: {e}");
            Ok(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            Ok(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check(args),
        Command::Gen {
            family,
            seed,
            nvars,
            count,
            max_degree,
            a,
            b,
        } => {
            let params = GenParams {
                nvars,
                count,
                max_degree,
                a,
                b,
            };
            print!("{}", generate_instance(family, params, seed));
            Ok(0)
        }
        Command::Selftest => {
            let results = run_all();
            for c in &results {
                println!("{c}");
            }
            Ok(if results.iter().all(|c| c.passed) { 0 } else { 1 })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
