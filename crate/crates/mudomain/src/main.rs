use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mudomain::config::Command;
use mudomain::{parse_config, run, EXIT_OTHER, EXIT_SPEC};

/// Build Gross' μ-domain for a distribution and check the Brownian exit law.
#[derive(Debug, Parser)]
#[command(name = "mudomain", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for coefficients.csv, boundary.csv, exits.csv and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// No progress or summary output.
    #[arg(long)]
    quiet: bool,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return code(EXIT_OTHER);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error in {} at {e}", cli.config.display());
            return code(EXIT_SPEC);
        }
    };
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = cli.seed {
        cfg.sim.seed = seed;
    }
    let quiet = cli.quiet;
    let mut progress = |msg: &str| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    let outcome = run(&cfg, &mut progress);
    if !quiet {
        if cfg.has(Command::Report) {
            print!("{}", outcome.summary());
        }
        for f in &outcome.files {
            eprintln!("wrote {}", f.display());
        }
    }
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    code(outcome.exit_code())
}
