//! Command-line front end for the verification harness.
//!
//! The binary runs one suite (or all of them) under a seeded, fully
//! deterministic configuration and prints a report to stdout. The default
//! format is canonical JSON — byte-identical across repeated runs with the
//! same configuration — with a one-line summary on stderr. Exit codes:
//! `0` every check passed, `1` at least one failure, `2` configuration or
//! runtime error.

use clap::{Parser, Subcommand, ValueEnum};
use slicecalc::harness::{
    self, render_csv, render_json, render_text, HarnessConfig, SuiteId,
};
use std::path::PathBuf;

// ═══════════════════════════════════════════════════════════════════════
//  Argument surface
// ═══════════════════════════════════════════════════════════════════════

#[derive(Parser)]
#[command(
    name = "verify-cli",
    version,
    about = "Numerical verification of the harmonic and biharmonic functional calculi \
             on the S-spectrum"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file; command-line flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed for every randomized check.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Operator rank for the identity battery (repeat for several ranks).
    #[arg(long = "d", global = true, value_name = "RANK")]
    d_values: Vec<usize>,

    /// Quadrature node count for the contour integrals.
    #[arg(long, global = true)]
    nodes: Option<usize>,

    /// Sample points per identity and rank.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Seeded cases per product rule.
    #[arg(long, global = true)]
    product_cases: Option<usize>,

    /// Also run the negative controls (wrong constants, non-slice inputs).
    #[arg(long, global = true)]
    negative_controls: bool,

    /// Evaluate identity tasks on a thread pool (same results, reordered work).
    #[arg(long, global = true)]
    parallel: bool,

    /// Attach wall-clock timings to records (breaks byte reproducibility).
    #[arg(long, global = true)]
    timings: bool,

    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Additionally write the canonical JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Resolvent identity battery (nineteen equations, several ranks).
    Identities,
    /// Contour calculi: reproduction, product rules, spectral projectors.
    Calculus,
    /// Pointwise kernel derivatives, composed chains and axial symmetry.
    Kernels,
    /// Every suite, in a fixed order.
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

// ═══════════════════════════════════════════════════════════════════════
//  Entry point
// ═══════════════════════════════════════════════════════════════════════

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();

    let mut cfg = match load_config(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("configuration error: {message}");
            return 2;
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if !cli.d_values.is_empty() {
        cfg.d_values = cli.d_values.clone();
    }
    if let Some(nodes) = cli.nodes {
        cfg.contour_nodes = nodes;
    }
    if let Some(samples) = cli.samples {
        cfg.samples_per_identity = samples;
    }
    if let Some(cases) = cli.product_cases {
        cfg.product_rule_cases = cases;
    }
    cfg.negative_controls |= cli.negative_controls;
    cfg.parallel |= cli.parallel;
    cfg.timings |= cli.timings;
    if let Err(err) = cfg.validate() {
        eprintln!("configuration error: {err}");
        return 2;
    }

    let suites: Vec<SuiteId> = match cli.command {
        Command::Identities => vec![SuiteId::Identities],
        Command::Calculus => vec![SuiteId::Calculus],
        Command::Kernels => vec![SuiteId::Kernels],
        Command::All => SuiteId::ALL.to_vec(),
    };

    let report = match harness::run(&cfg, &suites) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("harness error: {err}");
            return 2;
        }
    };

    let json = render_json(&report);
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Csv => print!("{}", render_csv(&report)),
        Format::Text => print!("{}", render_text(&report)),
    }
    if let Some(path) = &cli.json_out {
        if let Err(err) = std::fs::write(path, &json) {
            eprintln!("cannot write {}: {err}", path.display());
            return 2;
        }
    }

    eprintln!(
        "{} checks: {} passed, {} failed ({} controls)",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        report.summary.controls
    );
    i32::from(!report.all_passed())
}

fn load_config(path: Option<&std::path::Path>) -> Result<HarnessConfig, String> {
    match path {
        None => Ok(HarnessConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
            serde_json::from_str(&text)
                .map_err(|err| format!("cannot parse {}: {err}", path.display()))
        }
    }
}
