//! Command-line front end for the verification pipeline.
//!
//! Exit codes: 0 all checks pass, 1 any check fails, 2 usage or
//! configuration error, 3 inconclusive-at-precision results with no
//! failures.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fieldwork_core::pipeline::{
    cmd_all, cmd_verify_building, cmd_verify_cycle, cmd_verify_root, cmd_verify_torus, EllChoice,
    OutputFormat, RunConfig, VerificationReport,
};

#[derive(Parser)]
#[command(name = "fieldwork", version, about = "Exact-arithmetic verification workbench for SL_n(Z[t]) acting on the building of SL_n(Q((t^-1)))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification stage (or all of them) and print a report.
    Verify {
        #[command(subcommand)]
        stage: Stage,
    },
}

#[derive(Subcommand)]
enum Stage {
    /// Laurent-series root expansion: residuals, Vieta identities.
    Root(StageArgs),
    /// Exact subgroup identities, word certificates, diagonalization.
    Torus(StageArgs),
    /// Stabilizer shapes, boundary combinatorics, contraction profile.
    Building(StageArgs),
    /// Wall elements, rescaling exponent, sphere homology, membership.
    Cycle(StageArgs),
    /// All four stages in order, stopping after a hard failure.
    All(StageArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct StageArgs {
    /// Matrix size n (>= 2).
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Truncation floor (a negative exponent); per-stage defaults if unset.
    #[arg(long = "prec", allow_negative_numbers = true)]
    prec: Option<i64>,

    /// Exponent bound M for the exhaustive word suites.
    #[arg(long = "word-bound", default_value_t = 3)]
    word_bound: i64,

    /// Filtration escape exponent k (the sphere surrounds b^k e).
    #[arg(long, default_value_t = 4)]
    k: i64,

    /// Base-point offset k0 (defaults to k + 2).
    #[arg(long)]
    k0: Option<i64>,

    /// Rescaling exponent: "auto" or an explicit positive integer.
    #[arg(long, default_value = "auto")]
    ell: String,

    /// Number of random matrices in the oracle suites.
    #[arg(long = "matrix-samples", default_value_t = 100)]
    matrix_samples: usize,

    /// Number of random vertices in the oracle suites.
    #[arg(long = "vertex-samples", default_value_t = 10)]
    vertex_samples: usize,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for every random sample; fixed seed means byte-identical JSON.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn parse_config(args: &StageArgs) -> Result<RunConfig, String> {
    let ell = match args.ell.as_str() {
        "auto" => EllChoice::Auto,
        other => match other.parse::<u64>() {
            Ok(v) if v >= 1 => EllChoice::Fixed(v),
            _ => return Err(format!("--ell must be \"auto\" or a positive integer, got {other}")),
        },
    };
    Ok(RunConfig {
        n: args.n,
        floor: args.prec,
        word_bound: args.word_bound,
        k: args.k,
        k0: args.k0,
        ell,
        matrix_samples: args.matrix_samples,
        vertex_samples: args.vertex_samples,
        seed: args.seed,
        format: match args.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
    })
}

fn emit(report: &VerificationReport) -> ExitCode {
    match report.config.format {
        OutputFormat::Json => print!("{}", report.to_json_string()),
        OutputFormat::Text => print!("{}", report.render_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify { stage } = cli.command;
    let (args, runner): (&StageArgs, fn(&RunConfig) -> fieldwork_core::Result<VerificationReport>) =
        match &stage {
            Stage::Root(a) => (a, cmd_verify_root),
            Stage::Torus(a) => (a, cmd_verify_torus),
            Stage::Building(a) => (a, cmd_verify_building),
            Stage::Cycle(a) => (a, cmd_verify_cycle),
            Stage::All(a) => (a, cmd_all),
        };
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match runner(&config) {
        Ok(report) => emit(&report),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
