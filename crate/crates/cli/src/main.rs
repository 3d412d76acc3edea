use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use nichols_cli::commands::{self, DEFAULT_DIMS_CAP, DEFAULT_VERIFY_CAP};
use nichols_cli::{Outcome, SpecDocument};

#[derive(Parser)]
#[command(
    name = "nichols",
    version,
    about = "Nichols algebras, bosonizations and their unrolled versions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args)]
struct Common {
    /// Algebra spec file (TOML).
    spec: PathBuf,
    /// Truncation degree.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Per-degree dimensions of B(V) or of the pre-Nichols quotient.
    Dims(Common),
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// hopf, biderivation, comodule, pairing or pointed; defaults to the
        /// suites listed in the spec, else hopf.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Build the (unrolled) bosonization and optionally serialize it.
    Unroll {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth of the PBW filtration of H ⋊ U(g).
    Gk(Common),
    /// Graded dual pairing checks and the action transfer test.
    Pair(Common),
}

fn load(c: &Common) -> anyhow::Result<SpecDocument> {
    let src = std::fs::read_to_string(&c.spec)
        .with_context(|| format!("reading {}", c.spec.display()))?;
    SpecDocument::parse(&src).with_context(|| format!("in {}", c.spec.display()))
}

fn run(cli: Cli) -> anyhow::Result<(Outcome, Format)> {
    let cap_or = |c: &Common, spec: &SpecDocument, d: usize| c.cap.or(spec.cap).unwrap_or(d);
    Ok(match cli.command {
        Command::Dims(c) => {
            let spec = load(&c)?;
            (
                commands::cmd_dims(&spec, cap_or(&c, &spec, DEFAULT_DIMS_CAP))?,
                c.format,
            )
        }
        Command::Verify { common: c, suite } => {
            let spec = load(&c)?;
            let cap = cap_or(&c, &spec, DEFAULT_VERIFY_CAP);
            let out = match suite {
                Some(s) => commands::cmd_verify(&spec, &s, cap)?,
                None if !spec.suites.is_empty() => {
                    commands::cmd_run_suites(&spec, &spec.suites, cap)?
                }
                None => commands::cmd_verify(&spec, "hopf", cap)?,
            };
            (out, c.format)
        }
        Command::Unroll { common: c, out } => {
            let spec = load(&c)?;
            let cap = cap_or(&c, &spec, DEFAULT_VERIFY_CAP);
            (commands::cmd_unroll(&spec, cap, out.as_deref())?, c.format)
        }
        Command::Gk(c) => {
            let spec = load(&c)?;
            (
                commands::cmd_gk(&spec, cap_or(&c, &spec, DEFAULT_DIMS_CAP))?,
                c.format,
            )
        }
        Command::Pair(c) => {
            let spec = load(&c)?;
            (
                commands::cmd_pair(&spec, cap_or(&c, &spec, DEFAULT_VERIFY_CAP))?,
                c.format,
            )
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, format)) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.report).expect("serializable")
                ),
                Format::Table => print!("{}", out.table),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
