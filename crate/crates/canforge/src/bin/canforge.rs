//! Thin command-line front door. All substance lives in the library; see the
//! examples/ directory for programmatic use.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use canforge::job::{cmd_run, load_job_file, FlagSelector, JobSpec};

#[derive(Parser)]
#[command(
    name = "canforge",
    version,
    about = "Exact computations for threefold singularities uv = f1...fn: \
             classification, blowup chart towers, Ext ladders, Gabriel quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML job file and write report.json (plus DOT files).
    Run {
        /// Path to the job file.
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify the base singularity from a factor list.
    Classify {
        #[command(flatten)]
        quick: QuickArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Chart tower, singular points and contraction types for a flag.
    Charts {
        #[command(flatten)]
        quick: QuickArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Gabriel quiver of the flag module's endomorphism algebra.
    Quiver {
        #[command(flatten)]
        quick: QuickArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for report.json and DOT files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker count for flag-level parallelism (output is identical for any value).
    #[arg(long)]
    jobs: Option<usize>,
    /// Cap on truncation orders accepted from the job file.
    #[arg(long)]
    max_order: Option<u32>,
}

#[derive(Args)]
struct QuickArgs {
    /// Comma-separated factor polynomials in x and y, e.g. "x,y,x+y".
    #[arg(long, required = true)]
    factors: String,
    /// Coefficient field: "Q" or "Q(i): t^2+1".
    #[arg(long, default_value = "Q")]
    field: String,
    /// Flag selector: "all-maximal", "all", "perm:2,1,3", or an explicit
    /// chain like "1;1,2" (subsets separated by ';').
    #[arg(long, default_value = "all-maximal")]
    flag: String,
    /// Comma-separated increasing truncation-order ladder.
    #[arg(long)]
    orders: Option<String>,
}

fn parse_flag_selector(s: &str) -> Result<FlagSelector, String> {
    match s {
        "all-maximal" | "all" => Ok(FlagSelector::Named(s.to_string())),
        _ => {
            if let Some(perm) = s.strip_prefix("perm:") {
                let permutation = parse_usize_list(perm)?;
                return Ok(FlagSelector::Permutation { permutation });
            }
            let chain = s
                .split(';')
                .map(parse_usize_list)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FlagSelector::Explicit(chain))
        }
    }
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}

fn quick_spec(quick: &QuickArgs, analyses: &[&str]) -> Result<JobSpec, String> {
    Ok(JobSpec {
        field: Some(quick.field.clone()),
        factors: quick
            .factors
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        flags: Some(parse_flag_selector(&quick.flag)?),
        orders: match &quick.orders {
            Some(o) => Some(parse_u32_list(o)?),
            None => None,
        },
        analyses: Some(analyses.iter().map(|s| s.to_string()).collect()),
        max_order: None,
        out: None,
        jobs: None,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (spec, common) = match &cli.command {
        Command::Run { spec, common } => match load_job_file(spec) {
            Ok(s) => (s, common),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        Command::Classify { quick, common } => match quick_spec(quick, &["classify"]) {
            Ok(s) => (s, common),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        Command::Charts { quick, common } => match quick_spec(quick, &["classify", "charts"]) {
            Ok(s) => (s, common),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        Command::Quiver { quick, common } => match quick_spec(quick, &["classify", "quiver"]) {
            Ok(s) => (s, common),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    match cmd_run(&spec, common.out.as_deref(), common.jobs, common.max_order) {
        Ok((out, dir)) => {
            for (name, _) in &out.files {
                eprintln!("wrote {}", dir.join(name).display());
            }
            let summary = &out.report.verdict_summary;
            if summary.certified {
                eprintln!("all verdicts certified");
            } else {
                for c in &summary.caveats {
                    eprintln!("caveat: {c}");
                }
            }
            ExitCode::from(out.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
