use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use convexreg::runner::{run, RunOptions};
use convexreg::{Experiment, HarnessError, Suite};
use convexreg_core::body::json::parse_body;
use convexreg_core::measure::{radial_moments, Estimate};
use convexreg_core::numerics::RngStream;
use convexreg_core::Config;

/// Numerical experiments on volume inequalities for convex bodies and
/// log-concave functions.
#[derive(Debug, Parser)]
#[command(name = "convexreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured suites and write one CSV per suite plus summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Output directory (defaults to the config's output.dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only this suite.
        #[arg(long)]
        suite: Option<String>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a config without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print radii certificates, symmetry and a barycenter estimate for a body.
    BodyInfo {
        body: PathBuf,
        /// Dimension for descriptions without an explicit `n`.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        directions: usize,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn run_cmd(config: &Path, opts: RunOptions) -> Result<ExitCode, HarnessError> {
    let exp = Experiment::load(config)?;
    let outcome = run(&exp, &opts)?;
    for r in &outcome.reports {
        let pass = r.records.iter().filter(|x| x.status.is_pass()).count();
        println!("{:<16} {pass}/{} pass", r.suite, r.records.len());
    }
    if let Some(dir) = &outcome.out {
        println!("reports written to {}", dir.display());
    }
    Ok(if outcome.all_pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}

fn fmt_estimate(e: &Estimate) -> String {
    format!("{:.6} ± {:.2e}", e.value, e.stderr)
}

fn body_info(path: &Path, dim: Option<usize>, seed: u64, directions: usize) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    let k = parse_body(&v, dim)?;
    let r = k.radii();
    println!("body        {}", k.provenance());
    println!("dimension   {}", k.dim());
    println!("symmetric   {}", k.is_symmetric());
    println!("inner       {:e}  (ball of this radius about 0 is contained)", r.inner);
    println!("outer       {:e}  (ball of this radius about 0 contains the body)", r.outer);
    let cfg = Config::default().with_directions(directions);
    let m = radial_moments(&k, &cfg, RngStream::new(seed))?;
    println!("volume      {}", fmt_estimate(&m.volume));
    let bar: Vec<String> =
        m.barycenter.value.iter().zip(&m.barycenter.stderr).map(|(v, s)| format!("{v:.6} ± {s:.1e}")).collect();
    println!("barycenter  [{}]", bar.join(", "));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, out, suite, jobs } => suite
            .map(|s| s.parse::<Suite>())
            .transpose()
            .and_then(|suite| run_cmd(&config, RunOptions { seed, out, suite, jobs })),
        Command::Validate { config } => Experiment::load(&config).map(|exp| {
            let names: Vec<&str> = exp.suites.iter().map(|s| s.name()).collect();
            println!("config ok: suites {}", names.join(", "));
            ExitCode::SUCCESS
        }),
        Command::BodyInfo { body, dim, seed, directions } => {
            body_info(&body, dim, seed, directions).map(|_| ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(match e {
            HarnessError::Invalid(_) => EXIT_INVALID,
            _ => EXIT_FAIL,
        })
    })
}
