use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use symclose_cli::{
    certify_angles, certify_cosine, check, closure, generate, load_config, orbit, parse_angles, OrbitArgs, RunReport,
    EXIT_INPUT,
};
use symclose_core::config::{ConfigMode, PolicyName};

/// Decide and test when subspace reflections or rotations generate the full orthogonal group.
#[derive(Parser)]
#[command(name = "symclose", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Reflection,
    Rotation,
    Lines,
    Hyperplanes,
}

impl From<ModeArg> for ConfigMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Reflection => ConfigMode::Reflection,
            ModeArg::Rotation => ConfigMode::Rotation,
            ModeArg::Lines => ConfigMode::Lines,
            ModeArg::Hyperplanes => ConfigMode::Hyperplanes,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    RandomWords,
    Walk,
}

#[derive(Subcommand)]
enum Command {
    /// Check the hypotheses for a config (exit 0 pass, 1 fail, 2 heuristic/inconclusive).
    Check { config: PathBuf },
    /// Write a witness family for dimension n and subspace dimension i.
    Generate {
        n: usize,
        i: usize,
        mode: ModeArg,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sample an orbit and judge density (exit 0 dense, 1 confined, 2 inconclusive).
    Orbit {
        config: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long)]
        probe_seed: Option<u64>,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
        /// Write the sampled points as CSV.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Enumerate the group generated by the reflections (exit 0 cap exceeded, 1 finite).
    Closure {
        config: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Certify an angle from its rational cosine, or search for integer relations among angles.
    Certify {
        /// Cosine as p/q.
        #[arg(long = "cos", conflicts_with = "angles_file", required_unless_present = "angles_file")]
        cosine: Option<String>,
        /// JSON array or one angle per line: acos(p/q), 3*pi/8, decimals.
        #[arg(long)]
        angles_file: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        bound: i64,
        #[arg(long, default_value_t = 64)]
        digits: u32,
        #[arg(long)]
        deadline_ms: Option<u64>,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SYMCLOSE_THREADS") else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => bail!("SYMCLOSE_THREADS must be a positive integer, got '{raw}'"),
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring worker threads")
}

fn run(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let report: RunReport = match cli.command {
        Command::Check { config } => check(load_config(&config)?)?,
        Command::Generate { n, i, mode, out } => {
            let json = generate(n, i, mode.into())?.to_json();
            match out {
                Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{json}"),
            }
            return Ok(0);
        }
        Command::Orbit { config, budget, threshold, seed, probes, probe_seed, policy, export } => {
            let args = OrbitArgs {
                budget,
                threshold,
                seed,
                probes,
                probe_seed,
                policy: policy.map(|p| match p {
                    PolicyArg::RandomWords => PolicyName::RandomWords,
                    PolicyArg::Walk => PolicyName::Walk,
                }),
            };
            orbit(load_config(&config)?, &args, export.as_deref())?
        }
        Command::Closure { config, cap, tol } => closure(load_config(&config)?, cap, tol)?,
        Command::Certify { cosine, angles_file, bound, digits, deadline_ms } => match (cosine, angles_file) {
            (Some(c), _) => certify_cosine(&c)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                certify_angles(&parse_angles(&text)?, bound, digits, deadline_ms.map(Duration::from_millis))?
            }
            (None, None) => bail!("give --cos or --angles-file"),
        },
    };
    println!("{}", report.to_json());
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
