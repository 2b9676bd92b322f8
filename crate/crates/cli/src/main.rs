mod commands;
mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lienard::rotate::Slot;
use lienard::{Sign, SystemSpec};
use serde_json::json;

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Analysis(_) => "analysis",
            CliError::Io(_) => "io",
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Analysis(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "lienard", version, about = "Singular points, indices and limit cycles of Lienard systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// JSON run config; flags override its keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// System as a JSON file path or inline JSON
    #[arg(long, global = true)]
    system: Option<String>,
    /// General form: a0,a1,..,a_{2k}
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// General form: b1,..,b_{2l}
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    /// Canonical form: a0,a2,..,a_{2k}
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha_even: Option<Vec<f64>>,

    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    l: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    beta_odd: Option<Vec<f64>>,
    /// Signs of the even restoring terms, e.g. `+,-`
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    even_signs: Option<Vec<Sign>>,

    #[arg(long, global = true)]
    r_min: Option<f64>,
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    r_escape: Option<f64>,
    #[arg(long, global = true)]
    t_return: Option<f64>,
    /// Directory for CSV output (profiles, trajectories)
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite and infinite singular points, index ledger, alternation
    Singular,
    /// Winding number of the field on a circle
    Index {
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Limit-cycle census around every anti-saddle
    Cycles,
    /// Run a sweep plan (from --plan or the config's `plan`)
    Sweep {
        /// Plan JSON file
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Build a configuration with k cycles around the origin
    Construct {
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        leading: Option<Sign>,
    },
    /// Rotation determinants, symmetry class, rotation monotonicity
    Certify {
        #[arg(long)]
        slot: Option<Slot>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
    },
    /// Trajectory CSVs from a list of starting points
    Portrait {
        /// Starting points `x,y;x,y;..`
        #[arg(long, allow_hyphen_values = true)]
        starts: Option<String>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Full acceptance suite
    Verify,
}

fn parse_starts(s: &str) -> Result<Vec<[f64; 2]>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: Vec<f64> = p
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Config(format!("bad start `{p}`: {e}")))?;
            match v[..] {
                [x, y] => Ok([x, y]),
                _ => Err(CliError::Config(format!("start `{p}` needs two numbers"))),
            }
        })
        .collect()
}

fn system_from_flags(c: &Common) -> Result<Option<SystemSpec>, CliError> {
    let bad = |e: serde_json::Error| CliError::Config(format!("system: {e}"));
    if let Some(s) = &c.system {
        let text = if s.trim_start().starts_with('{') {
            s.clone()
        } else {
            fs::read_to_string(s).map_err(|e| CliError::Config(format!("cannot read {s}: {e}")))?
        };
        return serde_json::from_str(&text).map(Some).map_err(bad);
    }
    if let Some(alpha) = &c.alpha {
        let v = json!({"form": "general", "alpha": alpha, "beta": c.beta.clone().unwrap_or_default()});
        return serde_json::from_value(v).map(Some).map_err(bad);
    }
    if let Some(ae) = &c.alpha_even {
        let bo = c.beta_odd.clone().unwrap_or_default();
        let signs = c.even_signs.clone().unwrap_or_else(|| vec![Sign::Plus; bo.len()]);
        let v = json!({"form": "canonical", "alpha_even": ae, "beta_odd": bo, "even_signs": signs});
        return serde_json::from_value(v).map(Some).map_err(bad);
    }
    if c.beta.is_some() {
        return Err(CliError::Config("--beta needs --alpha".into()));
    }
    Ok(None)
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let c = &cli.common;
    let base = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut flags = RunConfig {
        system: system_from_flags(c)?,
        seed: c.seed,
        tol: c.tol,
        samples: c.samples,
        r_min: c.r_min,
        r_max: c.r_max,
        r_escape: c.r_escape,
        t_return: c.t_return,
        k: c.k,
        l: c.l,
        beta_odd: c.beta_odd.clone(),
        even_signs: c.even_signs.clone(),
        csv_dir: c.csv_dir.clone(),
        ..RunConfig::default()
    };
    match &cli.command {
        Command::Index { x, y, radius } => {
            flags.x = *x;
            flags.y = *y;
            flags.radius = *radius;
        }
        Command::Sweep { plan: Some(p) } => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            flags.plan = Some(serde_json::from_str(&text).map_err(|e| CliError::Config(format!("plan: {e}")))?);
        }
        Command::Construct { ratio, budget, leading } => {
            flags.ratio = *ratio;
            flags.budget = *budget;
            flags.leading = *leading;
        }
        Command::Certify { slot, values } => {
            flags.slot = *slot;
            flags.values = values.clone();
        }
        Command::Portrait { starts, t_max } => {
            flags.starts = starts.as_deref().map(parse_starts).transpose()?;
            flags.t_max = *t_max;
        }
        _ => {}
    }
    let cfg = base.overlay(flags);
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("LIENARD_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Config(format!("LIENARD_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn write_report(out: Option<&PathBuf>, report: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    init_threads()?;
    let mut cfg = build_config(&cli)?;
    let (report, ok) = match cli.command {
        Command::Singular => commands::singular(&mut cfg)?,
        Command::Index { .. } => commands::index(&mut cfg)?,
        Command::Cycles => commands::cycles(&mut cfg)?,
        Command::Sweep { .. } => commands::sweep(&mut cfg)?,
        Command::Construct { .. } => commands::construct(&mut cfg)?,
        Command::Certify { .. } => commands::certify(&mut cfg)?,
        Command::Portrait { .. } => commands::portrait(&mut cfg)?,
        Command::Verify => commands::verify(&mut cfg)?,
    };
    write_report(cli.common.out.as_ref(), &report)?;
    Ok(ok)
}

fn fail(e: &CliError) -> ExitCode {
    let err = json!({"error": e.kind(), "message": e.to_string()});
    eprintln!("{err}");
    ExitCode::from(e.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Config(e.to_string().trim().to_string())),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(&e),
    }
}
