use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use chaosctl::config::{Command, RunConfig};
use chaosctl::error::{CliError, CliResult};
use chaosctl::registry::Registry;

/// Target-oriented control of chaotic maps: simulate, scan and analyse.
#[derive(Debug, Parser)]
#[command(name = "chaosctl", version)]
struct Args {
    /// Command to run; overrides `command` in the config file.
    command: Option<Command>,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output prefix for `<prefix>.scan.csv`, `.orbit.csv`, `.report.txt`.
    #[arg(long)]
    out: Option<String>,
    /// Override one setting, e.g. `--set scan.grid=k/100`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Treat leaving the model domain as an error.
    #[arg(long)]
    strict: bool,
}

fn load(args: &Args) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config("--config", format!("cannot read {}: {e}", path.display()))
        })?;
        cfg.merge_text(&text)?;
    }
    for o in &args.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(c) = args.command {
        cfg.command = c;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if args.strict {
        cfg.strict = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let result = load(&args).and_then(|cfg| chaosctl::run(&cfg, &Registry::default()));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("chaosctl: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
