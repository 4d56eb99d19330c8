use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use robintube::{execute, output_dir, Command, ConfigError, ExperimentConfig, RunError, RunSummary};

/// Spectral experiments on thin Robin tubes.
#[derive(Parser)]
#[command(name = "robintube", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cross-section quantities only.
    CrossSection(Common),
    /// Effective 1D operator (symmetric branch).
    Effective(Common),
    /// Localization data and energy bounds (localized branch).
    Localize(Common),
    /// 3D validation sweep over the eps list.
    Sweep(Common),
    /// Centerline samples and the tube surface at the first eps.
    ExportGeometry(Common),
    /// Invariant suite; writes only checks and the summary.
    Check(Common),
    /// Every stage of the resolved branch plus the sweep.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory; defaults to $ROBINTUBE_OUT/<name>.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Comma-separated eps override, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Omit timings from the summary.
    #[arg(long)]
    comparison: bool,
}

fn load(c: &Common) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::load(&c.config)?;
    if let Some(eps) = &c.eps {
        cfg.run.eps = eps.clone();
    }
    if let Some(m) = c.modes {
        cfg.run.modes = m;
    }
    if let Some(w) = c.workers {
        cfg.run.workers = w;
    }
    cfg.output.comparison |= c.comparison;
    cfg.validate()?;
    Ok(cfg)
}

fn report(s: &RunSummary, dir: &std::path::Path) {
    for c in &s.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("wrote {} files to {}", s.files.len(), dir.display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match &cli.command {
        Cmd::CrossSection(c) => (Command::CrossSection, c),
        Cmd::Effective(c) => (Command::Effective, c),
        Cmd::Localize(c) => (Command::Localize, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
        Cmd::ExportGeometry(c) => (Command::ExportGeometry, c),
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Run(c) => (Command::Run, c),
    };
    let result = load(common).map_err(RunError::from).and_then(|cfg| {
        let dir = output_dir(&cfg, common.out.as_deref());
        execute(&cfg, cmd, &dir).map(|s| (s, dir))
    });
    match result {
        Ok((summary, dir)) => {
            report(&summary, &dir);
            ExitCode::from(summary.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
