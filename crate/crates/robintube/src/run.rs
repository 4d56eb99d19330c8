use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use robintube_core::geometry::{export_tube, integrate_frenet};

use crate::config::ExperimentConfig;
use crate::error::{RunError, Stage};
use crate::output::{self, Artifacts};
use crate::pipeline::{
    build_section, evaluate_checks, resolve_branch, run_localized, run_symmetric, run_sweep, spectral_report, Branch,
    Check, Payload, Section, SweepPoint,
};

/// Environment variable holding the default output root.
pub const OUT_ENV: &str = "ROBINTUBE_OUT";
pub const SUMMARY_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CrossSection,
    Effective,
    Localize,
    Sweep,
    ExportGeometry,
    Check,
    Run,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionSummary {
    pub lambda0: f64,
    pub rho0: [f64; 2],
    pub y0: [f64; 2],
    pub m0: [[f64; 2]; 2],
    pub c1: f64,
    pub c2: f64,
    pub gamma0: f64,
    pub gamma_l: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum BranchSummary {
    Symmetric { mu: Vec<f64> },
    Localized { s0: f64, mu0: f64, eta0: f64, nu0: f64, theta0: f64, nu: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub summary_version: u32,
    pub robintube_version: &'static str,
    pub name: String,
    pub command: Command,
    pub branch: Option<Branch>,
    pub section: SectionSummary,
    pub payload: Option<BranchSummary>,
    pub sweep: Vec<SweepPoint>,
    pub checks: Vec<Check>,
    pub all_passed: bool,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunSummary {
    /// 0 when every check passed, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.all_passed {
            0
        } else {
            2
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `explicit` if given, else `<root>/<output.dir or name>` with the root
/// taken from `$ROBINTUBE_OUT` (default `robintube-out`).
pub fn output_dir(cfg: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("robintube-out"));
    root.join(cfg.output.dir.as_deref().unwrap_or(&cfg.name))
}

struct Clock {
    enabled: bool,
    t: Instant,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn lap(&mut self, name: &str) {
        if self.enabled {
            self.laps.insert(name.to_string(), self.t.elapsed().as_secs_f64());
            self.t = Instant::now();
        }
    }
}

fn section_summary(sec: &Section) -> SectionSummary {
    SectionSummary {
        lambda0: sec.gs.lambda0,
        rho0: sec.rho,
        y0: sec.gs.y0,
        m0: sec.tensors.m0,
        c1: sec.consts.c1,
        c2: sec.consts.c2,
        gamma0: sec.consts.gamma0,
        gamma_l: sec.consts.gamma_l,
    }
}

fn branch_summary(p: &Payload) -> BranchSummary {
    match p {
        Payload::Symmetric(s) => BranchSummary::Symmetric { mu: s.spectrum.values.clone() },
        Payload::Localized(l) => BranchSummary::Localized {
            s0: l.data.s0,
            mu0: l.data.mu0,
            eta0: l.data.eta0,
            nu0: l.data.nu0,
            theta0: l.theta.value,
            nu: l.levels.clone(),
        },
    }
}

fn required_branch(cmd: Command) -> Option<Branch> {
    match cmd {
        Command::Effective => Some(Branch::Symmetric),
        Command::Localize => Some(Branch::Localized),
        _ => None,
    }
}

/// Runs `cmd` and writes its artifacts plus `summary.json` into `dir`.
/// Failed checks are recorded in the summary; only hard errors return `Err`.
pub fn execute(cfg: &ExperimentConfig, cmd: Command, dir: &Path) -> Result<RunSummary, RunError> {
    cfg.validate()?;
    let curve = cfg.curve_spec()?;
    let comparison = cfg.output.comparison;
    let mut out = Artifacts::create(dir, cfg.output.svg)?;
    let mut clock = Clock { enabled: !comparison, t: Instant::now(), laps: BTreeMap::new() };

    let sec = build_section(cfg)?;
    clock.lap("cross_section");
    if cmd != Command::Check {
        output::write_section(&mut out, &sec)?;
    }

    let mut branch = None;
    let mut payload = None;
    let mut points = Vec::new();
    match cmd {
        Command::CrossSection => {}
        Command::ExportGeometry => {
            let eps = cfg.run.eps[0];
            let frames = integrate_frenet(&curve, cfg.run.n_s).stage("centerline")?;
            output::write_centerline(&mut out, &frames)?;
            let polygon = sec.cs.mesh.boundary_polygon();
            let surface = export_tube(&curve, &polygon, eps, cfg.run.n_s, 1).stage("tube surface")?;
            out.text("surface.txt", &output::surface_text(&surface))?;
            clock.lap("geometry");
        }
        _ => {
            let b = resolve_branch(cfg, &sec)?;
            if let Some(want) = required_branch(cmd) {
                if want != b {
                    return Err(RunError::Branch(format!(
                        "command needs the {want:?} branch but |rho0| = {:.3e} resolves {b:?} (tolerance {:.3e})",
                        robintube_core::effective1d::rho_norm(sec.rho),
                        sec.symmetry_tol
                    )));
                }
            }
            branch = Some(b);
            let p = match b {
                Branch::Symmetric => Payload::Symmetric(run_symmetric(cfg, &sec, &curve)?),
                Branch::Localized => Payload::Localized(run_localized(cfg, &sec, &curve)?),
            };
            clock.lap("effective");
            let writes = cmd != Command::Check;
            if writes {
                match &p {
                    Payload::Symmetric(s) => output::write_symmetric(&mut out, s)?,
                    Payload::Localized(l) => output::write_localized(&mut out, l)?,
                }
            }
            let sweeps = matches!(cmd, Command::Sweep | Command::Run | Command::Check) && !cfg.run.skip_sweep;
            if sweeps {
                points = run_sweep(cfg, &sec, &curve, &p)?;
                clock.lap("sweep");
                let report = spectral_report(&p, &points)?;
                if writes {
                    let nu0 = match &p {
                        Payload::Localized(l) => Some(l.data.nu0),
                        Payload::Symmetric(_) => None,
                    };
                    output::write_sweep(&mut out, &sec, &points, &report, nu0, cfg.output.mode_slices)?;
                }
            }
            payload = Some(p);
        }
    }

    let checks = evaluate_checks(cfg, &sec, payload.as_ref(), &points);
    output::write_checks(&mut out, &checks)?;
    clock.lap("checks");
    let mut files = out.written.clone();
    files.push("summary.json".into());
    let summary = RunSummary {
        summary_version: SUMMARY_VERSION,
        robintube_version: env!("CARGO_PKG_VERSION"),
        name: cfg.name.clone(),
        command: cmd,
        branch,
        section: section_summary(&sec),
        payload: payload.as_ref().map(branch_summary),
        sweep: points,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
        files,
        timings: (!comparison).then_some(clock.laps),
    };
    out.json("summary.json", &summary)?;
    Ok(summary)
}
