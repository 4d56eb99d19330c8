use rayon::prelude::*;
use serde::Serialize;

use robintube_core::cross_section::{
    compute_m0, lemma_threshold, mesh_domain, solve_ground_state, solve_shape_functions, CrossSection, GroundState,
    PerturbationTensors, ShapeFunctions,
};
use robintube_core::effective1d::{
    build_potential, compute_constants, rho_norm, solve_sturm_liouville, symmetry_tolerance, EffectiveConstants,
    Potential1D, SturmLiouvilleSpectrum,
};
use robintube_core::geometry::CurveSpec;
use robintube_core::localization::{
    analyze_phi, blowup_grid, compute_theta0, f_eps_bounds, hermite_mode, optimal_correction, oscillator_spectrum,
    FEpsTable, LocalizationData, OptimalCorrection, Theta0,
};
use robintube_core::waveguide3d::{
    assemble_tube_form, bounded_quotient, extract_blowup, localized_shift, localized_trial_field, mapped_grid,
    recovery_field, solve_spectrum_3d, symmetric_shift, ErrorScale, SpectralReport, TubeMesh, TUBE_TOL,
};

use crate::config::{BranchConfig, ExperimentConfig};
use crate::error::{RunError, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Symmetric,
    Localized,
}

pub struct Section {
    pub cs: CrossSection,
    pub gs: GroundState,
    pub sf: ShapeFunctions,
    pub tensors: PerturbationTensors,
    pub consts: EffectiveConstants,
    pub rho: [f64; 2],
    pub symmetry_tol: f64,
}

pub fn build_section(cfg: &ExperimentConfig) -> Result<Section, RunError> {
    let c = &cfg.cross_section;
    let mesh = mesh_domain(&cfg.domain_shape()?, c.h)
        .and_then(|m| m.with_gamma(&cfg.gamma_map()))
        .and_then(|m| m.with_end_caps(c.gamma0, c.gamma_l))
        .stage("cross-section mesh")?;
    let cs = CrossSection::new(mesh).stage("cross-section assembly")?;
    let gs = solve_ground_state(&cs).stage("ground state")?;
    let sf = solve_shape_functions(&cs, &gs, cfg.route()).stage("shape functions")?;
    let tensors = compute_m0(&cs, &gs, &sf).stage("moment tensor")?;
    let consts = compute_constants(&cs, &gs);
    let rho = gs.rho(cfg.route());
    let symmetry_tol = cfg.tolerances.symmetry.unwrap_or_else(|| symmetry_tolerance(&cs.mesh));
    Ok(Section { cs, gs, sf, tensors, consts, rho, symmetry_tol })
}

/// Resolves `auto` by the balance vector and refuses a forced branch that contradicts it.
pub fn resolve_branch(cfg: &ExperimentConfig, sec: &Section) -> Result<Branch, RunError> {
    let norm = rho_norm(sec.rho);
    let measured = if norm <= sec.symmetry_tol { Branch::Symmetric } else { Branch::Localized };
    match (cfg.run.branch, measured) {
        (BranchConfig::Auto, b) => Ok(b),
        (BranchConfig::Symmetric, Branch::Symmetric) | (BranchConfig::Localized, Branch::Localized) => Ok(measured),
        (BranchConfig::Symmetric, _) => Err(RunError::Branch(format!(
            "symmetric branch requested but |rho0| = {norm:.3e} exceeds {:.3e}",
            sec.symmetry_tol
        ))),
        (BranchConfig::Localized, _) => Err(RunError::Branch(format!(
            "localized branch requested but |rho0| = {norm:.3e} is below {:.3e}",
            sec.symmetry_tol
        ))),
    }
}

pub struct Symmetric {
    pub potential: Potential1D,
    pub spectrum: SturmLiouvilleSpectrum,
}

pub fn run_symmetric(cfg: &ExperimentConfig, sec: &Section, curve: &CurveSpec) -> Result<Symmetric, RunError> {
    let potential = build_potential(curve, &sec.tensors, &sec.consts, cfg.run.cells_1d).stage("effective potential")?;
    let n = cfg.run.modes.max(2);
    let spectrum = solve_sturm_liouville(&potential, &sec.consts, n).stage("Sturm-Liouville spectrum")?;
    Ok(Symmetric { potential, spectrum })
}

pub struct Localized {
    pub data: LocalizationData,
    pub theta: Theta0,
    pub correction: OptimalCorrection,
    pub levels: Vec<f64>,
    pub feps: Vec<FEpsTable>,
}

pub fn run_localized(cfg: &ExperimentConfig, sec: &Section, curve: &CurveSpec) -> Result<Localized, RunError> {
    let data = analyze_phi(curve, sec.rho, sec.symmetry_tol, cfg.run.phi_cells).stage("localization analysis")?;
    let theta = compute_theta0(&data, &sec.tensors, &sec.consts, curve).stage("theta0")?;
    let correction = optimal_correction(&data).stage("optimal correction")?;
    let levels = oscillator_spectrum(data.nu0, cfg.run.modes.max(2));
    let feps = cfg
        .run
        .feps_eps
        .iter()
        .map(|&eps| {
            let grid = blowup_grid(&data, curve.length, eps, cfg.run.feps_points, cfg.run.feps_window);
            f_eps_bounds(&sec.cs, &sec.gs, curve, &data, eps, &grid, cfg.run.feps_window)
        })
        .collect::<robintube_core::Result<Vec<_>>>()
        .stage("blow-up energy table")?;
    Ok(Localized { data, theta, correction, levels, feps })
}

pub enum Payload {
    Symmetric(Symmetric),
    Localized(Localized),
}

impl Payload {
    pub fn branch(&self) -> Branch {
        match self {
            Payload::Symmetric(_) => Branch::Symmetric,
            Payload::Localized(_) => Branch::Localized,
        }
    }
}

/// One ε of the 3D validation sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub computed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Trial-field quotient.
    pub trial_quotient: f64,
    /// Quotient minus the leading terms: `− λ0/ε²` (symmetric) or
    /// `− λ0/ε² − μ0/ε − ν0/√ε` (localized).
    pub trial_excess: f64,
    /// Blow-up distances to `±ŵᵢ⊗u0` for `i = 0, 1` (localized only).
    pub blowup_distance: Vec<f64>,
    #[serde(skip)]
    pub slice: Vec<f64>,
    #[serde(skip)]
    pub blowup_t: Vec<f64>,
    #[serde(skip)]
    pub blowup_norms: Vec<f64>,
}

fn sweep_one(
    cfg: &ExperimentConfig,
    sec: &Section,
    curve: &CurveSpec,
    payload: &Payload,
    tube: &TubeMesh,
    eps: f64,
) -> Result<SweepPoint, RunError> {
    let lambda0 = sec.gs.lambda0;
    let form = assemble_tube_form(curve, tube, eps, cfg.run.measure.into()).stage("tube form")?;
    let shift = match payload {
        Payload::Symmetric(p) => symmetric_shift(lambda0, eps, p.potential.mean(), p.spectrum.values[0]),
        Payload::Localized(p) => localized_shift(lambda0, eps, p.data.mu0),
    };
    let sp = solve_spectrum_3d(&form, cfg.run.modes, shift, lambda0).stage("3D spectrum")?;
    let m = &sec.cs.pencil.m;
    let e2 = eps * eps;
    let point = match payload {
        Payload::Symmetric(p) => {
            let predicted = p.spectrum.values.iter().take(cfg.run.modes).map(|mu| lambda0 / e2 + mu).collect();
            let v = recovery_field(curve, tube, &sec.gs, &sec.sf, eps, |s| p.spectrum.eval(0, s)).stage("recovery field")?;
            let q = bounded_quotient(&form, &sp, &v).stage("recovery quotient")?;
            SweepPoint {
                eps,
                computed: sp.values.clone(),
                predicted,
                residuals: sp.residuals.clone(),
                trial_quotient: q,
                trial_excess: q - lambda0 / e2,
                blowup_distance: Vec::new(),
                slice: tube.slice_at(&sp.vectors[0], curve.length / 2.0),
                blowup_t: Vec::new(),
                blowup_norms: Vec::new(),
            }
        }
        Payload::Localized(p) => {
            let d = &p.data;
            let predicted = p.levels.iter().take(cfg.run.modes).map(|nu| lambda0 / e2 + d.mu0 / eps + nu / eps.sqrt()).collect();
            let v = localized_trial_field(curve, tube, &sec.gs, &sec.sf, d, &p.correction, eps).stage("trial field")?;
            let q = bounded_quotient(&form, &sp, &v).stage("trial quotient")?;
            let grid = mapped_grid(tube, d.s0, eps, cfg.run.blowup_refine);
            let mut blowup_distance = Vec::new();
            let mut first = None;
            for i in 0..sp.vectors.len().min(2) {
                let bp = extract_blowup(tube, &sp.vectors[i], d.s0, eps, &grid, m);
                blowup_distance.push(bp.hermite_distance(i, d.nu0, &sec.gs.u0, m));
                if i == 0 {
                    first = Some(bp);
                }
            }
            let bp = first.expect("at least one mode");
            let norms = bp.slice_norms(m);
            // overlay on the scale of ŵ0: normalize by the total mass
            let scale = bp.norm_sq.sqrt();
            SweepPoint {
                eps,
                computed: sp.values.clone(),
                predicted,
                residuals: sp.residuals.clone(),
                trial_quotient: q,
                trial_excess: q - lambda0 / e2 - d.mu0 / eps - d.nu0 / eps.sqrt(),
                blowup_distance,
                slice: tube.slice_at(&sp.vectors[0], d.s0),
                blowup_t: bp.t.clone(),
                blowup_norms: norms.into_iter().map(|x| x / scale).collect(),
            }
        }
    };
    Ok(point)
}

pub fn run_sweep(
    cfg: &ExperimentConfig,
    sec: &Section,
    curve: &CurveSpec,
    payload: &Payload,
) -> Result<Vec<SweepPoint>, RunError> {
    let tube = TubeMesh::new(sec.cs.mesh.clone(), curve.length, cfg.run.n_s).stage("tube mesh")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.workers)
        .build()
        .map_err(|e| RunError::Output(e.to_string()))?;
    pool.install(|| cfg.run.eps.par_iter().map(|&eps| sweep_one(cfg, sec, curve, payload, &tube, eps)).collect())
}

pub fn spectral_report(payload: &Payload, points: &[SweepPoint]) -> Result<SpectralReport, RunError> {
    let scale = match payload {
        Payload::Symmetric(_) => ErrorScale::Symmetric,
        Payload::Localized(_) => ErrorScale::Localized,
    };
    let mut r = SpectralReport::default();
    for p in points {
        r.push_level(p.eps, &p.computed, &p.predicted, scale).stage("spectral report")?;
        for (i, d) in p.blowup_distance.iter().enumerate() {
            r.push_distance(p.eps, i, *d);
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Strictly decreasing, except that a step may stall once it reaches the
/// eigensolver resolution `floor[j]` of its ε.
fn decreasing_to_floor(v: &[f64], floor: &[f64]) -> bool {
    (1..v.len()).all(|j| v[j] < v[j - 1] || v[j] <= floor[j])
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Limit of `a + c√ε` through the last two samples.
pub fn sqrt_eps_limit(eps: &[f64], values: &[f64]) -> Option<f64> {
    let n = eps.len();
    if n < 2 {
        return None;
    }
    let (e1, e2) = (eps[n - 2].sqrt(), eps[n - 1].sqrt());
    let (v1, v2) = (values[n - 2], values[n - 1]);
    let c = (v1 - v2) / (e1 - e2);
    Some(v2 - c * e2)
}

pub fn evaluate_checks(cfg: &ExperimentConfig, sec: &Section, payload: Option<&Payload>, points: &[SweepPoint]) -> Vec<Check> {
    let mut out = Vec::new();
    let gap = sec.tensors.max_gap();
    let thr = lemma_threshold(&sec.cs);
    out.push(Check::new("cross_section.moment_forms_agree", gap <= thr, format!("gap {gap:.3e} <= {thr:.3e}")));
    let tol = &cfg.tolerances;
    match payload {
        Some(Payload::Symmetric(p)) => {
            let norm = rho_norm(sec.rho);
            out.push(Check::new("branch.symmetric_guard", norm <= sec.symmetry_tol, format!("|rho0| = {norm:.3e}")));
            let mu = &p.spectrum.values;
            let ascending = mu.windows(2).all(|w| w[0] < w[1]);
            out.push(Check::new("effective.spectrum_simple", ascending, fmt_list(mu)));
            if points.is_empty() {
                return out;
            }
            let floor = |i: usize| -> Vec<f64> { points.iter().map(|q| 10.0 * TUBE_TOL * q.computed[i].abs().max(1.0)).collect() };
            for i in 0..cfg.run.modes.min(3) {
                let err: Vec<f64> = points.iter().map(|p| (p.computed[i] - p.predicted[i]).abs()).collect();
                out.push(Check::new(
                    format!("sweep.symmetric_error_decreasing[{i}]"),
                    decreasing_to_floor(&err, &floor(i)),
                    fmt_list(&err),
                ));
            }
            if mu.len() >= 2 {
                let last = points.last().unwrap();
                let err0 = (last.computed[0] - last.predicted[0]).abs();
                let bound = 0.1 * (mu[1] - mu[0]);
                out.push(Check::new(
                    "sweep.symmetric_error_below_gap",
                    err0 < bound,
                    format!("eps {}: {err0:.3e} < {bound:.3e}", last.eps),
                ));
            }
            let rec: Vec<f64> = points.iter().map(|p| (p.trial_excess - mu[0]).abs()).collect();
            out.push(Check::new("sweep.recovery_quotient_converges", decreasing_to_floor(&rec, &floor(0)), fmt_list(&rec)));
        }
        Some(Payload::Localized(p)) => {
            let norm = rho_norm(sec.rho);
            out.push(Check::new("branch.localized_guard", norm > sec.symmetry_tol, format!("|rho0| = {norm:.3e}")));
            let c = &p.correction;
            let d = (c.min_energy - c.closed_form).abs();
            out.push(Check::new("localization.min_energy_closed_form", d <= 1e-10, format!("gap {d:.3e}")));
            let qd = p.theta.quartic_discrepancy();
            out.push(Check::new("localization.quartic_routes_agree", qd <= 1e-8, format!("gap {qd:.3e}")));
            if !p.feps.is_empty() {
                let cs: Vec<f64> = p.feps.iter().map(|t| t.fitted_c).collect();
                let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
                out.push(Check::new("localization.feps_constant_stable", lo > 0.0 && hi <= 2.0 * lo, fmt_list(&cs)));
                let dev: Vec<f64> = p.feps.iter().map(|t| t.max_deviation).collect();
                out.push(Check::new("localization.feps_deviation_decreasing", decreasing(&dev), fmt_list(&dev)));
            }
            if points.is_empty() {
                return out;
            }
            let eps: Vec<f64> = points.iter().map(|p| p.eps).collect();
            let nu0 = p.data.nu0;
            for i in 0..cfg.run.modes.min(2) {
                let err: Vec<f64> =
                    points.iter().map(|q| q.eps.sqrt() * (q.computed[i] - q.predicted[i]).abs()).collect();
                out.push(Check::new(format!("sweep.localized_level_error_decreasing[{i}]"), decreasing(&err), fmt_list(&err)));
            }
            let last = points.last().unwrap();
            if last.computed.len() >= 2 {
                let ratio = last.eps.sqrt() * (last.computed[1] - last.computed[0]) / (2.0 * nu0);
                out.push(Check::new(
                    "sweep.localized_gap_ratio",
                    (ratio - 1.0).abs() <= tol.gap_ratio,
                    format!("sqrt(eps)(l1 - l0)/(2 nu0) = {ratio:.4}"),
                ));
            }
            let delta: Vec<f64> = points.iter().map(|q| q.trial_excess).collect();
            out.push(Check::new("sweep.trial_excess_decreasing", decreasing(&delta), fmt_list(&delta)));
            let theta0 = p.theta.value;
            let cap = theta0 + tol.theta_slack * theta0.abs();
            match sqrt_eps_limit(&eps, &delta) {
                Some(lim) => out.push(Check::new(
                    "sweep.trial_excess_limit",
                    lim <= cap,
                    format!("limit {lim:.4e} <= theta0 {theta0:.4e} + slack ({cap:.4e})"),
                )),
                None => out.push(Check::new("sweep.trial_excess_limit", delta[0] <= cap, format!("single eps, {:.4e}", delta[0]))),
            }
            let dist: Vec<f64> = points.iter().map(|q| q.blowup_distance[0]).collect();
            out.push(Check::new("sweep.blowup_distance_decreasing", decreasing(&dist), fmt_list(&dist)));
            let fin = *dist.last().unwrap();
            out.push(Check::new(
                "sweep.blowup_distance_final",
                fin < tol.blowup_distance,
                format!("{fin:.4e} < {}", tol.blowup_distance),
            ));
        }
        None => {}
    }
    if !points.is_empty() {
        let ok = points.iter().all(|p| p.computed.windows(2).all(|w| w[0] <= w[1]));
        out.push(Check::new("sweep.levels_ascending", ok, format!("{} eps values", points.len())));
    }
    out
}

/// Profile used in the blow-up overlay plot.
pub fn hermite_overlay(nu0: f64, t: &[f64]) -> Vec<f64> {
    let w = hermite_mode(0, nu0);
    t.iter().map(|&x| w.eval(x).abs()).collect()
}
