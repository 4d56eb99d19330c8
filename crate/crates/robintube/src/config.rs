//! Declarative experiment description, read from TOML.
//!
//! Every section except `cross_section` and `curve` has defaults. Validation
//! reports problems by their dotted field path, e.g. `run.eps[0]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use robintube_core::cross_section::{DomainShape, GammaMap, MomentRoute};
use robintube_core::geometry::{CurveSpec, Profile};
use robintube_core::waveguide3d::LateralMeasure;

use crate::error::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub name: String,
    pub cross_section: SectionConfig,
    pub curve: CurveConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Disk,
    Rectangle,
    Polygon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSegment {
    pub tag: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    pub shape: ShapeKind,
    pub radius: Option<f64>,
    #[serde(default)]
    pub center: [f64; 2],
    #[serde(default = "default_sectors")]
    pub sectors: usize,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub y0: Option<f64>,
    pub y1: Option<f64>,
    pub vertices: Option<Vec<[f64; 2]>>,
    pub h: f64,
    /// Robin weight on every boundary segment not listed in `gamma_segments`.
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub gamma_segments: Vec<GammaSegment>,
    #[serde(default)]
    pub gamma0: f64,
    #[serde(default)]
    pub gamma_l: f64,
    #[serde(default)]
    pub route: RouteConfig,
}

fn default_sectors() -> usize {
    4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteConfig {
    Boundary,
    #[default]
    Variational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvePreset {
    Straight,
    Constant,
    CircularArc,
    Helix,
    QuadraticWell,
    Sinusoidal,
    Polynomial,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub preset: CurvePreset,
    pub length: f64,
    /// Curvature for `constant`, base curvature for `quadratic_well` and `sinusoidal`.
    pub k: Option<f64>,
    /// Torsion for `constant`.
    pub tau: Option<f64>,
    pub radius: Option<f64>,
    /// Helix radius and pitch parameter.
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Well depth coefficient for `quadratic_well`, amplitude for `sinusoidal`.
    pub k1: Option<f64>,
    pub s0: Option<f64>,
    pub waves: Option<f64>,
    /// Polynomial curvature coefficients about `s0` (`polynomial` preset).
    pub coeffs: Option<Vec<f64>>,
    /// Sample spacing and samples for the `table` preset.
    pub step: Option<f64>,
    pub k_samples: Option<Vec<f64>>,
    pub tau_samples: Option<Vec<f64>>,
    pub alpha_samples: Option<Vec<f64>>,
    /// `α(s) = Σ alpha[i]·sⁱ`; ignored when `alpha_samples` is given.
    #[serde(default)]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchConfig {
    #[default]
    Auto,
    Symmetric,
    Localized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureConfig {
    #[default]
    Expanded,
    Exact,
}

impl From<MeasureConfig> for LateralMeasure {
    fn from(m: MeasureConfig) -> Self {
        match m {
            MeasureConfig::Expanded => LateralMeasure::Expanded,
            MeasureConfig::Exact => LateralMeasure::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub branch: BranchConfig,
    pub eps: Vec<f64>,
    pub modes: usize,
    pub n_s: usize,
    pub cells_1d: usize,
    pub phi_cells: usize,
    pub measure: MeasureConfig,
    pub workers: usize,
    pub blowup_refine: usize,
    /// ε values for the blow-up energy table; empty disables it.
    pub feps_eps: Vec<f64>,
    pub feps_points: usize,
    pub feps_window: f64,
    /// Skip the 3D sweep.
    pub skip_sweep: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            branch: BranchConfig::Auto,
            eps: vec![0.2, 0.1, 0.05, 0.025],
            modes: 4,
            n_s: 64,
            cells_1d: 1024,
            phi_cells: 2048,
            measure: MeasureConfig::Expanded,
            workers: 1,
            blowup_refine: 3,
            feps_eps: Vec::new(),
            feps_points: 120,
            feps_window: 2.0,
            skip_sweep: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    /// `|ρ0|` below which the section counts as symmetric; defaults to `1e-6·max(perimeter, 1)`.
    pub symmetry: Option<f64>,
    /// Largest blow-up distance accepted at the smallest ε.
    pub blowup_distance: f64,
    /// Relative tolerance on `√ε(λ1 − λ0)/(2ν0)` at the smallest ε.
    pub gap_ratio: f64,
    /// Relative slack on `θ0` for the trial-field limit.
    pub theta_slack: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { symmetry: None, blowup_distance: 0.2, gap_ratio: 0.2, theta_slack: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Subdirectory of the output root; defaults to the experiment name.
    pub dir: Option<String>,
    pub svg: bool,
    pub mode_slices: bool,
    /// Omit wall-clock timings so repeated runs are byte-identical.
    pub comparison: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: None, svg: true, mode_slices: true, comparison: false }
    }
}

fn need<T: Copy>(v: Option<T>, path: &str, why: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::field(path, format!("required {why}")))
}

fn positive(v: f64, path: &str) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::field(path, format!("must be positive, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != SCHEMA_VERSION {
            return Err(ConfigError::field("version", format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.version)));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(ConfigError::field("name", "must be a non-empty plain file name"));
        }
        let run = &self.run;
        if run.eps.is_empty() && !run.skip_sweep {
            return Err(ConfigError::field("run.eps", "empty list"));
        }
        check_eps(&run.eps, "run.eps")?;
        check_eps(&run.feps_eps, "run.feps_eps")?;
        if run.modes == 0 {
            return Err(ConfigError::field("run.modes", "must be at least 1"));
        }
        if run.n_s < 2 {
            return Err(ConfigError::field("run.n_s", "must be at least 2"));
        }
        if run.cells_1d < 16 {
            return Err(ConfigError::field("run.cells_1d", "must be at least 16"));
        }
        if run.phi_cells < 16 {
            return Err(ConfigError::field("run.phi_cells", "must be at least 16"));
        }
        if run.workers == 0 {
            return Err(ConfigError::field("run.workers", "must be at least 1"));
        }
        positive(run.feps_window, "run.feps_window")?;
        positive(self.cross_section.h, "cross_section.h")?;
        for (i, g) in self.cross_section.gamma_segments.iter().enumerate() {
            if !(g.gamma >= 0.0) {
                return Err(ConfigError::field(&format!("cross_section.gamma_segments[{i}].gamma"), "must be non-negative"));
            }
        }
        for (v, p) in [
            (self.cross_section.gamma, "cross_section.gamma"),
            (self.cross_section.gamma0, "cross_section.gamma0"),
            (self.cross_section.gamma_l, "cross_section.gamma_l"),
        ] {
            if !(v >= 0.0) {
                return Err(ConfigError::field(p, format!("must be non-negative, got {v}")));
            }
        }
        if let Some(t) = self.tolerances.symmetry {
            positive(t, "tolerances.symmetry")?;
        }
        positive(self.tolerances.blowup_distance, "tolerances.blowup_distance")?;
        positive(self.tolerances.gap_ratio, "tolerances.gap_ratio")?;
        positive(self.tolerances.theta_slack, "tolerances.theta_slack")?;
        self.domain_shape()?;
        self.curve_spec()?;
        Ok(())
    }

    pub fn domain_shape(&self) -> Result<DomainShape, ConfigError> {
        let c = &self.cross_section;
        Ok(match c.shape {
            ShapeKind::Disk => DomainShape::Disk {
                center: c.center,
                radius: positive(need(c.radius, "cross_section.radius", "for a disk")?, "cross_section.radius")?,
                sectors: c.sectors.max(1),
            },
            ShapeKind::Rectangle => {
                let x0 = need(c.x0, "cross_section.x0", "for a rectangle")?;
                let x1 = need(c.x1, "cross_section.x1", "for a rectangle")?;
                let y0 = need(c.y0, "cross_section.y0", "for a rectangle")?;
                let y1 = need(c.y1, "cross_section.y1", "for a rectangle")?;
                if !(x1 > x0) {
                    return Err(ConfigError::field("cross_section.x1", "must exceed x0"));
                }
                if !(y1 > y0) {
                    return Err(ConfigError::field("cross_section.y1", "must exceed y0"));
                }
                DomainShape::Rectangle { x0, x1, y0, y1 }
            }
            ShapeKind::Polygon => {
                let v = c
                    .vertices
                    .clone()
                    .ok_or_else(|| ConfigError::field("cross_section.vertices", "required for a polygon"))?;
                if v.len() < 3 {
                    return Err(ConfigError::field("cross_section.vertices", "needs at least 3 vertices"));
                }
                DomainShape::Polygon(v)
            }
        })
    }

    pub fn gamma_map(&self) -> GammaMap {
        let c = &self.cross_section;
        c.gamma_segments.iter().fold(GammaMap::constant(c.gamma), |m, g| m.with(g.tag, g.gamma))
    }

    pub fn route(&self) -> MomentRoute {
        match self.cross_section.route {
            RouteConfig::Boundary => MomentRoute::Boundary,
            RouteConfig::Variational => MomentRoute::Variational,
        }
    }

    pub fn curve_spec(&self) -> Result<CurveSpec, ConfigError> {
        let c = &self.curve;
        let len = positive(c.length, "curve.length")?;
        let why = |p: CurvePreset| format!("for preset {}", preset_name(p));
        let spec = match c.preset {
            CurvePreset::Straight => CurveSpec::straight(len),
            CurvePreset::Constant => CurveSpec::constant(len, need(c.k, "curve.k", &why(c.preset))?, c.tau.unwrap_or(0.0)),
            CurvePreset::CircularArc => {
                CurveSpec::circular_arc(len, positive(need(c.radius, "curve.radius", &why(c.preset))?, "curve.radius")?)
            }
            CurvePreset::Helix => CurveSpec::helix(
                len,
                positive(need(c.a, "curve.a", &why(c.preset))?, "curve.a")?,
                need(c.b, "curve.b", &why(c.preset))?,
            ),
            CurvePreset::QuadraticWell => CurveSpec::quadratic_well(
                len,
                need(c.k, "curve.k", &why(c.preset))?,
                need(c.k1, "curve.k1", &why(c.preset))?,
                c.s0.unwrap_or(len / 2.0),
            ),
            CurvePreset::Sinusoidal => CurveSpec::sinusoidal_curvature(
                len,
                need(c.k, "curve.k", &why(c.preset))?,
                need(c.k1, "curve.k1", &why(c.preset))?,
                need(c.waves, "curve.waves", &why(c.preset))?,
            ),
            CurvePreset::Polynomial => {
                let coeffs = c.coeffs.clone().ok_or_else(|| ConfigError::field("curve.coeffs", why(c.preset)))?;
                CurveSpec::new(
                    len,
                    Profile::Polynomial { center: c.s0.unwrap_or(0.0), coeffs },
                    Profile::Constant(c.tau.unwrap_or(0.0)),
                    Profile::zero(),
                )
                .map_err(|e| ConfigError::field("curve", e.to_string()))?
            }
            CurvePreset::Table => {
                let step = positive(need(c.step, "curve.step", &why(c.preset))?, "curve.step")?;
                let k = c.k_samples.clone().ok_or_else(|| ConfigError::field("curve.k_samples", why(c.preset)))?;
                let n = k.len();
                if n < 2 || ((n - 1) as f64 * step - len).abs() > 1e-9 * len {
                    return Err(ConfigError::field("curve.k_samples", "samples must cover [0, length] at the given step"));
                }
                let table = |v: Option<Vec<f64>>, p: &str| -> Result<Profile, ConfigError> {
                    match v {
                        None => Ok(Profile::zero()),
                        Some(v) if v.len() == n => Ok(Profile::Table { step, values: v }),
                        Some(_) => Err(ConfigError::field(p, "length differs from curve.k_samples")),
                    }
                };
                CurveSpec::new(
                    len,
                    Profile::Table { step, values: k },
                    table(c.tau_samples.clone(), "curve.tau_samples")?,
                    table(c.alpha_samples.clone(), "curve.alpha_samples")?,
                )
                .map_err(|e| ConfigError::field("curve", e.to_string()))?
            }
        };
        if c.alpha_samples.is_none() && !c.alpha.is_empty() {
            return Ok(spec.with_polynomial_alpha(&c.alpha));
        }
        Ok(spec)
    }
}

fn preset_name(p: CurvePreset) -> &'static str {
    match p {
        CurvePreset::Straight => "straight",
        CurvePreset::Constant => "constant",
        CurvePreset::CircularArc => "circular_arc",
        CurvePreset::Helix => "helix",
        CurvePreset::QuadraticWell => "quadratic_well",
        CurvePreset::Sinusoidal => "sinusoidal",
        CurvePreset::Polynomial => "polynomial",
        CurvePreset::Table => "table",
    }
}

fn check_eps(eps: &[f64], path: &str) -> Result<(), ConfigError> {
    for (i, &e) in eps.iter().enumerate() {
        if !(e > 0.0 && e < 1.0) {
            return Err(ConfigError::field(&format!("{path}[{i}]"), format!("must lie in (0, 1), got {e}")));
        }
        if i > 0 && !(e < eps[i - 1]) {
            return Err(ConfigError::field(&format!("{path}[{i}]"), "values must be strictly decreasing"));
        }
    }
    Ok(())
}
