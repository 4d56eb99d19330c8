//! Artifact writers. Every CSV starts with a one-line `#` stamp naming the
//! format version and the producing crate version; nothing time-dependent is
//! written unless timings are explicitly requested.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use robintube_core::cross_section::CrossSectionMesh;
use robintube_core::geometry::{FrenetSamples, SurfaceMesh};

use crate::error::RunError;
use crate::pipeline::{hermite_overlay, Check, Localized, Section, SweepPoint, Symmetric};
use crate::plot::{mesh_svg, LinePlot, Series};

pub const CSV_VERSION: u32 = 1;
pub const STAMP: &str = concat!("# robintube-csv v1 (robintube ", env!("CARGO_PKG_VERSION"), ")");

/// Output directory plus the list of files written into it, in order.
#[derive(Debug)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub svg: bool,
    pub written: Vec<String>,
}

impl Artifacts {
    pub fn create(dir: &Path, svg: bool) -> Result<Self, RunError> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), svg, written: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.dir.join(name)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        let p = self.path(name);
        fs::write(p, body)?;
        Ok(())
    }

    pub fn csv<R: AsRef<[String]>>(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<(), RunError> {
        let p = self.path(name);
        let mut file = fs::File::create(p)?;
        writeln!(file, "{STAMP}")?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r.as_ref())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn plot(&mut self, name: &str, plot: &LinePlot) -> Result<(), RunError> {
        if self.svg {
            self.text(name, &plot.to_svg())?;
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), RunError> {
        let body = serde_json::to_string_pretty(value).map_err(|e| RunError::Output(e.to_string()))?;
        self.text(name, &(body + "\n"))
    }
}

fn f(x: f64) -> String {
    // −0 prints as 0
    format!("{:e}", x + 0.0)
}

fn row(v: &[f64]) -> Vec<String> {
    v.iter().map(|&x| f(x)).collect()
}

/// `robintube-mesh 1` text format: counts line, then vertices, triangles and
/// boundary edges (`a b tag gamma`).
pub fn mesh_text(mesh: &CrossSectionMesh) -> String {
    let mut s = String::from("robintube-mesh 1\n");
    s += &format!("vertices {}\n", mesh.vertices.len());
    for (i, v) in mesh.vertices.iter().enumerate() {
        s += &format!("{} {} {} {}\n", f(v[0]), f(v[1]), f(mesh.gamma0[i]), f(mesh.gamma_l[i]));
    }
    s += &format!("triangles {}\n", mesh.triangles.len());
    for t in &mesh.triangles {
        s += &format!("{} {} {}\n", t[0], t[1], t[2]);
    }
    s += &format!("edges {}\n", mesh.edges.len());
    for e in &mesh.edges {
        s += &format!("{} {} {} {}\n", e.nodes[0], e.nodes[1], e.tag, f(e.gamma));
    }
    s
}

/// `robintube-surface 1` text format: vertices (x y z) then faces.
pub fn surface_text(surface: &SurfaceMesh) -> String {
    let mut s = String::from("robintube-surface 1\n");
    s += &format!("vertices {}\n", surface.vertices.len());
    for v in &surface.vertices {
        s += &format!("{} {} {}\n", f(v[0]), f(v[1]), f(v[2]));
    }
    s += &format!("faces {}\n", surface.faces.len());
    for t in &surface.faces {
        s += &format!("{} {} {}\n", t[0], t[1], t[2]);
    }
    s
}

pub fn write_section(out: &mut Artifacts, sec: &Section) -> Result<(), RunError> {
    let (gs, t, c) = (&sec.gs, &sec.tensors, &sec.consts);
    let kv: Vec<(&str, f64)> = vec![
        ("lambda0", gs.lambda0),
        ("lambda1", gs.lambda1),
        ("rho0_1", sec.rho[0]),
        ("rho0_2", sec.rho[1]),
        ("rho0_boundary_1", gs.rho0[0]),
        ("rho0_boundary_2", gs.rho0[1]),
        ("rho0_variational_1", gs.rho0_variational[0]),
        ("rho0_variational_2", gs.rho0_variational[1]),
        ("symmetry_tolerance", sec.symmetry_tol),
        ("y0_1", gs.y0[0]),
        ("y0_2", gs.y0[1]),
        ("m0_11", t.m0[0][0]),
        ("m0_12", t.m0[0][1]),
        ("m0_22", t.m0[1][1]),
        ("m0_asymmetry", t.asymmetry),
        ("moment_gap", t.max_gap()),
        ("c1", c.c1),
        ("c1_volume", c.c1_volume),
        ("c1_boundary", c.c1_boundary),
        ("c2", c.c2),
        ("gamma0_moment", c.gamma0),
        ("gamma_l_moment", c.gamma_l),
        ("chi1_residual", sec.sf.residual[0]),
        ("chi2_residual", sec.sf.residual[1]),
    ];
    out.csv("cross_section.csv", &["quantity", "value"], kv.iter().map(|(k, v)| vec![k.to_string(), f(*v)]))?;
    let mesh = &sec.cs.mesh;
    let u0 = &gs.u0.values;
    let [c1, c2] = &sec.sf.chi;
    out.csv(
        "u0.csv",
        &["x", "y", "u0", "chi1", "chi2"],
        mesh.vertices.iter().enumerate().map(|(i, v)| row(&[v[0], v[1], u0[i], c1.values[i], c2.values[i]])),
    )?;
    out.text("mesh.txt", &mesh_text(mesh))?;
    if out.svg {
        let edges: Vec<([usize; 2], f64)> = mesh.edges.iter().map(|e| (e.nodes, e.gamma)).collect();
        out.text("mesh.svg", &mesh_svg(&mesh.vertices, &mesh.triangles, &edges))?;
    }
    Ok(())
}

pub fn write_symmetric(out: &mut Artifacts, p: &Symmetric) -> Result<(), RunError> {
    let q = &p.potential;
    out.csv(
        "potential.csv",
        &["s", "q", "tensor_part", "twist_part", "derivative_part", "tau_tilde"],
        (0..q.s.len()).map(|i| row(&[q.s[i], q.q[i], q.tensor_part[i], q.twist_part[i], q.derivative_part[i], q.tau_tilde[i]])),
    )?;
    let sp = &p.spectrum;
    out.csv("mu.csv", &["i", "mu"], sp.values.iter().enumerate().map(|(i, m)| vec![i.to_string(), f(*m)]))?;
    let mut header = vec!["s".to_string()];
    header.extend((0..sp.vectors.len()).map(|i| format!("w{i}")));
    let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
    out.csv(
        "profiles.csv",
        &hdr,
        (0..sp.s.len()).map(|j| {
            let mut r = vec![sp.s[j]];
            r.extend(sp.vectors.iter().map(|v| v[j]));
            row(&r)
        }),
    )?;
    out.plot(
        "potential.svg",
        &LinePlot::new("Effective potential", "s", "q(s)")
            .with(Series::line("q", &q.s, &q.q))
            .with(Series::line("tensor", &q.s, &q.tensor_part).dashed())
            .with(Series::line("twist", &q.s, &q.twist_part).dashed())
            .with(Series::line("derivative", &q.s, &q.derivative_part).dashed()),
    )
}

pub fn write_localized(out: &mut Artifacts, p: &Localized) -> Result<(), RunError> {
    let d = &p.data;
    out.csv("phi.csv", &["s", "phi"], d.s.iter().zip(&d.phi).map(|(s, v)| row(&[*s, *v])))?;
    let kv = [
        ("s0", d.s0),
        ("mu0", d.mu0),
        ("eta0", d.eta0),
        ("nu0", d.nu0),
        ("d2", d.d2),
        ("d3", d.d3),
        ("d4", d.d4),
    ];
    out.csv("localization.csv", &["quantity", "value"], kv.iter().map(|(k, v)| vec![k.to_string(), f(*v)]))?;
    out.csv(
        "oscillator.csv",
        &["i", "level"],
        p.levels.iter().enumerate().map(|(i, v)| vec![i.to_string(), f(*v)]),
    )?;
    let t = &p.theta;
    let c = &p.correction;
    let addends = [
        ("tensor", t.tensor),
        ("twist", t.twist),
        ("derivative", t.derivative),
        ("quartic", t.quartic),
        ("quartic_moment", t.quartic_moment),
        ("quartic_quadrature", t.quartic_quadrature),
        ("correction", t.correction),
        ("theta0", t.value),
        ("min_energy", c.min_energy),
        ("min_energy_closed_form", c.closed_form),
        ("normalized_min_energy", c.normalized_min_energy),
    ];
    out.csv("theta0.csv", &["addend", "value"], addends.iter().map(|(k, v)| vec![k.to_string(), f(*v)]))?;
    out.csv(
        "feps.csv",
        &["eps", "t", "f_eps", "f0"],
        p.feps.iter().flat_map(|tab| (0..tab.t.len()).map(move |i| row(&[tab.eps, tab.t[i], tab.f_eps[i], tab.f0[i]]))),
    )?;
    out.csv(
        "feps_summary.csv",
        &["eps", "margin", "fitted_c", "max_deviation", "quadratic_coefficient"],
        p.feps.iter().map(|t| row(&[t.eps, t.margin, t.fitted_c, t.max_deviation, t.quadratic_coefficient])),
    )?;
    out.plot(
        "phi.svg",
        &LinePlot::new("Localization function", "s", "phi(s)")
            .with(Series::line("phi", &d.s, &d.phi))
            .with(Series::line("s0", &[d.s0, d.s0], &[d.mu0, d.mu0 + 0.25 * (max(&d.phi) - d.mu0)]).dashed()),
    )
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub fn write_sweep(
    out: &mut Artifacts,
    sec: &Section,
    points: &[SweepPoint],
    report: &robintube_core::waveguide3d::SpectralReport,
    nu0: Option<f64>,
    mode_slices: bool,
) -> Result<(), RunError> {
    out.csv(
        "spectral_report.csv",
        &["eps", "i", "lambda_computed", "lambda_predicted", "abs_err", "scaled_err"],
        report.rows.iter().map(|r| {
            vec![f(r.eps), r.index.to_string(), f(r.computed), f(r.predicted), f(r.abs_err), f(r.scaled_err)]
        }),
    )?;
    out.csv(
        "residuals.csv",
        &["eps", "i", "residual"],
        points.iter().flat_map(|p| p.residuals.iter().enumerate().map(move |(i, r)| vec![f(p.eps), i.to_string(), f(*r)])),
    )?;
    out.csv(
        "trial.csv",
        &["eps", "quotient", "excess"],
        points.iter().map(|p| row(&[p.eps, p.trial_quotient, p.trial_excess])),
    )?;
    if nu0.is_some() {
        out.csv(
            "blowup.csv",
            &["eps", "t", "slice_norm", "hermite"],
            points.iter().flat_map(|p| {
                let h = hermite_overlay(nu0.unwrap_or(1.0), &p.blowup_t);
                (0..p.blowup_t.len()).map(move |i| row(&[p.eps, p.blowup_t[i], p.blowup_norms[i], h[i]]))
            }),
        )?;
        out.csv(
            "blowup_distance.csv",
            &["eps", "i", "distance"],
            report.profile_distances.iter().map(|(e, i, d)| vec![f(*e), i.to_string(), f(*d)]),
        )?;
    }
    if mode_slices {
        let v = &sec.cs.mesh.vertices;
        for (k, p) in points.iter().enumerate() {
            out.csv(
                &format!("mode_slice_{k}.csv"),
                &["x", "y", "value"],
                v.iter().zip(&p.slice).map(|(x, s)| row(&[x[0], x[1], *s])),
            )?;
        }
    }
    let eps: Vec<f64> = points.iter().map(|p| p.eps).collect();
    let n = points.iter().map(|p| p.computed.len()).min().unwrap_or(0);
    let mut plot = LinePlot::new("Scaled level errors", "eps", "scaled |error|").log_x();
    for i in 0..n {
        let e = report.scaled_errors(i);
        plot = plot.with(Series::line(format!("i = {i}"), &eps, &e).with_markers());
    }
    out.plot("levels.svg", &plot)?;
    if let (Some(nu0), Some(last)) = (nu0, points.last()) {
        let h = hermite_overlay(nu0, &last.blowup_t);
        out.plot(
            "blowup.svg",
            &LinePlot::new(&format!("Blow-up profile at eps = {}", last.eps), "t", "slice norm")
                .with(Series::line("computed", &last.blowup_t, &last.blowup_norms))
                .with(Series::line("|w0|", &last.blowup_t, &h).dashed()),
        )?;
    }
    Ok(())
}

pub fn write_centerline(out: &mut Artifacts, fr: &FrenetSamples) -> Result<(), RunError> {
    out.csv(
        "centerline.csv",
        &["s", "x", "y", "z", "tx", "ty", "tz", "nx", "ny", "nz", "bx", "by", "bz"],
        (0..fr.s.len()).map(|i| {
            let (r, t, n, b) = (fr.r[i], fr.t[i], fr.n[i], fr.b[i]);
            row(&[fr.s[i], r[0], r[1], r[2], t[0], t[1], t[2], n[0], n[1], n[2], b[0], b[1], b[2]])
        }),
    )
}

pub fn write_checks(out: &mut Artifacts, checks: &[Check]) -> Result<(), RunError> {
    out.csv(
        "checks.csv",
        &["check", "passed", "detail"],
        checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]),
    )
}
