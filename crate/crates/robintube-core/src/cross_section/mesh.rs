use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    /// Endpoints in counterclockwise order along `∂ω`.
    pub nodes: [usize; 2],
    pub normal: Point,
    /// Unit tangent `ẏ`.
    pub tangent: Point,
    pub midpoint: Point,
    pub length: f64,
    /// Segment group used by the Robin weight map.
    pub tag: usize,
    pub gamma: f64,
}

/// Triangulated cross-section `ω` with per-edge Robin weights and nodal
/// end-cap weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<BoundaryEdge>,
    pub gamma0: Vec<f64>,
    pub gamma_l: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainShape {
    /// Boundary edges are tagged by `sectors` equal angular sectors starting at angle 0.
    Disk { center: Point, radius: f64, sectors: usize },
    /// Sides tagged 0 (bottom), 1 (right), 2 (top), 3 (left).
    Rectangle { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// Simple counterclockwise polygon; side `i` runs from vertex `i` to `i + 1`.
    Polygon(Vec<Point>),
}

/// Piecewise-constant Robin weight: `default` everywhere except listed tags.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaMap {
    pub default: f64,
    pub by_tag: Vec<(usize, f64)>,
}

impl GammaMap {
    pub fn constant(g: f64) -> Self {
        Self { default: g, by_tag: Vec::new() }
    }

    pub fn with(mut self, tag: usize, g: f64) -> Self {
        self.by_tag.push((tag, g));
        self
    }

    pub fn value(&self, tag: usize) -> f64 {
        self.by_tag
            .iter()
            .rev()
            .find(|(t, _)| *t == tag)
            .map_or(self.default, |(_, g)| *g)
    }
}

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn polygon_area(p: &[Point]) -> f64 {
    let n = p.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = tri_area(q1, q2, p1);
    let d2 = tri_area(q1, q2, p2);
    let d3 = tri_area(p1, p2, q1);
    let d4 = tri_area(p1, p2, q2);
    (d1 * d2 <= 0.0) && (d3 * d4 <= 0.0)
}

fn check_polygon(p: &[Point]) -> Result<()> {
    let n = p.len();
    if n < 3 {
        return Err(Error::invalid("polygon needs at least three vertices"));
    }
    let scale = p.iter().fold(0.0f64, |m, v| m.max(v[0].abs()).max(v[1].abs())).max(1.0);
    for i in 0..n {
        for j in i + 1..n {
            if (p[i][0] - p[j][0]).abs() + (p[i][1] - p[j][1]).abs() <= 1e-12 * scale {
                return Err(Error::invalid("polygon has a repeated vertex"));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]) {
                return Err(Error::invalid("polygon is self-intersecting"));
            }
        }
    }
    if polygon_area(p) <= 0.0 {
        return Err(Error::invalid("polygon must be counterclockwise"));
    }
    Ok(())
}

fn ear_clip(p: &[Point]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    let mut tris = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (a, b, c) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            if tri_area(p[a], p[b], p[c]) <= 0.0 {
                continue;
            }
            let inside = idx.iter().any(|&q| {
                q != a
                    && q != b
                    && q != c
                    && tri_area(p[a], p[b], p[q]) >= 0.0
                    && tri_area(p[b], p[c], p[q]) >= 0.0
                    && tri_area(p[c], p[a], p[q]) >= 0.0
            });
            if !inside {
                tris.push([a, b, c]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

fn red_refine(v: &mut Vec<Point>, t: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut get = |a: usize, b: usize, v: &mut Vec<Point>| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        *mid.entry(key).or_insert_with(|| {
            v.push([0.5 * (v[a][0] + v[b][0]), 0.5 * (v[a][1] + v[b][1])]);
            v.len() - 1
        })
    };
    let mut out = Vec::with_capacity(4 * t.len());
    for &[a, b, c] in t {
        let ab = get(a, b, v);
        let bc = get(b, c, v);
        let ca = get(c, a, v);
        out.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    out
}

fn disk_mesh(center: Point, radius: f64, h: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let nr = (radius / h).ceil().max(1.0) as usize;
    let mut v = vec![center];
    let mut ring_start = vec![0usize];
    for k in 1..=nr {
        ring_start.push(v.len());
        let r = radius * k as f64 / nr as f64;
        let m = 6 * k;
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            v.push([center[0] + r * th.cos(), center[1] + r * th.sin()]);
        }
    }
    let mut t = Vec::new();
    for k in 1..=nr {
        let (mi, mo) = (if k == 1 { 1 } else { 6 * (k - 1) }, 6 * k);
        let inner = |i: usize| if k == 1 { 0 } else { ring_start[k - 1] + i % mi };
        let outer = |o: usize| ring_start[k] + o % mo;
        let (mut i, mut o) = (0usize, 0usize);
        while o < mo || (k > 1 && i < mi) {
            let ai = if k == 1 { f64::INFINITY } else { (i + 1) as f64 / mi as f64 };
            let ao = (o + 1) as f64 / mo as f64;
            if o < mo && (ao <= ai + 1e-12 || i >= mi) {
                t.push([inner(i), outer(o), outer(o + 1)]);
                o += 1;
            } else {
                t.push([inner(i), outer(o), inner(i + 1)]);
                i += 1;
            }
        }
    }
    (v, t)
}

fn rectangle_mesh(x0: f64, x1: f64, y0: f64, y1: f64, h: f64) -> (Vec<Point>, Vec<[usize; 3]>) {
    let even = |l: f64| {
        let n = (l / h).ceil().max(2.0) as usize;
        n + n % 2
    };
    let (nx, ny) = (even(x1 - x0), even(y1 - y0));
    let mut v = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            v.push([
                x0 + (x1 - x0) * i as f64 / nx as f64,
                y0 + (y1 - y0) * j as f64 / ny as f64,
            ]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut t = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                t.push([a, b, c]);
                t.push([a, c, d]);
            } else {
                t.push([a, b, d]);
                t.push([b, c, d]);
            }
        }
    }
    (v, t)
}

/// Quasi-uniform triangulation with target edge length `h`; Robin weights start at zero.
pub fn mesh_domain(shape: &DomainShape, h: f64) -> Result<CrossSectionMesh> {
    if !(h > 0.0) {
        return Err(Error::invalid("mesh size must be positive"));
    }
    let (v, t) = match shape {
        DomainShape::Disk { center, radius, sectors } => {
            if !(*radius > 0.0) || *sectors == 0 {
                return Err(Error::invalid("disk needs a positive radius and at least one sector"));
            }
            disk_mesh(*center, *radius, h)
        }
        DomainShape::Rectangle { x0, x1, y0, y1 } => {
            if !(x1 > x0 && y1 > y0) {
                return Err(Error::invalid("empty rectangle"));
            }
            rectangle_mesh(*x0, *x1, *y0, *y1, h)
        }
        DomainShape::Polygon(p) => {
            check_polygon(p)?;
            let mut v = p.clone();
            let mut t = ear_clip(p);
            loop {
                let longest = t
                    .iter()
                    .flat_map(|tri| (0..3).map(move |e| (tri[e], tri[(e + 1) % 3])))
                    .map(|(a, b)| ((v[a][0] - v[b][0]).powi(2) + (v[a][1] - v[b][1]).powi(2)).sqrt())
                    .fold(0.0, f64::max);
                if longest <= h {
                    break;
                }
                t = red_refine(&mut v, &t);
            }
            (v, t)
        }
    };
    let mut mesh = CrossSectionMesh::from_parts(v, t)?;
    mesh.tag_edges(shape);
    Ok(mesh)
}

impl CrossSectionMesh {
    /// Builds boundary data from vertices and triangles (orientation is fixed up).
    pub fn from_parts(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        for tri in &mut triangles {
            let a = tri_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if a.abs() < 1e-300 {
                return Err(Error::invalid("degenerate triangle"));
            }
            if a < 0.0 {
                tri.swap(1, 2);
            }
        }
        let mut count: BTreeMap<(usize, usize), (usize, [usize; 2])> = BTreeMap::new();
        for tri in &triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = if a < b { (a, b) } else { (b, a) };
                count.entry(key).or_insert((0, [a, b])).0 += 1;
            }
        }
        let mut edges = Vec::new();
        for (_, (c, [a, b])) in count {
            if c == 1 {
                let (pa, pb) = (vertices[a], vertices[b]);
                let d = [pb[0] - pa[0], pb[1] - pa[1]];
                let length = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let tangent = [d[0] / length, d[1] / length];
                edges.push(BoundaryEdge {
                    nodes: [a, b],
                    normal: [tangent[1], -tangent[0]],
                    tangent,
                    midpoint: [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])],
                    length,
                    tag: 0,
                    gamma: 0.0,
                });
            }
        }
        let n = vertices.len();
        let mesh = Self { vertices, triangles, edges, gamma0: vec![0.0; n], gamma_l: vec![0.0; n] };
        mesh.validate()?;
        Ok(mesh)
    }

    fn tag_edges(&mut self, shape: &DomainShape) {
        match shape {
            DomainShape::Disk { center, sectors, .. } => {
                for e in &mut self.edges {
                    let th = (e.midpoint[1] - center[1]).atan2(e.midpoint[0] - center[0]);
                    let th = if th < 0.0 { th + 2.0 * PI } else { th };
                    e.tag = ((th / (2.0 * PI) * *sectors as f64) as usize).min(sectors - 1);
                }
            }
            DomainShape::Rectangle { x0, x1, y0, y1 } => {
                let p = [[*x0, *y0], [*x1, *y0], [*x1, *y1], [*x0, *y1]];
                self.tag_by_sides(&p);
            }
            DomainShape::Polygon(p) => self.tag_by_sides(p),
        }
    }

    fn tag_by_sides(&mut self, p: &[Point]) {
        let n = p.len();
        for e in &mut self.edges {
            let m = e.midpoint;
            let best = (0..n)
                .map(|i| {
                    let (a, b) = (p[i], p[(i + 1) % n]);
                    (i, tri_area(a, b, m).abs() / ((b[0] - a[0]).hypot(b[1] - a[1])))
                })
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            e.tag = best.0;
        }
    }

    pub fn with_gamma(mut self, map: &GammaMap) -> Result<Self> {
        for e in &mut self.edges {
            let g = map.value(e.tag);
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::invalid("Robin weight must be finite and non-negative"));
            }
            e.gamma = g;
        }
        Ok(self)
    }

    /// Constant end-cap weights `γ0`, `γL`.
    pub fn with_end_caps(mut self, g0: f64, gl: f64) -> Result<Self> {
        if !(g0 >= 0.0 && gl >= 0.0) {
            return Err(Error::invalid("end-cap weights must be non-negative"));
        }
        self.gamma0.iter_mut().for_each(|v| *v = g0);
        self.gamma_l.iter_mut().for_each(|v| *v = gl);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        tri_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Longest triangle edge.
    pub fn max_edge(&self) -> f64 {
        let mut h: f64 = 0.0;
        for tri in &self.triangles {
            for k in 0..3 {
                let (p, q) = (self.vertices[tri[k]], self.vertices[tri[(k + 1) % 3]]);
                h = h.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
        }
        h
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn diameter(&self) -> f64 {
        let b: Vec<Point> = self.edges.iter().map(|e| self.vertices[e.nodes[0]]).collect();
        let mut d: f64 = 0.0;
        for (i, p) in b.iter().enumerate() {
            for q in &b[i + 1..] {
                d = d.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        d
    }

    /// Largest `|y|` over the vertices.
    pub fn max_radius(&self) -> f64 {
        self.vertices.iter().fold(0.0, |m, p| m.max(p[0].hypot(p[1])))
    }

    pub fn centroid(&self) -> Point {
        let mut c = [0.0; 2];
        let mut a = 0.0;
        for (t, tri) in self.triangles.iter().enumerate() {
            let at = self.triangle_area(t);
            for &i in tri {
                c[0] += at * self.vertices[i][0] / 3.0;
                c[1] += at * self.vertices[i][1] / 3.0;
            }
            a += at;
        }
        [c[0] / a, c[1] / a]
    }

    /// Boundary loop vertices in counterclockwise order (first loop found).
    pub fn boundary_polygon(&self) -> Vec<Point> {
        let next: BTreeMap<usize, usize> = self.edges.iter().map(|e| (e.nodes[0], e.nodes[1])).collect();
        let Some(start) = self.edges.first().map(|e| e.nodes[0]) else {
            return Vec::new();
        };
        let mut out = vec![self.vertices[start]];
        let mut cur = next[&start];
        while cur != start && out.len() <= self.edges.len() {
            out.push(self.vertices[cur]);
            cur = next[&cur];
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (t, _) in self.triangles.iter().enumerate() {
            if !(self.triangle_area(t) > 0.0) {
                return Err(Error::invalid("triangle not positively oriented"));
            }
        }
        let mut balance: BTreeMap<usize, i32> = BTreeMap::new();
        for e in &self.edges {
            *balance.entry(e.nodes[0]).or_default() += 1;
            *balance.entry(e.nodes[1]).or_default() -= 1;
        }
        if balance.values().any(|&b| b != 0) {
            return Err(Error::invalid("boundary edges do not form closed loops"));
        }
        let mut s = [0.0; 2];
        for e in &self.edges {
            s[0] += e.normal[0] * e.length;
            s[1] += e.normal[1] * e.length;
        }
        if s[0].hypot(s[1]) > 1e-10 * self.perimeter() {
            return Err(Error::invalid("normals do not integrate to zero"));
        }
        if self.edges.iter().any(|e| !(e.gamma >= 0.0))
            || self.gamma0.iter().chain(&self.gamma_l).any(|g| !(*g >= 0.0))
        {
            return Err(Error::invalid("negative Robin weight"));
        }
        Ok(())
    }
}
