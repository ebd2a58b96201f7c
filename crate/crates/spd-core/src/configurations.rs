//! Type-I configurations: 12 unit vectors at mutual distance >= pi/3 with a
//! saturated triangulation of the sphere.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clusters::Star5;
use crate::error::{Error, Result};
use crate::extremal::ALPHA0;
use crate::geom::{dist, hull_facets, min_separation, sph, V3};
use crate::trig::{SphericalTriangle, TriangleInvariants};

const SEP_TOL: f64 = 1e-9;

/// A quadrilateral of the underlying polyhedron and the diagonal splitting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Quad {
    pub cycle: [usize; 4],
    /// 0 splits along cycle[0]-cycle[2], 1 along cycle[1]-cycle[3].
    pub diagonal: u8,
    /// Indices of the two faces produced by the split.
    pub faces: [usize; 2],
}

impl Quad {
    fn split(&self) -> [[usize; 3]; 2] {
        let [p0, p1, p2, p3] = self.cycle;
        if self.diagonal == 0 {
            [[p0, p1, p2], [p0, p2, p3]]
        } else {
            [[p1, p2, p3], [p1, p3, p0]]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TypeIConfiguration {
    pub vertices: Vec<V3>,
    pub faces: Vec<[usize; 3]>,
    pub quads: Vec<Quad>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Triangulation {
    Icosahedral,
    Other,
}

impl TypeIConfiguration {
    /// Validated configuration. Faces are reoriented outward.
    pub fn new(vertices: Vec<V3>, faces: Vec<[usize; 3]>, label: &str) -> Result<Self> {
        let c = Self::from_parts(vertices, faces, Vec::new(), label)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks combinatorics only. Metric conditions are left to `validate`.
    pub fn from_parts(
        vertices: Vec<V3>,
        mut faces: Vec<[usize; 3]>,
        quads: Vec<Quad>,
        label: &str,
    ) -> Result<Self> {
        if vertices.len() != 12 || faces.len() != 20 {
            return Err(Error::InvalidConfiguration(format!(
                "need 12 vertices and 20 faces, got {} and {}",
                vertices.len(),
                faces.len()
            )));
        }
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in faces.iter_mut() {
            if f.iter().any(|&i| i >= 12) || f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidConfiguration(format!("bad face {f:?}")));
            }
            let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
            if a.dot(&b.cross(&c)) < 0.0 {
                f.swap(1, 2);
            }
            for k in 0..3 {
                let (i, j) = (f[k], f[(k + 1) % 3]);
                *edges.entry((i.min(j), i.max(j))).or_default() += 1;
            }
        }
        if edges.len() != 30 || edges.values().any(|&n| n != 2) {
            return Err(Error::InvalidConfiguration(
                "faces do not form a closed triangulation".into(),
            ));
        }
        Ok(TypeIConfiguration {
            vertices,
            faces,
            quads,
            label: label.to_string(),
        })
    }

    /// Separation, saturation and total area.
    pub fn validate(&self) -> Result<()> {
        let sep = min_separation(&self.vertices);
        if sep < FRAC_PI_3 - SEP_TOL {
            return Err(Error::SeparationViolation(sep));
        }
        let mut total = 0.0;
        for f in &self.faces {
            let inv = self.face_triangle(f)?.invariants();
            if inv.circumradius() >= FRAC_PI_3 {
                return Err(Error::InvalidConfiguration(format!(
                    "face {f:?} is not saturated (R = {})",
                    inv.circumradius()
                )));
            }
            total += inv.area;
        }
        if (total - 4.0 * PI).abs() > 1e-8 {
            return Err(Error::InvalidConfiguration(format!(
                "faces cover area {total}, not 4 pi"
            )));
        }
        Ok(())
    }

    fn face_triangle(&self, f: &[usize; 3]) -> Result<SphericalTriangle> {
        let v = &self.vertices;
        SphericalTriangle::from_vectors(&v[f[0]], &v[f[1]], &v[f[2]])
    }

    pub fn degrees(&self) -> [usize; 12] {
        let mut deg = [0; 12];
        for f in &self.faces {
            for &i in f {
                deg[i] += 1;
            }
        }
        deg
    }

    pub fn is_icosahedral(&self) -> bool {
        self.degrees().iter().all(|&d| d == 5)
    }

    /// Text form: 12 lines `x y z`, then 20 lines `i j k`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(s, "{} {} {}", f[0], f[1], f[2]);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if lines.len() != 32 {
            return Err(Error::Parse(format!("expected 32 lines, got {}", lines.len())));
        }
        let mut vertices = Vec::with_capacity(12);
        for l in &lines[..12] {
            let x: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<_>>()?;
            if x.len() != 3 {
                return Err(Error::Parse(format!("vertex line {l:?}")));
            }
            let v = V3::new(x[0], x[1], x[2]);
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Parse(format!("vertex {l:?} is not a unit vector")));
            }
            vertices.push(v.normalize());
        }
        let mut faces = Vec::with_capacity(20);
        for l in &lines[12..] {
            let x: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<_>>()?;
            if x.len() != 3 {
                return Err(Error::Parse(format!("face line {l:?}")));
            }
            faces.push([x[0], x[1], x[2]]);
        }
        TypeIConfiguration::new(vertices, faces, "loaded")
    }
}

/// Configuration on 12 directions, triangulated by their convex hull.
///
/// Square facets are split icosahedrally when possible.
pub fn from_directions(vertices: Vec<V3>, label: &str) -> Result<TypeIConfiguration> {
    if vertices.len() != 12 {
        return Err(Error::InvalidConfiguration(format!("{} directions", vertices.len())));
    }
    let v: Vec<V3> = vertices.iter().map(|p| p.normalize()).collect();
    from_polyhedron(v.clone(), label, Triangulation::Icosahedral)
        .or_else(|_| from_polyhedron(v, label, Triangulation::Other))
}

/// Builds a configuration from a 12-point polyhedron with triangle and square faces.
fn from_polyhedron(vertices: Vec<V3>, label: &str, tri: Triangulation) -> Result<TypeIConfiguration> {
    let facets = hull_facets(&vertices);
    let mut faces = Vec::new();
    let mut cycles = Vec::new();
    for f in &facets {
        match f.len() {
            3 => faces.push([f[0], f[1], f[2]]),
            4 => cycles.push([f[0], f[1], f[2], f[3]]),
            n => {
                return Err(Error::InvalidConfiguration(format!("facet with {n} vertices")));
            }
        }
    }
    let nq = cycles.len();
    let build = |mask: u32| -> (Vec<[usize; 3]>, Vec<Quad>) {
        let mut fs = faces.clone();
        let mut qs = Vec::with_capacity(nq);
        for (k, c) in cycles.iter().enumerate() {
            let q0 = Quad {
                cycle: *c,
                diagonal: ((mask >> k) & 1) as u8,
                faces: [fs.len(), fs.len() + 1],
            };
            fs.extend(q0.split());
            qs.push(q0);
        }
        (fs, qs)
    };
    let mut degrees_ok = None;
    for mask in 0..(1u32 << nq) {
        let (fs, qs) = build(mask);
        let mut deg = [0usize; 12];
        for f in &fs {
            for &i in f {
                deg[i] += 1;
            }
        }
        let ico = deg.iter().all(|&d| d == 5);
        if ico == (tri == Triangulation::Icosahedral) {
            degrees_ok = Some((fs, qs));
            break;
        }
    }
    let (fs, qs) = degrees_ok.ok_or(Error::NotIcosahedral { vertex: 0, degree: 0 })?;
    let c = TypeIConfiguration::from_parts(vertices, fs, qs, label)?;
    c.validate()?;
    Ok(c)
}

pub fn fcc() -> TypeIConfiguration {
    fcc_with(Triangulation::Icosahedral).expect("fcc")
}

/// FCC with the chosen split of its six squares.
pub fn fcc_with(tri: Triangulation) -> Result<TypeIConfiguration> {
    let s = 0.5f64.sqrt();
    let mut v = Vec::with_capacity(12);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut p = V3::zeros();
            p[i] = a * s;
            p[j] = b * s;
            v.push(p);
        }
    }
    from_polyhedron(v, "fcc", tri)
}

pub fn hcp() -> TypeIConfiguration {
    hcp_with(Triangulation::Icosahedral).expect("hcp")
}

pub fn hcp_with(tri: Triangulation) -> Result<TypeIConfiguration> {
    let mut v: Vec<V3> = (0..6).map(|k| sph(PI / 2.0, k as f64 * PI / 3.0)).collect();
    let colat = (1.0f64 / 3.0).sqrt().asin();
    for lon in [30.0f64, 150.0, 270.0] {
        v.push(sph(colat, lon.to_radians()));
    }
    for lon in [30.0f64, 150.0, 270.0] {
        v.push(sph(PI - colat, lon.to_radians()));
    }
    from_polyhedron(v, "hcp", tri)
}

/// Counts vertices whose four faces alternate triangle/square and those with
/// two adjacent squares. Returns (alternating, adjacent).
pub fn star_types(config: &TypeIConfiguration) -> (usize, usize) {
    let quad_faces: BTreeSet<usize> = config.quads.iter().flat_map(|q| q.faces).collect();
    let mut alt = 0;
    let mut adj = 0;
    for v in 0..12 {
        let squares: Vec<&Quad> = config.quads.iter().filter(|q| q.cycle.contains(&v)).collect();
        let triangles = config
            .faces
            .iter()
            .enumerate()
            .filter(|(i, f)| !quad_faces.contains(i) && f.contains(&v))
            .count();
        if squares.len() != 2 || triangles != 2 {
            continue;
        }
        // two squares at v are adjacent iff they share an edge through v
        let nb = |q: &Quad| {
            let k = q.cycle.iter().position(|&x| x == v).unwrap();
            [q.cycle[(k + 1) % 4], q.cycle[(k + 3) % 4]]
        };
        let (a, b) = (nb(squares[0]), nb(squares[1]));
        if a.iter().any(|x| b.contains(x)) {
            adj += 1;
        } else {
            alt += 1;
        }
    }
    (alt, adj)
}

/// Five squares around the poles with the given angles at N.
pub fn five_square(theta: [f64; 5], triangulation: Triangulation) -> Result<TypeIConfiguration> {
    if theta.iter().any(|&t| t < ALPHA0 - 1e-12) {
        return Err(Error::BadAngles("each angle must be at least alpha0"));
    }
    if (theta.iter().sum::<f64>() - 2.0 * PI).abs() > 1e-10 {
        return Err(Error::BadAngles("angles must sum to 2 pi"));
    }
    let mut v = vec![V3::new(0.0, 0.0, 1.0)];
    let mut lon = 0.0;
    let mut lons = [0.0; 5];
    for i in 0..5 {
        lons[i] = lon;
        lon += theta[i];
    }
    v.extend(lons.iter().map(|&l| sph(FRAC_PI_3, l)));
    v.extend(lons.iter().map(|&l| sph(2.0 * FRAC_PI_3, l)));
    v.push(V3::new(0.0, 0.0, -1.0));
    let mut faces = Vec::with_capacity(20);
    let mut quads = Vec::with_capacity(5);
    for i in 0..5 {
        let j = (i + 1) % 5;
        faces.push([0, 1 + i, 1 + j]);
        faces.push([11, 6 + j, 6 + i]);
        let diagonal = if triangulation == Triangulation::Other && i == 0 { 1 } else { 0 };
        let q = Quad {
            cycle: [1 + i, 6 + i, 6 + j, 1 + j],
            diagonal,
            faces: [faces.len(), faces.len() + 1],
        };
        faces.extend(q.split());
        quads.push(q);
    }
    let c = TypeIConfiguration::from_parts(v, faces, quads, "five-square")?;
    c.validate()?;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceReport {
    pub vertices: [usize; 3],
    pub invariants: TriangleInvariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexStar {
    pub vertex: usize,
    pub degree: usize,
    pub area: f64,
    pub w_tilde: f64,
    pub rho_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfigurationChecks {
    pub min_separation: f64,
    pub max_circumradius: f64,
    pub total_area: f64,
    pub icosahedral: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigurationReport {
    pub label: String,
    pub faces: Vec<FaceReport>,
    pub stars: Vec<VertexStar>,
    /// Sum of w rho over the 20 faces.
    pub numerator: f64,
    /// Sum of w over the 20 faces.
    pub denominator: f64,
    pub rho_bar: f64,
    pub checks: ConfigurationChecks,
}

pub fn rho_bar(config: &TypeIConfiguration) -> Result<ConfigurationReport> {
    let mut faces = Vec::with_capacity(20);
    let (mut num, mut den, mut total, mut rmax) = (0.0, 0.0, 0.0, 0.0f64);
    let mut stars: Vec<VertexStar> = (0..12)
        .map(|vertex| VertexStar {
            vertex,
            degree: 0,
            area: 0.0,
            w_tilde: 0.0,
            rho_tilde: 0.0,
        })
        .collect();
    for (i, f) in config.faces.iter().enumerate() {
        let inv = config.face_triangle(f)?.invariants();
        let w = inv.weight.ok_or(Error::CircumcenterOutside(i))?;
        num += w * inv.rho;
        den += w;
        total += inv.area;
        rmax = rmax.max(inv.circumradius());
        for &v in f {
            let s = &mut stars[v];
            s.degree += 1;
            s.area += inv.area;
            s.w_tilde += w;
            // numerator accumulated here, divided below
            s.rho_tilde += w * inv.rho;
        }
        faces.push(FaceReport {
            vertices: *f,
            invariants: inv,
        });
    }
    for s in &mut stars {
        s.rho_tilde /= s.w_tilde;
    }
    Ok(ConfigurationReport {
        label: config.label.clone(),
        faces,
        stars,
        numerator: num,
        denominator: den,
        rho_bar: num / den,
        checks: ConfigurationChecks {
            min_separation: min_separation(&config.vertices),
            max_circumradius: rmax,
            total_area: total,
            icosahedral: config.is_icosahedral(),
        },
    })
}

/// The twelve vertex stars of an icosahedral configuration.
pub fn stars(config: &TypeIConfiguration) -> Result<Vec<Star5>> {
    let deg = config.degrees();
    if let Some(v) = (0..12).find(|&v| deg[v] != 5) {
        return Err(Error::NotIcosahedral {
            vertex: v,
            degree: deg[v],
        });
    }
    let p = &config.vertices;
    (0..12)
        .map(|v| {
            let mut nb: Vec<usize> = config
                .faces
                .iter()
                .filter(|f| f.contains(&v))
                .flat_map(|f| f.iter().copied())
                .filter(|&i| i != v)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let c = p[v];
            let e1 = (p[nb[0]] - c * c.dot(&p[nb[0]])).normalize();
            let e2 = c.cross(&e1);
            let ang = |i: usize| {
                let t = p[i] - c * c.dot(&p[i]);
                t.dot(&e2).atan2(t.dot(&e1)).rem_euclid(2.0 * PI)
            };
            nb.sort_by(|&a, &b| ang(a).total_cmp(&ang(b)));
            let ring: [V3; 5] = std::array::from_fn(|k| p[nb[k]]);
            Star5::from_vectors(&c, &ring)
        })
        .collect()
}

const PERTURB_ATTEMPTS: usize = 200;
const REPAIR_ROUNDS: usize = 400;

/// Seeded small perturbation keeping the configuration Type-I.
pub fn perturb(config: &TypeIConfiguration, seed: u64, eps: f64) -> Result<TypeIConfiguration> {
    if !(0.0..=0.05).contains(&eps) {
        return Err(Error::OutOfRange {
            value: eps,
            lo: 0.0,
            hi: 0.05,
        });
    }
    if eps == 0.0 {
        return Ok(config.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PERTURB_ATTEMPTS {
        let mut pts: Vec<V3> = config
            .vertices
            .iter()
            .map(|v| {
                // tangent jitter of length at most eps/2
                let e1 = any_perp(v);
                let e2 = v.cross(&e1);
                let phi = rng.random::<f64>() * 2.0 * PI;
                let len = rng.random::<f64>() * eps / 2.0;
                (v + (e1 * phi.cos() + e2 * phi.sin()) * len.tan()).normalize()
            })
            .collect();
        repair(&mut pts);
        let moved = config
            .vertices
            .iter()
            .zip(&pts)
            .map(|(a, b)| dist(a, b))
            .fold(0.0, f64::max);
        if moved > eps || min_separation(&pts) < FRAC_PI_3 - SEP_TOL {
            continue;
        }
        let mut faces = config.faces.clone();
        let mut quads = config.quads.clone();
        for q in &mut quads {
            let [p0, p1, p2, p3] = q.cycle;
            q.diagonal = if dist(&pts[p0], &pts[p2]) <= dist(&pts[p1], &pts[p3]) { 0 } else { 1 };
            let [f0, f1] = q.split();
            faces[q.faces[0]] = f0;
            faces[q.faces[1]] = f1;
        }
        let Ok(c) = TypeIConfiguration::from_parts(pts, faces, quads, &config.label) else {
            continue;
        };
        if c.validate().is_err() {
            continue;
        }
        let all_contain = c
            .faces
            .iter()
            .all(|f| c.face_triangle(f).map(|t| t.invariants().contains_circumcenter).unwrap_or(false));
        if all_contain {
            return Ok(c);
        }
    }
    Err(Error::CannotPerturb(PERTURB_ATTEMPTS))
}

fn any_perp(v: &V3) -> V3 {
    let a = if v.x.abs() < 0.9 { V3::x() } else { V3::y() };
    (a - v * v.dot(&a)).normalize()
}

/// Pushes apart pairs closer than pi/3 along their great circle.
fn repair(pts: &mut [V3]) {
    let target = FRAC_PI_3 + 1e-12;
    for _ in 0..REPAIR_ROUNDS {
        let mut clean = true;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = dist(&pts[i], &pts[j]);
                if d >= target {
                    continue;
                }
                clean = false;
                let push = (target - d) / 2.0 + 1e-13;
                let (a, b) = (pts[i], pts[j]);
                let dir_a = (a * a.dot(&b) - b).normalize();
                let dir_b = (b * a.dot(&b) - a).normalize();
                pts[i] = (a * push.cos() + dir_a * push.sin()).normalize();
                pts[j] = (b * push.cos() + dir_b * push.sin()).normalize();
            }
        }
        if clean {
            return;
        }
    }
}
