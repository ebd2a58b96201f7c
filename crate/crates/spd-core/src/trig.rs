//! Exact-formula spherical trigonometry on the unit sphere.
//!
//! A triangle is stored by the cosines of its sides; a, b, c are the sides
//! opposite the vertices A, B, C.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{self, V3};

pub const DEGENERATE_GRAM: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalTriangle {
    pub cos_a: f64,
    pub cos_b: f64,
    pub cos_c: f64,
}

impl SphericalTriangle {
    pub fn from_cosines(cos_a: f64, cos_b: f64, cos_c: f64) -> Result<Self> {
        let t = SphericalTriangle { cos_a, cos_b, cos_c };
        let g = t.gram();
        if !g.is_finite() || [cos_a, cos_b, cos_c].iter().any(|c| c.abs() >= 1.0) {
            return Err(Error::DegenerateTriangle(g));
        }
        if g <= DEGENERATE_GRAM {
            return Err(Error::DegenerateTriangle(g));
        }
        if t.sides().iter().sum::<f64>() >= 2.0 * PI {
            return Err(Error::DegenerateTriangle(g));
        }
        Ok(t)
    }

    pub fn from_sss(a: f64, b: f64, c: f64) -> Result<Self> {
        for s in [a, b, c] {
            if !(s > 0.0 && s < PI) {
                return Err(Error::DegenerateTriangle(0.0));
            }
        }
        if a >= b + c || b >= a + c || c >= a + b {
            return Err(Error::DegenerateTriangle(0.0));
        }
        Self::from_cosines(a.cos(), b.cos(), c.cos())
    }

    /// Sides a, b with included angle C.
    pub fn from_sas(a: f64, b: f64, angle_c: f64) -> Result<Self> {
        if !(a > 0.0 && a < PI && b > 0.0 && b < PI && angle_c > 0.0 && angle_c < PI) {
            return Err(Error::DegenerateTriangle(0.0));
        }
        let cc = a.cos() * b.cos() + a.sin() * b.sin() * angle_c.cos();
        Self::from_cosines(a.cos(), b.cos(), cc.clamp(-1.0, 1.0))
    }

    /// Triangle spanned by three unit vectors.
    pub fn from_vectors(a: &V3, b: &V3, c: &V3) -> Result<Self> {
        Self::from_cosines(b.dot(c), c.dot(a), a.dot(b))
    }

    pub fn cosines(&self) -> [f64; 3] {
        [self.cos_a, self.cos_b, self.cos_c]
    }

    pub fn sides(&self) -> [f64; 3] {
        self.cosines().map(f64::acos)
    }

    /// D^2, the Gram determinant of the three vertex vectors.
    pub fn gram(&self) -> f64 {
        let [a, b, c] = self.cosines();
        1.0 + 2.0 * a * b * c - a * a - b * b - c * c
    }

    /// Vertex angles [A, B, C] by the cosine law.
    pub fn angles(&self) -> [f64; 3] {
        let [ca, cb, cc] = self.cosines();
        let d = self.gram().max(0.0).sqrt();
        [
            d.atan2(ca - cb * cc),
            d.atan2(cb - cc * ca),
            d.atan2(cc - ca * cb),
        ]
    }

    /// Canonical embedding: A at the north pole, B in the xz-plane, C with y > 0.
    pub fn embed(&self) -> [V3; 3] {
        let c = self.cos_c.acos();
        let a = V3::new(0.0, 0.0, 1.0);
        let b = V3::new(c.sin(), 0.0, c.cos());
        let z = self.cos_b;
        let x = (self.cos_a - c.cos() * z) / c.sin();
        let y = (1.0 - x * x - z * z).max(0.0).sqrt();
        [a, b, V3::new(x, y, z)]
    }

    /// Whether the circumcenter lies inside (closed, 1e-12 slack), and tan R.
    pub fn circumcircle(&self) -> (bool, f64) {
        let h = self.cosines().map(|x| ((1.0 - x) / 2.0).sqrt());
        let det = self.gram().max(0.0).sqrt();
        let contains = (0..3).all(|i| {
            let (p, q, r) = (h[i], h[(i + 1) % 3], h[(i + 2) % 3]);
            (q * q + r * r - p * p) / (2.0 * q * r) >= -1e-12
        });
        (contains, 4.0 * h[0] * h[1] * h[2] / det)
    }

    pub fn invariants(&self) -> TriangleInvariants {
        TriangleInvariants::of(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleInvariants {
    pub area: f64,
    pub u: f64,
    #[serde(rename = "D")]
    pub det: f64,
    pub tan_r: f64,
    pub theta: [f64; 3],
    pub d: [f64; 3],
    pub lambda: [f64; 3],
    pub nu: f64,
    pub rho: f64,
    /// vol T(sigma); absent when the circumcenter lies outside.
    pub w: Option<f64>,
    /// Part of T(sigma) beyond the plane through 2A, 2B, 2C.
    pub tip: Option<f64>,
    /// Net weight w - tip, the weight entering rho-bar.
    pub weight: Option<f64>,
    pub tan_r_in: f64,
    pub contains_circumcenter: bool,
}

impl TriangleInvariants {
    pub fn of(t: &SphericalTriangle) -> Self {
        let [ca, cb, cc] = t.cosines();
        let det = t.gram().max(0.0).sqrt();
        let u = 1.0 + ca + cb + cc;
        let area = 2.0 * det.atan2(u);
        let h = [ca, cb, cc].map(|x| ((1.0 - x) / 2.0).sqrt());
        let tan_r = 4.0 * h[0] * h[1] * h[2] / det;
        let mut theta = [0.0; 3];
        let mut cos_theta = [0.0; 3];
        for i in 0..3 {
            let (p, q, r) = (h[i], h[(i + 1) % 3], h[(i + 2) % 3]);
            let c = ((q * q + r * r - p * p) / (2.0 * q * r)).clamp(-1.0, 1.0);
            cos_theta[i] = c;
            theta[i] = c.acos();
        }
        let d = cos_theta.map(|c| (c * tan_r).atan());
        let nu = PI + 2.0 * area - 2.0 * d.iter().sum::<f64>();
        let lambda = [
            (1.0 + ca - cb - cc).atan2(det),
            (1.0 + cb - cc - ca).atan2(det),
            (1.0 + cc - ca - cb).atan2(det),
        ];
        let contains = cos_theta.iter().all(|&c| c >= -1e-12);
        let (w, tip, weight) = if contains {
            let w = area.sin() * (8.0 / u - tan_r * tan_r) / 6.0;
            let [va, vb, vc] = t.embed();
            let (gross, net) = geom::cell_volumes(&va, &vb, &vc);
            let tip = (gross - net).max(0.0);
            (Some(w), Some(tip), Some(w - tip))
        } else {
            (None, None, None)
        };
        TriangleInvariants {
            area,
            u,
            det,
            tan_r,
            theta,
            d,
            lambda,
            nu,
            rho: nu / (4.0 * det),
            w,
            tip,
            weight,
            tan_r_in: half_angles(t).tan_r_in,
            contains_circumcenter: contains,
        }
    }

    /// Circumradius R.
    pub fn circumradius(&self) -> f64 {
        self.tan_r.atan()
    }
}

/// tan(d1 + d2 + d3) from the symmetric-function closed form in the half-chords.
pub fn sum_d_closed(t: &SphericalTriangle) -> Result<f64> {
    let inv = t.invariants();
    let sum_d: f64 = inv.d.iter().sum();
    if (sum_d - PI / 2.0).abs() < 1e-9 {
        return Err(Error::PoleSingularity);
    }
    let x = t.cosines().map(|c| ((1.0 - c) / 2.0).sqrt());
    let dd = inv.det;
    let mut s21 = 0.0;
    let mut s42 = 0.0;
    let mut s51 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                s21 += x[i] * x[i] * x[j];
                s42 += x[i].powi(4) * x[j] * x[j];
                s51 += x[i].powi(5) * x[j];
            }
        }
    }
    let s3: f64 = x.iter().map(|v| v.powi(3)).sum();
    let s6: f64 = x.iter().map(|v| v.powi(6)).sum();
    let p = x[0] * x[1] * x[2];
    let s33 = (x[0] * x[1]).powi(3) + (x[0] * x[2]).powi(3) + (x[1] * x[2]).powi(3);
    let s411: f64 = x.iter().map(|v| v.powi(3) * p).sum();
    let num = 2.0 * dd * dd * (s21 - s3) - 8.0 * p * (s42 - s6 - 2.0 * p * p);
    let den = dd * dd - 4.0 * (2.0 * s33 + s411 - s51);
    Ok(num / den / dd)
}

/// nu recovered from the closed tan(sum d), with the branch picked by the direct sum.
pub fn nu_from_closed(t: &SphericalTriangle) -> Result<f64> {
    let inv = t.invariants();
    let direct: f64 = inv.d.iter().sum();
    let base = sum_d_closed(t)?.atan();
    let k = ((direct - base) / PI).round();
    Ok(PI + 2.0 * inv.area - 2.0 * (base + k * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfAngles {
    pub sin_half: [f64; 3],
    pub cos_half: [f64; 3],
    pub tan_half: [f64; 3],
    pub tan_r_in: f64,
}

pub fn half_angles(t: &SphericalTriangle) -> HalfAngles {
    let sides = t.sides();
    let s = sides.iter().sum::<f64>() / 2.0;
    let sm = sides.map(|x| (s - x).sin().max(0.0));
    let tan_r_in = (sm[0] * sm[1] * sm[2] / s.sin()).sqrt();
    let mut out = HalfAngles {
        sin_half: [0.0; 3],
        cos_half: [0.0; 3],
        tan_half: [0.0; 3],
        tan_r_in,
    };
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let sbsc = sides[j].sin() * sides[k].sin();
        out.sin_half[i] = (sm[j] * sm[k] / sbsc).sqrt();
        out.cos_half[i] = (s.sin() * sm[i] / sbsc).sqrt();
        out.tan_half[i] = tan_r_in / sm[i];
    }
    out
}

/// Five of the six pairwise cosines of four unit directions a, b, c, d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadGram {
    pub ab: f64,
    pub ac: f64,
    pub ad: f64,
    pub bc: f64,
    pub bd: f64,
    /// c and d on the same side of the great circle through a and b.
    pub same_side: bool,
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl QuadGram {
    pub fn from_vectors(a: &V3, b: &V3, c: &V3, d: &V3) -> Self {
        let same = a.cross(b).dot(c) * a.cross(b).dot(d) > 0.0;
        QuadGram {
            ab: a.dot(b),
            ac: a.dot(c),
            ad: a.dot(d),
            bc: b.dot(c),
            bd: b.dot(d),
            same_side: same,
        }
    }

    pub fn grams(&self) -> (f64, f64) {
        let g = |x: f64, y: f64, z: f64| 1.0 + 2.0 * x * y * z - x * x - y * y - z * z;
        (g(self.ab, self.bc, self.ac), g(self.ab, self.bd, self.ad))
    }

    /// D1 * D2 as the determinant of [a b c]^T [a b d], for a given c.d.
    pub fn cross_det(&self, cd: f64) -> f64 {
        det3([
            [1.0, self.ab, self.ad],
            [self.ab, 1.0, self.bd],
            [self.ac, self.bc, cd],
        ])
    }
}

/// Solves D1 D2 = +-sqrt(D1^2 D2^2) for the missing cosine c.d.
pub fn quad_solve_missing(g: &QuadGram) -> Result<f64> {
    let (g1, g2) = g.grams();
    if g1 < -1e-12 || g2 < -1e-12 {
        return Err(Error::Infeasible("negative gram determinant"));
    }
    let slope = 1.0 - g.ab * g.ab;
    if slope <= 1e-15 {
        return Err(Error::Infeasible("shared edge is degenerate"));
    }
    let sign = if g.same_side { 1.0 } else { -1.0 };
    let target = sign * (g1.max(0.0) * g2.max(0.0)).sqrt();
    let cd = (target - g.cross_det(0.0)) / slope;
    if cd.abs() > 1.0 + 1e-12 {
        return Err(Error::Infeasible("missing cosine outside [-1, 1]"));
    }
    Ok(cd.clamp(-1.0, 1.0))
}

/// Largest area of a triangle with two given sides, attained when c = 2R.
pub fn max_area_two_sides(a: f64, b: f64) -> Result<f64> {
    let (ca, cb) = (a.cos(), b.cos());
    if ca + cb <= 1e-15 {
        return Err(Error::OutOfRange {
            value: ca + cb,
            lo: 0.0,
            hi: 2.0,
        });
    }
    Ok(2.0 * ((1.0 - ca) * (1.0 - cb) / (2.0 * (ca + cb))).sqrt().atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Wrt {
    /// The included angle C between sides a and b.
    C,
    /// x = 1 + cos c with a, b fixed.
    X,
}

pub fn area_partials(t: &SphericalTriangle, wrt: Wrt) -> Result<f64> {
    let x = 1.0 + t.cos_c;
    if x <= 0.0 {
        return Err(Error::DegenerateTriangle(t.gram()));
    }
    let s = t.cos_a + t.cos_b;
    Ok(match wrt {
        Wrt::C => (x - s) / x,
        Wrt::X => (s - x) / (x * t.gram().sqrt()),
    })
}

/// Area of the quadrilateral (l1, l2 | l3, l4) cut by a diagonal with 1 + cos = x.
pub fn quad_area_at(l: [f64; 4], x: f64) -> Result<f64> {
    let c = l.map(f64::cos);
    let t1 = SphericalTriangle::from_cosines(c[0], c[1], x - 1.0)?;
    let t2 = SphericalTriangle::from_cosines(c[2], c[3], x - 1.0)?;
    Ok(t1.invariants().area + t2.invariants().area)
}

/// x0 = 1 + cos of the cutting diagonal of the cocircular quadrilateral.
pub fn cocircular_diagonal(l: [f64; 4]) -> Result<f64> {
    if l.iter().any(|&x| !(x > 0.0 && x < PI)) {
        return Err(Error::Infeasible("side outside (0, pi)"));
    }
    let c = l.map(f64::cos);
    let s12 = ((1.0 - c[0]) * (1.0 - c[1])).sqrt();
    let s34 = ((1.0 - c[2]) * (1.0 - c[3])).sqrt();
    let x0 = ((c[0] + c[1]) * s34 + (c[2] + c[3]) * s12) / (s12 + s34);
    if !(x0 > 0.0 && x0 < 2.0) {
        return Err(Error::Infeasible("diagonal outside (0, pi)"));
    }
    let g = |p: f64, q: f64, r: f64| 1.0 + 2.0 * p * q * r - p * p - q * q - r * r;
    if g(c[0], c[1], x0 - 1.0) < -1e-12 || g(c[2], c[3], x0 - 1.0) < -1e-12 {
        return Err(Error::Infeasible("no quadrilateral with these sides"));
    }
    Ok(x0)
}

/// Area of the cocircular quadrilateral with the given sides.
pub fn cocircular_area(l: [f64; 4]) -> Result<f64> {
    cocircular_diagonal(l)?;
    let m = l.map(|x| (x / 2.0).sin());
    let p = m.map(|x| x * x);
    let prod: f64 = m.iter().product();
    let sum_p: f64 = p.iter().sum();
    let sum_p2: f64 = p.iter().map(|x| x * x).sum();
    let mut e2 = 0.0;
    let mut e3 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += p[i] * p[j];
            for k in j + 1..4 {
                e3 += p[i] * p[j] * p[k];
            }
        }
    }
    let s = -4.0 * prod * sum_p - 4.0 * e3 + 2.0 * e2 - sum_p2 + 8.0 * prod;
    if s < -1e-14 {
        return Err(Error::NegativeDiscriminant(s));
    }
    Ok(2.0 * s.max(0.0).sqrt().atan2(2.0 * (1.0 - 0.5 * sum_p - prod)))
}
