//! Small vector toolkit on the unit sphere.

use nalgebra::{Matrix3, Vector3};

pub type V3 = Vector3<f64>;

pub fn sph(colat: f64, lon: f64) -> V3 {
    V3::new(colat.sin() * lon.cos(), colat.sin() * lon.sin(), colat.cos())
}

/// Great-circle distance between unit vectors.
pub fn dist(u: &V3, v: &V3) -> f64 {
    // atan2 form keeps precision near 0 and pi
    u.cross(v).norm().atan2(u.dot(v))
}

/// Rodrigues rotation of `v` about `axis` by `ang`.
pub fn rotate(v: &V3, axis: &V3, ang: f64) -> V3 {
    let k = axis.normalize();
    v * ang.cos() + k.cross(v) * ang.sin() + k * k.dot(v) * (1.0 - ang.cos())
}

/// Reflection of `p` across the great circle through `x` and `y`.
pub fn mirror(p: &V3, x: &V3, y: &V3) -> V3 {
    let n = x.cross(y).normalize();
    p - n * (2.0 * p.dot(&n))
}

/// Spherical angle at `v` between the arcs towards `x` and `y`.
pub fn angle_at(v: &V3, x: &V3, y: &V3) -> f64 {
    let tx = x - v * v.dot(x);
    let ty = y - v * v.dot(y);
    tx.cross(&ty).norm().atan2(tx.dot(&ty))
}

pub fn tet_vol(p: &[V3; 4]) -> f64 {
    Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]])
        .determinant()
        .abs()
        / 6.0
}

/// Volume of the part of a tetrahedron with `x . n <= h`.
pub fn clip_tet(p: &[V3; 4], n: &V3, h: f64) -> f64 {
    let f: Vec<f64> = p.iter().map(|q| q.dot(n) - h).collect();
    let inside: Vec<usize> = (0..4).filter(|&i| f[i] <= 0.0).collect();
    let out: Vec<usize> = (0..4).filter(|&i| f[i] > 0.0).collect();
    let cut = |i: usize, j: usize| {
        let t = f[i] / (f[i] - f[j]);
        p[i] + (p[j] - p[i]) * t
    };
    match out.len() {
        0 => tet_vol(p),
        4 => 0.0,
        1 => {
            let o = out[0];
            let c: Vec<V3> = inside.iter().map(|&i| cut(o, i)).collect();
            tet_vol(p) - tet_vol(&[p[o], c[0], c[1], c[2]])
        }
        3 => {
            let i = inside[0];
            let c: Vec<V3> = out.iter().map(|&o| cut(i, o)).collect();
            tet_vol(&[p[i], c[0], c[1], c[2]])
        }
        _ => {
            // wedge between two triangles, split into three tetrahedra
            let (i, j, k, l) = (inside[0], inside[1], out[0], out[1]);
            let (a, b, c, d) = (cut(i, k), cut(i, l), cut(j, k), cut(j, l));
            tet_vol(&[p[i], a, b, d]) + tet_vol(&[p[i], p[j], c, d]) + tet_vol(&[p[i], a, c, d])
        }
    }
}

/// Gross volume of T(sigma) and its part inside the plane through 2A, 2B, 2C.
///
/// T(sigma) is cut into six tetrahedra (V, O, X, P) and (V, O, P, Y) per side XY,
/// with V = M / cos R the meeting point of the three tangent planes and
/// P = (X + Y)/(1 + X.Y) the meeting point on the side's plane.
pub fn cell_volumes(a: &V3, b: &V3, c: &V3) -> (f64, f64) {
    let mut m = (b - a).cross(&(c - a)).normalize();
    if m.dot(a) < 0.0 {
        m = -m;
    }
    let cos_r = m.dot(a);
    let apex = m / cos_r;
    let o = V3::zeros();
    let (mut gross, mut net) = (0.0, 0.0);
    for (x, y) in [(a, b), (b, c), (c, a)] {
        let p = (x + y) / (1.0 + x.dot(y));
        for t in [[apex, o, *x, p], [apex, o, p, *y]] {
            gross += tet_vol(&t);
            net += clip_tet(&t, &m, 2.0 * cos_r);
        }
    }
    (gross, net)
}

pub fn min_separation(pts: &[V3]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min(dist(&pts[i], &pts[j]));
        }
    }
    m
}

/// Facets of the convex hull of a small point set, each as an outward cycle.
///
/// Brute force over triples; coplanar facet points are merged into one cycle.
pub fn hull_facets(pts: &[V3]) -> Vec<Vec<usize>> {
    const EPS: f64 = 1e-9;
    let n = pts.len();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                if nrm.norm() < EPS {
                    continue;
                }
                let nrm = nrm.normalize();
                let off = nrm.dot(&pts[i]);
                let side: Vec<f64> = pts.iter().map(|p| p.dot(&nrm) - off).collect();
                let (pos, neg) = (
                    side.iter().any(|&s| s > EPS),
                    side.iter().any(|&s| s < -EPS),
                );
                if pos && neg {
                    continue;
                }
                let outward = if pos { -nrm } else { nrm };
                let mut facet: Vec<usize> = (0..n).filter(|&m| side[m].abs() <= EPS).collect();
                if seen.contains(&facet) {
                    continue;
                }
                seen.push(facet.clone());
                let c = facet.iter().fold(V3::zeros(), |acc, &m| acc + pts[m]) / facet.len() as f64;
                let e1 = (pts[facet[0]] - c).normalize();
                let e2 = outward.cross(&e1);
                facet.sort_by(|&a, &b| {
                    let ta = (pts[a] - c).dot(&e2).atan2((pts[a] - c).dot(&e1));
                    let tb = (pts[b] - c).dot(&e2).atan2((pts[b] - c).dot(&e1));
                    ta.total_cmp(&tb)
                });
                out.push(facet);
            }
        }
    }
    out
}
