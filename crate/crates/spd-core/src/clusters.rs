//! Five-triangle stars, lune clusters and the tight extensions of a star.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::Serialize;

use crate::configurations::TypeIConfiguration;
use crate::error::{check_range, Error, Result};
use crate::extremal::{f1, sigma_theta, sigma_tilde, w_hat, ALPHA0, GAMMA, RHO_STAR};
use crate::geom::{angle_at, dist, mirror, rotate, sph, V3};
use crate::trig::{quad_solve_missing, QuadGram, SphericalTriangle, TriangleInvariants};

const EDGE_SLACK: f64 = 1e-10;

/// A star of five triangles around a common vertex.
///
/// Triangle i has radial sides r[i], r[i+1] and central angle theta[i].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Star5 {
    pub r: [f64; 5],
    pub theta: [f64; 5],
    /// Boundary edges, b[i] opposite theta[i].
    pub b: [f64; 5],
    pub triangles: [TriangleInvariants; 5],
    pub area: f64,
    pub w_tilde: f64,
    pub rho_tilde: f64,
}

impl Star5 {
    pub fn new(r: [f64; 5], theta: [f64; 5]) -> Result<Self> {
        let total: f64 = theta.iter().sum();
        if (total - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::BadAngles("central angles must sum to 2 pi"));
        }
        if theta.iter().any(|&t| !(t > 0.0 && t < PI)) {
            return Err(Error::BadAngles("central angles must lie in (0, pi)"));
        }
        star_invariants(r, theta)
    }

    /// Star at `center` with the ring of neighbours in cyclic order.
    pub fn from_vectors(center: &V3, ring: &[V3; 5]) -> Result<Self> {
        let r = ring.map(|p| dist(center, &p));
        let theta: [f64; 5] = std::array::from_fn(|i| angle_at(center, &ring[i], &ring[(i + 1) % 5]));
        let mut star = Star5::new(r, theta)?;
        // exact triangles from the vectors
        for i in 0..5 {
            let t = SphericalTriangle::from_vectors(center, &ring[i], &ring[(i + 1) % 5])?;
            star.triangles[i] = t.invariants();
            star.b[i] = dist(&ring[i], &ring[(i + 1) % 5]);
        }
        star.aggregate()?;
        Ok(star)
    }

    fn aggregate(&mut self) -> Result<()> {
        let (mut num, mut den, mut area) = (0.0, 0.0, 0.0);
        for (i, t) in self.triangles.iter().enumerate() {
            let w = t.weight.ok_or(Error::CircumcenterOutside(i))?;
            num += w * t.rho;
            den += w;
            area += t.area;
        }
        self.area = area;
        self.w_tilde = den;
        self.rho_tilde = num / den;
        Ok(())
    }

    pub fn areas(&self) -> [f64; 5] {
        self.triangles.map(|t| t.area)
    }

    pub fn weights(&self) -> [f64; 5] {
        self.triangles.map(|t| t.weight.unwrap_or(f64::NAN))
    }

    pub fn max_circumradius(&self) -> f64 {
        self.triangles.iter().map(|t| t.circumradius()).fold(0.0, f64::max)
    }
}

/// Builds the five triangles by SAS and aggregates them.
pub fn star_invariants(r: [f64; 5], theta: [f64; 5]) -> Result<Star5> {
    if let Some(&e) = r.iter().find(|&&e| e < FRAC_PI_3 - EDGE_SLACK) {
        return Err(Error::EdgeTooShort(e));
    }
    let mut b = [0.0; 5];
    let mut tris = Vec::with_capacity(5);
    for i in 0..5 {
        let t = SphericalTriangle::from_sas(r[i], r[(i + 1) % 5], theta[i])?;
        b[i] = t.sides()[2];
        if b[i] < FRAC_PI_3 - EDGE_SLACK {
            return Err(Error::EdgeTooShort(b[i]));
        }
        tris.push(t.invariants());
    }
    let triangles: [TriangleInvariants; 5] = tris.try_into().expect("five triangles");
    let mut star = Star5 {
        r,
        theta,
        b,
        triangles,
        area: 0.0,
        w_tilde: 0.0,
        rho_tilde: 0.0,
    };
    star.aggregate()?;
    Ok(star)
}

/// Star with all radial edges pi/3 and the given central angles.
pub fn uniform_star(theta: [f64; 5]) -> Result<Star5> {
    Star5::new([FRAC_PI_3; 5], theta)
}

/// The minimal star {alpha0 x4, gamma}.
pub fn minimal_star() -> Star5 {
    uniform_star([ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA]).expect("minimal star")
}

/// rho-bar of the two-triangle cluster {sigma_theta, sigma~_theta} filling a theta-lune.
pub fn lune_rho(theta: f64) -> Result<f64> {
    check_range(theta, ALPHA0, GAMMA, 1e-12)?;
    let s = sigma_theta(theta)?;
    let t = sigma_tilde(theta)?;
    let w = s.weight.ok_or(Error::CircumcenterOutside(0))?;
    Ok((w * s.rho + t.w_net * t.inv.rho) / (w + t.w_net))
}

fn at(x: f64) -> f64 {
    (2.0 / (x / 2.0).tan()).atan()
}

/// St5-circle(theta): one long radial edge, the rest pi/3.
pub fn st5_circle(theta: f64) -> Result<Star5> {
    check_range(theta, ALPHA0, PI - ALPHA0, 1e-12)?;
    let r0 = ((3.0 * theta.cos() + 1.0) / 4.0).acos();
    let beta = at(theta);
    let bar = 2.0 * PI - 2.0 * ALPHA0 - 2.0 * beta;
    Star5::new(
        [r0, FRAC_PI_3, FRAC_PI_3, FRAC_PI_3, FRAC_PI_3],
        [beta, ALPHA0, bar, ALPHA0, beta],
    )
}

/// Star at A_i of a five-square configuration with neighbouring angles theta1, theta2.
///
/// Triangles {sigma_theta1, sigma_theta2, sigma~_theta1, 2 sigma~_theta2}.
pub fn st5_pair(theta1: f64, theta2: f64) -> Result<Star5> {
    for t in [theta1, theta2] {
        check_range(t, ALPHA0, PI / 2.0, 1e-12)?;
    }
    let n = V3::new(0.0, 0.0, 1.0);
    let a = sph(FRAC_PI_3, 0.0);
    let a_next = sph(FRAC_PI_3, theta2);
    let a_prev = sph(FRAC_PI_3, -theta1);
    let lo = sph(2.0 * FRAC_PI_3, 0.0);
    let lo_next = sph(2.0 * FRAC_PI_3, theta2);
    Star5::from_vectors(&a, &[n, a_next, lo_next, lo, a_prev])
}

/// Weighted average of f1 over the star's triangle areas, weights w-hat.
pub fn mu(star: &Star5) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for s in star.areas() {
        let wh = w_hat(s)?;
        num += wh * f1(s)?;
        den += wh;
    }
    Ok(num / den)
}

/// Sum of w(f1 - rho) + (f1 - mu)(w-hat - w) over the star.
///
/// Equals (mu - rho~) * w~.
pub fn correlation_residual(star: &Star5) -> Result<f64> {
    let m = mu(star)?;
    let mut total = 0.0;
    for t in &star.triangles {
        let w = t.weight.ok_or(Error::CircumcenterOutside(0))?;
        let fs = f1(t.area)?;
        total += w * (fs - t.rho) + (fs - m) * (w_hat(t.area)? - w);
    }
    Ok(total)
}

/// 2 arcsin((sqrt3/2) sin 2 alpha0) - pi/3.
pub fn small_star_bound() -> f64 {
    2.0 * ((3f64.sqrt() / 2.0) * (2.0 * ALPHA0).sin()).asin() - FRAC_PI_3
}

/// w~ (rho~ - pi/sqrt18) / (pi - |St|).
pub fn weighted_slope(star: &Star5) -> Result<f64> {
    let gap = PI - star.area;
    if gap.abs() <= 1e-9 {
        return Err(Error::AreaAtPi);
    }
    Ok(star.w_tilde * (star.rho_tilde - RHO_STAR) / gap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightExtension {
    pub cos_b: [f64; 5],
    /// cos N V_i, from the quad relation on (A_i, A_{i+1}, N, V_i).
    pub cos_d: [f64; 5],
    /// cos V_i V_{i+1}, from the quad relation on (N, A_{i+1}, V_i, V_{i+1}).
    pub cos_b_tilde: [f64; 5],
    /// Apex angle at A_{i+1} of the triangle (A_{i+1}, V_i, V_{i+1}).
    pub theta_tilde: [f64; 5],
    pub min_separation: f64,
    pub rho_bar: f64,
    #[serde(skip)]
    pub config: TypeIConfiguration,
}

/// Closes the star {N; A_i} by V_i at pi/3 from A_i, A_{i+1} and the antipode S of N.
pub fn tight_extension(r: [f64; 5], theta: [f64; 5]) -> Result<TightExtension> {
    let star = Star5::new(r, theta)?;
    let n = V3::new(0.0, 0.0, 1.0);
    let mut lon = 0.0;
    let a: [V3; 5] = std::array::from_fn(|i| {
        let p = sph(r[i], lon);
        lon += theta[i];
        p
    });
    let mut v = [V3::zeros(); 5];
    for i in 0..5 {
        v[i] = apex_point(&a[i], &a[(i + 1) % 5], &n)?;
    }
    let s = -n;
    let mut pts = vec![n];
    pts.extend_from_slice(&a);
    pts.extend_from_slice(&v);
    pts.push(s);
    let mut faces = Vec::with_capacity(20);
    for i in 0..5 {
        let j = (i + 1) % 5;
        let ip = (i + 4) % 5;
        faces.push([0, 1 + i, 1 + j]);
        faces.push([1 + i, 6 + i, 1 + j]);
        faces.push([1 + i, 6 + ip, 6 + i]);
        faces.push([11, 6 + i, 6 + ip]);
    }
    let config = TypeIConfiguration::new(pts, faces, "tight-extension")?;
    let report = crate::configurations::rho_bar(&config)?;

    let mut cos_d = [0.0; 5];
    let mut cos_b_tilde = [0.0; 5];
    let mut theta_tilde = [0.0; 5];
    for i in 0..5 {
        let j = (i + 1) % 5;
        let g = QuadGram::from_vectors(&a[i], &a[j], &n, &v[i]);
        cos_d[i] = quad_solve_missing(&g)?;
    }
    for i in 0..5 {
        let j = (i + 1) % 5;
        let g = QuadGram {
            ab: r[j].cos(),
            ac: cos_d[i],
            ad: cos_d[j],
            bc: 0.5,
            bd: 0.5,
            same_side: false,
        };
        cos_b_tilde[i] = quad_solve_missing(&g)?;
        theta_tilde[i] = angle_at(&a[j], &v[i], &v[j]);
    }
    Ok(TightExtension {
        cos_b: star.b.map(f64::cos),
        cos_d,
        cos_b_tilde,
        theta_tilde,
        min_separation: crate::geom::min_separation(&config.vertices),
        rho_bar: report.rho_bar,
        config,
    })
}

/// The point at pi/3 from x and y on the side of the great circle xy away from `away`.
fn apex_point(x: &V3, y: &V3, away: &V3) -> Result<V3> {
    let c = x.dot(y);
    let denom = 1.0 + c;
    // base in span{x, y} with v.x = v.y = 1/2
    let base = (x + y) * (0.5 / denom);
    let h2 = 1.0 - base.norm_squared();
    if h2 < 0.0 {
        return Err(Error::NegativeDiscriminant(h2));
    }
    let nrm = x.cross(y).normalize();
    let p1 = base + nrm * h2.sqrt();
    let p2 = base - nrm * h2.sqrt();
    Ok(if p1.dot(away) < p2.dot(away) { p1 } else { p2 })
}

/// Tight extension of the star with all radial edges pi/3.
pub fn tight_extension_uniform(theta: [f64; 5]) -> Result<TightExtension> {
    if theta.iter().any(|&t| t < ALPHA0 - 1e-12) {
        return Err(Error::BadAngles("central angles must be at least alpha0"));
    }
    let ext = tight_extension([FRAC_PI_3; 5], theta)?;
    if ext.min_separation < FRAC_PI_3 - 1e-9 {
        return Err(Error::SeparationViolation(ext.min_separation));
    }
    Ok(ext)
}

/// Printed closed forms for the uniform tight extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformFormulas {
    pub cos_b: [f64; 5],
    pub d: [f64; 5],
    pub cos_b_tilde: [f64; 5],
}

pub fn tight_extension_uniform_formulas(theta: [f64; 5]) -> UniformFormulas {
    let cos_b = theta.map(|t| 0.75 * t.cos() + 0.25);
    let d = theta.map(|t| 2.0 * (3f64.sqrt() * (t / 2.0).cos()).atan());
    let cos_b_tilde = std::array::from_fn(|i| {
        let j = (i + 1) % 5;
        d[i].sin() * d[j].sin() * ((theta[i] + theta[j]) / 2.0).cos() + d[i].cos() * d[j].cos()
    });
    UniformFormulas {
        cos_b,
        d,
        cos_b_tilde,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct St5CircleExtension {
    pub theta: f64,
    pub ext: TightExtension,
    /// Closed forms: cos d1, cos d2, cos d3.
    pub cos_d_formula: [f64; 3],
    /// Closed forms for the three distinct apex angles.
    pub theta_tilde_formula: [f64; 3],
}

/// Tight extension of St5-circle(theta), theta in [alpha0, gamma].
pub fn st5o_tight_extension(theta: f64) -> Result<St5CircleExtension> {
    check_range(theta, ALPHA0, GAMMA, 1e-12)?;
    let star = st5_circle(theta)?;
    let ext = tight_extension(star.r, star.theta)?;
    let t1 = star.theta[0];
    let t3 = star.theta[2];
    let cos_b3 = star.b[2].cos();
    let cos_d_formula = [
        0.25 * (3.0 * (theta + ALPHA0).cos() + 1.0),
        -1.0 / 3.0,
        -cos_b3 / (1.0 + cos_b3),
    ];
    let theta_tilde_formula = [
        2.0 * PI - 2.0 * ALPHA0 - 2.0 * t1,
        2.0 * PI - 3.0 * ALPHA0 - theta,
        2.0 * PI - 2.0 * ALPHA0 - 2.0 * at(t3),
    ];
    Ok(St5CircleExtension {
        theta,
        ext,
        cos_d_formula,
        theta_tilde_formula,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallStarEdges {
    pub b0: f64,
    pub b_prime: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub l5: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallStarAngles {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu5: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallStarConfig {
    pub theta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub edges: SmallStarEdges,
    /// Closed forms of b0, b', l4, l3, l2, l5 in that order.
    pub edge_formulas: [f64; 6],
    pub angles: SmallStarAngles,
    /// Closed forms of mu'1, mu'2, mu'3, mu'5.
    pub angle_formulas: [f64; 4],
    pub rho_bar: f64,
    /// Area and rho~ of the star at A2.
    pub star_a2_area: f64,
    pub star_a2_rho: f64,
    #[serde(skip)]
    pub config: TypeIConfiguration,
}

/// f(theta) = lambda1 + lambda2 for the small-star family.
pub fn smallstar_total_angle(theta: f64) -> f64 {
    2.0 * (PI - at(PI + theta - ALPHA0) - at(PI - theta - ALPHA0))
}

/// The configuration S(Sigma(theta, lambda1)).
///
/// theta in [0, 3 alpha0 - pi], lambda1 in [alpha0, f(theta) - alpha0].
pub fn smallstar_config(theta: f64, lambda1: f64) -> Result<SmallStarConfig> {
    check_range(theta, 0.0, 3.0 * ALPHA0 - PI, 1e-12)?;
    let f = smallstar_total_angle(theta);
    check_range(lambda1, ALPHA0, f - ALPHA0, 1e-12)?;
    let lambda2 = f - lambda1;

    let n = V3::new(0.0, 0.0, 1.0);
    let lons = [0.0, GAMMA, GAMMA + ALPHA0, GAMMA + 2.0 * ALPHA0, GAMMA + 3.0 * ALPHA0];
    let a = lons.map(|l| sph(FRAC_PI_3, l));
    let t4 = sph(2.0 * FRAC_PI_3, lons[3]);
    let ap4 = if theta == 0.0 {
        t4
    } else {
        let c1 = rotate(&t4, &a[3], theta);
        let c2 = rotate(&t4, &a[3], -theta);
        if c1.dot(&a[4]) >= c2.dot(&a[4]) {
            c1
        } else {
            c2
        }
    };
    let ap3 = mirror(&a[3], &a[2], &ap4);
    let ap5 = mirror(&a[3], &a[4], &ap4);
    let sector = |p: &V3| {
        (angle_at(&ap4, &ap3, p) + angle_at(&ap4, p, &ap5) - angle_at(&ap4, &ap3, &ap5)).abs()
    };
    let c1 = rotate(&ap3, &ap4, lambda2);
    let c2 = rotate(&ap3, &ap4, -lambda2);
    let np = if sector(&c1) <= sector(&c2) { c1 } else { c2 };
    let ap2 = mirror(&ap4, &np, &ap3);
    let ap1 = mirror(&ap4, &np, &ap5);
    let pts = vec![n, a[0], a[1], a[2], a[3], a[4], ap1, ap2, ap3, ap4, ap5, np];
    let faces = vec![
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [11, 7, 6], [11, 8, 7], [11, 9, 8], [11, 10, 9], [11, 6, 10],
        [1, 2, 6], [2, 7, 6], [2, 3, 7], [3, 8, 7], [3, 4, 8],
        [4, 9, 8], [4, 5, 9], [5, 10, 9], [5, 1, 10], [1, 6, 10],
    ];
    let config = TypeIConfiguration::new(pts, faces, "small-star")?;
    let report = crate::configurations::rho_bar(&config)?;
    let p = &config.vertices;
    let d = |i: usize, j: usize| dist(&p[i], &p[j]);
    let edges = SmallStarEdges {
        b0: d(1, 2),
        b_prime: d(6, 7),
        l1: d(2, 6),
        l2: d(3, 7),
        l3: d(4, 8),
        l4: d(5, 9),
        l5: d(1, 10),
        d1: d(1, 6),
        d2: d(2, 7),
    };
    let s3 = 3f64.sqrt() / 2.0;
    let a5h = PI - at(lambda1) - at(lambda2);
    let mu3 = 2.0 * at(lambda2);
    let nu3 = PI + ALPHA0 - mu3 - theta;
    let nu5 = 2.0 * PI - 2.0 * ALPHA0 - 2.0 * at(PI - ALPHA0 - theta);
    let edge_formulas = [
        2.0 * (s3 * (GAMMA / 2.0).sin()).asin(),
        2.0 * (s3 * a5h.sin()).asin(),
        2.0 * (s3 * ((PI - ALPHA0 - theta) / 2.0).sin()).asin(),
        2.0 * (3f64.sqrt() * ((PI - ALPHA0 + theta) / 2.0).cos()).atan(),
        2.0 * (s3 * (nu3 / 2.0).sin()).asin(),
        2.0 * (s3 * (nu5 / 2.0).sin()).asin(),
    ];
    let angles = SmallStarAngles {
        mu1: angle_at(&p[6], &p[10], &p[7]),
        mu2: angle_at(&p[7], &p[6], &p[8]),
        mu3: angle_at(&p[8], &p[7], &p[9]),
        mu5: angle_at(&p[10], &p[9], &p[6]),
    };
    let angle_formulas = [
        lambda1 + at(2.0 * a5h),
        lambda2 + at(2.0 * a5h),
        mu3,
        2.0 * at(lambda1),
    ];
    let star = report.stars[2];
    Ok(SmallStarConfig {
        theta,
        lambda1,
        lambda2,
        edges,
        edge_formulas,
        angles,
        angle_formulas,
        rho_bar: report.rho_bar,
        star_a2_area: star.area,
        star_a2_rho: star.rho_tilde,
        config,
    })
}
