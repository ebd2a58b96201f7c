//! (k, delta) coordinates on a constant-area family of triangles.
//!
//! Sides are ordered a1 <= a2 <= a3, k = cot(a1/2) cot(a2/2) and
//! delta = cot(a1/2) - cot(a2/2). The included angle C between a1 and a2
//! is fixed by (area, k).

use std::f64::consts::{FRAC_PI_3, PI};

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::extremal::{half_square, TRI_MIN};
use crate::trig::{SphericalTriangle, TriangleInvariants};

const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const LEVEL_MAX_AREA: f64 = 0.97;
const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelDomain {
    pub area: f64,
    pub k0: f64,
    pub k1: f64,
    pub delta1: f64,
    pub k_hat: Option<f64>,
    pub delta_hat: Option<f64>,
    pub k_max: f64,
}

impl LevelDomain {
    /// Upper edge of the domain at a given k: the curved segment up to k1, the
    /// slant segment after.
    pub fn delta_max(&self, k: f64) -> Result<f64> {
        if k <= self.k1 {
            Ok(rho_delta_star(self.area, k)?.delta_star)
        } else {
            Ok((SQRT3 - k / SQRT3).max(0.0))
        }
    }

    /// The corner carrying the extremal triangle of this area.
    pub fn top_corner(&self) -> (f64, f64) {
        (self.k_max, self.delta_hat.unwrap_or(0.0))
    }
}

pub fn level_domain(area: f64) -> Result<LevelDomain> {
    check_range(area, TRI_MIN, LEVEL_MAX_AREA, 1e-12)?;
    let h = area / 2.0;
    let k0 = 1.0 / (1.0 - 2.0 * ((PI + area) / 3.0).cos());
    let k1 = SQRT3 / (7.0 - 4.0 * SQRT3 * h.cos()).sqrt();
    let delta1 = SQRT3 - k1 / SQRT3;
    let (k_hat, delta_hat, k_max) = if area > half_square() {
        let kh = 1.0 / h.sin();
        (Some(kh), Some(SQRT3 - kh / SQRT3), kh)
    } else {
        (None, None, 3.0)
    };
    Ok(LevelDomain {
        area,
        k0,
        k1: k1.min(k_max),
        delta1: delta1.max(0.0),
        k_hat,
        delta_hat,
        k_max,
    })
}

/// Angle C = arcsin(k sin(area/2)) + area/2.
pub fn included_angle(area: f64, k: f64) -> Result<f64> {
    let s = k * (area / 2.0).sin();
    if s > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain { k, delta: f64::NAN });
    }
    Ok(s.min(1.0).asin() + area / 2.0)
}

fn cot_pair(k: f64, delta: f64) -> (f64, f64) {
    let x1 = 0.5 * (delta + (delta * delta + 4.0 * k).sqrt());
    (x1, x1 - delta)
}

/// Builds the triangle with the given area and (k, delta), returning it with
/// its SAS data (a1, a2, C).
pub fn triangle_from_sas(area: f64, k: f64, delta: f64) -> Result<(SphericalTriangle, [f64; 3])> {
    let dom = level_domain(area)?;
    let out = Error::OutsideDomain { k, delta };
    if k < dom.k0 - DOMAIN_SLACK || k > dom.k_max + DOMAIN_SLACK || delta < -DOMAIN_SLACK {
        return Err(out);
    }
    let (x1, x2) = cot_pair(k, delta.max(0.0));
    if x2 <= 0.0 {
        return Err(out);
    }
    let a1 = 2.0 * (1.0 / x1).atan();
    let a2 = 2.0 * (1.0 / x2).atan();
    let c = included_angle(area, k).map_err(|_| out.clone())?;
    let tri = SphericalTriangle::from_sas(a1, a2, c).map_err(|_| out.clone())?;
    let a3 = tri.cos_c.acos();
    if a1 < FRAC_PI_3 - DOMAIN_SLACK || a2 > a3 + DOMAIN_SLACK {
        return Err(out);
    }
    Ok((tri, [a1, a2, c]))
}

pub fn triangle_from(area: f64, k: f64, delta: f64) -> Result<SphericalTriangle> {
    Ok(triangle_from_sas(area, k, delta)?.0)
}

pub fn rho_surface(area: f64, k: f64, delta: f64) -> Result<f64> {
    Ok(triangle_from(area, k, delta)?.invariants().rho)
}

/// Closed forms along the slant segment (shortest side pi/3).
pub fn rho_slant(area: f64, k: f64) -> Result<f64> {
    let dom = level_domain(area)?;
    if k < dom.k1 - DOMAIN_SLACK || k > dom.k_max + DOMAIN_SLACK {
        return Err(Error::OutsideDomain {
            k,
            delta: SQRT3 - k / SQRT3,
        });
    }
    let c = included_angle(area, k)?;
    let kk = k * k;
    let dd = 3.0 * k / (kk + 3.0) * c.sin();
    let tan2r = (kk + 9.0 - 6.0 * k * c.cos()) / (3.0 * kk * c.sin().powi(2));
    let sec2 = 1.0 + tan2r;
    let d1 = (2.0 / SQRT3 / sec2.sqrt()).min(1.0).acos();
    let d2 = (((kk + 3.0) / sec2).sqrt() / k).min(1.0).acos();
    // the d3 form reduced to a signed tangent; it vanishes at the vertical edge
    let p = kk + 9.0 - 6.0 * k * c.cos();
    let d3 = ((1.0 + k * c.cos()) * (p / (kk + 3.0)).sqrt() / (2.0 * k * c.sin())).atan();
    Ok((PI + 2.0 * area - 2.0 * (d1 + d2 + d3)) / (4.0 * dd))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaStar {
    pub rho: f64,
    pub delta_star: f64,
}

/// The curved segment: isosceles triangles with base b = a1 and legs c = a2 = a3,
/// base angles C.
pub fn rho_delta_star(area: f64, k: f64) -> Result<DeltaStar> {
    let h = area / 2.0;
    let k0 = 1.0 / (1.0 - 2.0 * ((PI + area) / 3.0).cos());
    let k1 = SQRT3 / (7.0 - 4.0 * SQRT3 * h.cos()).sqrt();
    check_range(area, TRI_MIN, LEVEL_MAX_AREA, 1e-12)?;
    if k < k0 - DOMAIN_SLACK || k > k1 + DOMAIN_SLACK {
        return Err(Error::OutsideDomain { k, delta: f64::NAN });
    }
    let c = included_angle(area, k)?;
    let (sc, cc) = c.sin_cos();
    let kc = 1.0 + k * cc;
    let cos_legs = k * cc / kc;
    let apex_half = (kc / (k * sc)).atan();
    let dd = 2.0 * k * sc * (1.0 + 2.0 * k * cc) / (kc * (1.0 + k * k + 2.0 * k * cc));
    let d1 = (kc.sqrt() / (2f64.sqrt() * k * sc)).atan();
    // base from the cosine law with legs and apex angle
    let sl = (1.0 - cos_legs * cos_legs).sqrt();
    let cos_base = cos_legs * cos_legs + sl * sl * (2.0 * apex_half).cos();
    let b = cos_base.clamp(-1.0, 1.0).acos();
    let d = ((b / 2.0).sin() * (c - apex_half).tan()).atan();
    let rho = (PI + 2.0 * area - 4.0 * d1 - 2.0 * d) / (4.0 * dd);
    let r = (1.0 + 2.0 * k * cc).sqrt();
    Ok(DeltaStar {
        rho,
        delta_star: k / r - r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourCurves {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
}

pub fn four_curves(area: f64) -> Result<FourCurves> {
    let dom = level_domain(area)?;
    let (kt, dt) = dom.top_corner();
    let rho = |k: f64, d: f64| rho_surface(area, k.max(dom.k0), d);
    Ok(FourCurves {
        f1: rho(kt, dt)?,
        f2: rho(dom.k1, dom.delta1)?,
        f3: rho(dom.k1, 0.0)?,
        f4: rho(dom.k0, 0.0)?,
    })
}

/// Invariants of the delta-deformation of the isosceles sigma(a, a; C) with
/// cot^2(a/2) = k, through the exact eta-relations, eta = delta^2/(k+1)^2.
pub fn delta_exact(k: f64, angle_c: f64, eta: f64) -> Result<TriangleInvariants> {
    if eta.is_nan() || eta < 0.0 || k.is_nan() || k <= 0.0 {
        return Err(Error::OutsideDomain {
            k,
            delta: (k + 1.0) * eta.max(0.0).sqrt(),
        });
    }
    let out = || Error::OutsideDomain {
        k,
        delta: (k + 1.0) * eta.sqrt(),
    };
    let ca = (k - 1.0) / (k + 1.0);
    let base = SphericalTriangle::from_sas(ca.acos(), ca.acos(), angle_c).map_err(|_| out())?;
    let inv0 = base.invariants();
    let a2 = 1.0 / (1.0 + k);
    let c2 = (1.0 - base.cos_c) / 2.0;
    let e = 1.0 + eta;
    let prod = a2 / e.sqrt();
    let sum_sq = 2.0 * a2 * (1.0 + (k + 1.0) * eta / 2.0) / e;
    let a3sq = c2 * (1.0 + eta / c2) / e;
    let disc = sum_sq * sum_sq - 4.0 * prod * prod;
    if disc < -1e-15 {
        return Err(out());
    }
    let r = disc.max(0.0).sqrt();
    let (p1, p2) = ((sum_sq + r) / 2.0, (sum_sq - r) / 2.0);
    // the shorter side a1 carries the smaller half-chord
    let tri = SphericalTriangle::from_cosines(1.0 - 2.0 * p2, 1.0 - 2.0 * p1, 1.0 - 2.0 * a3sq)
        .map_err(|_| out())?;
    let mut inv = tri.invariants();
    // overwrite with the exact relations
    inv.det = inv0.det / e;
    inv.u = 4.0 - 2.0 * (sum_sq + a3sq);
    inv.tan_r = inv0.tan_r * (1.0 + eta / c2).sqrt();
    let tan_d3 = inv0.d[2].tan() * ((1.0 + eta / c2) / e).sqrt();
    inv.d[2] = tan_d3.atan();
    inv.area = 2.0 * inv.det.atan2(inv.u);
    inv.nu = PI + 2.0 * inv.area - 2.0 * inv.d.iter().sum::<f64>();
    inv.rho = inv.nu / (4.0 * inv.det);
    Ok(inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lexell {
    pub ab: f64,
    pub ac: f64,
    pub b: f64,
    pub r: f64,
    pub theta: f64,
}

/// Apex A on the Lexell circle of a base of length a, for a fixed area.
pub fn lexell(a: f64, area: f64, phi: f64) -> Result<Lexell> {
    let t2 = (area / 2.0).tan().powi(2);
    let ca = a.cos();
    let cb = (1.0 - ca * (2.0 * t2 + 1.0)) / (2.0 * t2 + 1.0 - ca);
    if cb.is_nan() || cb.abs() > 1.0 {
        return Err(Error::Infeasible("no rectangle with this base and area"));
    }
    let b = cb.acos();
    let s = (a / 2.0).sin() / (b / 2.0).cos();
    if s > 1.0 {
        return Err(Error::Infeasible("Lexell circle does not reach the base"));
    }
    let theta = s.asin();
    if phi.abs() > theta + 1e-12 {
        return Err(Error::OutOfRange {
            value: phi,
            lo: -theta,
            hi: theta,
        });
    }
    let cb2 = (b / 2.0).cos();
    let half = |x: f64| 2.0 * (cb2 * (x / 2.0).cos()).clamp(-1.0, 1.0).acos();
    Ok(Lexell {
        ab: half(theta + phi),
        ac: half(theta - phi),
        b,
        r: cb2.asin(),
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_point_domain() {
        let d = level_domain(TRI_MIN).unwrap();
        assert_abs_diff_eq!(d.k0, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.k1, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn lexell_isosceles_at_zero() {
        let l = lexell(FRAC_PI_3, half_square(), 0.0).unwrap();
        assert_abs_diff_eq!(l.ab, l.ac, epsilon = 1e-15);
    }
}
