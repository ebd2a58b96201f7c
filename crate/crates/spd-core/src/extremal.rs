//! The two extremal triangle families and their area-wise envelopes.
//!
//! `sigma_theta` is the isosceles triangle with legs pi/3 and top angle theta.
//! `sigma_tilde` is half of the spherical rectangle inside a theta-lune whose
//! short sides are pi/3.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::trig::{SphericalTriangle, TriangleInvariants};

/// arccos(1/3), the angle of the pi/3 equilateral triangle.
pub const ALPHA0: f64 = 1.230_959_417_340_774_6;
/// arccos(-1/3).
pub const GAMMA0: f64 = 1.910_633_236_249_018_6;
/// 2 pi - 4 alpha0.
pub const GAMMA: f64 = 2.0 * PI - 4.0 * ALPHA0;
/// Area of the pi/3 equilateral triangle, 3 alpha0 - pi.
pub const TRI_MIN: f64 = 3.0 * ALPHA0 - PI;
/// Area of the pi/3 square, 4 gamma0 - 2 pi.
pub const SQ_MIN: f64 = 4.0 * GAMMA0 - 2.0 * PI;
/// pi / sqrt(18).
pub const RHO_STAR: f64 = 0.740_480_489_693_061_1;
/// Upper end of the f1 / w-hat domain.
pub const F1_MAX_AREA: f64 = 0.92;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub alpha0: f64,
    pub gamma0: f64,
    pub gamma: f64,
    pub tri_min: f64,
    pub sq_min: f64,
    pub rho_star: f64,
}

impl Constants {
    pub fn get() -> Self {
        Constants {
            alpha0: ALPHA0,
            gamma0: GAMMA0,
            gamma: GAMMA,
            tri_min: TRI_MIN,
            sq_min: SQ_MIN,
            rho_star: RHO_STAR,
        }
    }
}

/// Half of the pi/3 square, where the two branches meet.
pub fn half_square() -> f64 {
    SQ_MIN / 2.0
}

const THETA_SLACK: f64 = 1e-12;

pub fn sigma_theta_triangle(theta: f64) -> Result<SphericalTriangle> {
    check_range(theta, ALPHA0, PI - ALPHA0, THETA_SLACK)?;
    SphericalTriangle::from_sas(FRAC_PI_3, FRAC_PI_3, theta)
}

pub fn sigma_theta(theta: f64) -> Result<TriangleInvariants> {
    Ok(sigma_theta_triangle(theta)?.invariants())
}

/// Closed-form area of sigma_theta.
pub fn sigma_area(theta: f64) -> f64 {
    2.0 * (theta.sin() / (3.0 + theta.cos())).atan()
}

fn tilde_triangle_unchecked(theta: f64) -> Result<SphericalTriangle> {
    let cb = 0.75 * theta.cos() + 0.25;
    let cdiag = 0.75 * theta.cos() - 0.25;
    SphericalTriangle::from_cosines(0.5, cb, cdiag)
}

pub fn sigma_tilde_triangle(theta: f64) -> Result<SphericalTriangle> {
    check_range(theta, ALPHA0, FRAC_PI_2, THETA_SLACK)?;
    tilde_triangle_unchecked(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaTilde {
    pub inv: TriangleInvariants,
    pub tip_volume: f64,
    pub w_net: f64,
}

pub fn sigma_tilde(theta: f64) -> Result<SigmaTilde> {
    let inv = sigma_tilde_triangle(theta)?.invariants();
    let w = inv.w.ok_or(Error::CircumcenterOutside(0))?;
    let tip = inv.tip.unwrap_or(0.0);
    Ok(SigmaTilde {
        inv,
        tip_volume: tip,
        w_net: w - tip,
    })
}

/// (1/36)(1 - 3 cos t)^3 / sin t, zero at alpha0.
pub fn sigma_tilde_tip_closed(theta: f64) -> f64 {
    let k = (1.0 - 3.0 * theta.cos()).max(0.0);
    k.powi(3) / theta.sin() / 36.0
}

/// vol T(sigma~_t) = (2/9) tan(t/2)(11 + 3 cos t)/(5 + 3 cos t).
pub fn sigma_tilde_vol_closed(theta: f64) -> f64 {
    let c = theta.cos();
    2.0 / 9.0 * (theta / 2.0).tan() * (11.0 + 3.0 * c) / (5.0 + 3.0 * c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Sigma,
    SigmaTilde,
}

impl Branch {
    pub fn theta_range(self) -> (f64, f64) {
        match self {
            Branch::Sigma => (ALPHA0, PI - ALPHA0),
            Branch::SigmaTilde => (ALPHA0, FRAC_PI_2),
        }
    }

    pub fn area(self, theta: f64) -> f64 {
        match self {
            Branch::Sigma => sigma_area(theta),
            Branch::SigmaTilde => theta - sigma_area(theta),
        }
    }
}

/// Monotone bisection for the theta whose family member has the given area.
pub fn area_to_theta(area: f64, branch: Branch) -> Result<f64> {
    let (lo0, hi0) = branch.theta_range();
    let (alo, ahi) = (branch.area(lo0), branch.area(hi0));
    check_range(area, alo, ahi, 1e-13)?;
    let (mut lo, mut hi) = (lo0, hi0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if branch.area(mid) < area {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn envelope(area: f64) -> Result<(f64, f64)> {
    check_range(area, TRI_MIN, F1_MAX_AREA, 1e-13)?;
    // the sigma branch folds at half a square (theta = pi - alpha0), where
    // inverting the area costs half the digits; snap the last few ulps onto sigma~_alpha0
    if (area - half_square()).abs() <= 1e-15 {
        let st = sigma_tilde(ALPHA0)?;
        return Ok((st.inv.rho, st.w_net));
    }
    if area <= half_square() {
        let inv = sigma_theta(area_to_theta(area, Branch::Sigma)?.max(ALPHA0))?;
        Ok((inv.rho, inv.weight.unwrap_or(f64::NAN)))
    } else {
        let st = sigma_tilde(area_to_theta(area, Branch::SigmaTilde)?)?;
        Ok((st.inv.rho, st.w_net))
    }
}

/// Maximal density among triangles of the given area (the extremal envelope).
pub fn f1(area: f64) -> Result<f64> {
    Ok(envelope(area)?.0)
}

/// Weight of the extremal triangle of the given area.
pub fn w_hat(area: f64) -> Result<f64> {
    Ok(envelope(area)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constants_match_definitions() {
        assert_abs_diff_eq!(ALPHA0, (1.0f64 / 3.0).acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(GAMMA0, (-1.0f64 / 3.0).acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(RHO_STAR, PI / 18f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn tilde_at_alpha0_has_no_tip() {
        let st = sigma_tilde(ALPHA0).unwrap();
        assert_abs_diff_eq!(st.tip_volume, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(st.w_net, 8f64.sqrt() / 9.0, epsilon = 1e-13);
    }

    #[test]
    fn branches_meet_at_half_square() {
        let a = half_square();
        let left = sigma_theta(PI - ALPHA0).unwrap().rho;
        let right = sigma_tilde(ALPHA0).unwrap().inv.rho;
        assert_abs_diff_eq!(left, right, epsilon = 1e-9);
        assert_abs_diff_eq!(f1(a).unwrap(), right, epsilon = 1e-9);
    }
}
