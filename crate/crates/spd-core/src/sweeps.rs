//! Seeded sampling and grid oracles.
//!
//! Every campaign draws sample i from its own ChaCha8 stream (seed, i), so the
//! sequential and parallel paths produce identical reports.

use std::f64::consts::{FRAC_PI_3, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution, Exp1};
use serde::Serialize;

use crate::clusters::{
    lune_rho, mu, smallstar_config, st5_circle, st5_pair, st5o_tight_extension, star_invariants,
    Star5,
};
use crate::error::{check_range, Error, Result};
use crate::extremal::{
    f1, half_square, sigma_area, sigma_theta, sigma_tilde, w_hat, Branch, ALPHA0, F1_MAX_AREA,
    GAMMA, GAMMA0, SQ_MIN, TRI_MIN,
};
use crate::level::{four_curves, level_domain, rho_surface};
use crate::trig::{area_partials, SphericalTriangle, Wrt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

/// Maps `f` over 0..n, in parallel when the feature and the mode allow it.
pub fn map_indices<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub samples: usize,
    pub worst_case: f64,
    pub threshold: f64,
    pub violations: usize,
    pub pass: bool,
    pub seed: u64,
}

impl SweepReport {
    fn new(name: impl Into<String>, samples: usize, worst: f64, threshold: f64, violations: usize, seed: u64) -> Self {
        SweepReport {
            name: name.into(),
            samples,
            worst_case: worst,
            threshold,
            violations,
            pass: violations == 0,
            seed,
        }
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Smallest star area reachable, |St5-circle(alpha0)|.
pub fn min_star_area() -> f64 {
    4.0 * TRI_MIN + sigma_area(GAMMA)
}

/// Largest star area covered, |St5(alpha0, gamma)|.
pub fn max_star_area() -> f64 {
    ALPHA0 + 2.0 * GAMMA - sigma_area(GAMMA)
}

fn bisect(lo: f64, hi: f64, target: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Illinois regula falsi for increasing g on [lo, hi] with g(lo) <= target <= g(hi).
fn illinois(lo: f64, hi: f64, target: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a) - target, g(b) - target);
    let mut side = 0;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = g(c) - target;
        if fc.abs() < 1e-14 || (b - a).abs() < 1e-15 {
            return c;
        }
        if fc < 0.0 {
            a = c;
            fa = fc;
            if side == -1 {
                fb /= 2.0;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa /= 2.0;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

fn st5o_area(theta: f64) -> f64 {
    let beta = (2.0 / (theta / 2.0).tan()).atan();
    2.0 * TRI_MIN + 2.0 * sigma_area(theta) + sigma_area(2.0 * PI - 2.0 * ALPHA0 - 2.0 * beta)
}

/// The extremal star of a given area: St5-circle below pi, St5(alpha0, theta) above.
pub fn extremal_star(area: f64) -> Result<Star5> {
    let (lo, hi) = (min_star_area(), max_star_area());
    if !(area >= lo - 1e-12 && area <= hi + 1e-12) {
        return Err(Error::InfeasibleArea(area));
    }
    if area < PI {
        let t = bisect(ALPHA0, PI - ALPHA0, area, st5o_area);
        st5_circle(t)
    } else {
        let t = bisect(ALPHA0, GAMMA, area, |t| ALPHA0 + 2.0 * t - sigma_area(t));
        st5_pair(ALPHA0, t)
    }
}

const CONCENTRATIONS: [f64; 4] = [1.0, 3.0, 10.0, 30.0];
const ANGLE_FLOOR: f64 = 0.7;
const MAX_ATTEMPTS: usize = 2000;

fn sas_area(a: f64, b: f64, c: f64) -> f64 {
    let (x, y) = (1.0 / (a / 2.0).tan(), 1.0 / (b / 2.0).tan());
    2.0 * c.sin().atan2(x * y + c.cos())
}

fn star_area(r: &[f64; 5], theta: &[f64; 5]) -> f64 {
    (0..5).map(|i| sas_area(r[i], r[(i + 1) % 5], theta[i])).sum()
}

/// One proposal: Dirichlet angles above a floor, exponential radial excess
/// scaled by bisection to the target area.
fn propose(rng: &mut ChaCha8Rng, area: f64) -> Option<Star5> {
    let kappa = CONCENTRATIONS[rng.random_range(0..CONCENTRATIONS.len())];
    let dir = Dirichlet::new([kappa; 5]).ok()?.sample(rng);
    let free = 2.0 * PI - 5.0 * ANGLE_FLOOR;
    let mut theta = dir.map(|x| ANGLE_FLOOR + free * x);
    // exact closure of the angle sum
    let s: f64 = theta.iter().sum();
    theta[4] += 2.0 * PI - s;
    let mut e = [0.0; 5];
    for x in e.iter_mut() {
        if rng.random_bool(0.5) {
            *x = rng.sample::<f64, _>(Exp1);
        }
    }
    let emax = e.iter().copied().fold(0.0, f64::max);
    let at = |t: f64| -> [f64; 5] { e.map(|x| FRAC_PI_3 + t * x) };
    let t = if emax == 0.0 {
        if (star_area(&at(0.0), &theta) - area).abs() > 1e-12 {
            return None;
        }
        0.0
    } else {
        let tmax = 0.6 / emax;
        if star_area(&at(0.0), &theta) > area || star_area(&at(tmax), &theta) < area {
            return None;
        }
        illinois(0.0, tmax, area, |t| star_area(&at(t), &theta))
    };
    let r = at(t);
    // cheap screen before the full invariants
    for i in 0..5 {
        let tri = SphericalTriangle::from_sas(r[i], r[(i + 1) % 5], theta[i]).ok()?;
        let (inside, tan_r) = tri.circumcircle();
        if tri.cos_c > 0.5 + 1e-10 || !inside || tan_r >= 3f64.sqrt() {
            return None;
        }
    }
    let star = star_invariants(r, theta).ok()?;
    let ok = star.triangles.iter().all(|t| t.contains_circumcenter && t.circumradius() < FRAC_PI_3)
        && star.b.iter().all(|&b| b >= FRAC_PI_3 - 1e-10)
        && (star.area - area).abs() < 1e-9;
    ok.then_some(star)
}

/// A valid random star of the given area from stream (seed, index).
pub fn sample_star(area: f64, seed: u64, index: usize) -> Option<Star5> {
    let mut rng = stream(seed, index);
    (0..MAX_ATTEMPTS).find_map(|_| propose(&mut rng, area))
}

pub fn verify_star_extremal(area: f64, samples: usize, seed: u64) -> Result<SweepReport> {
    verify_star_extremal_with(area, samples, seed, ExecMode::default())
}

pub fn verify_star_extremal_with(area: f64, samples: usize, seed: u64, mode: ExecMode) -> Result<SweepReport> {
    let bound = extremal_star(area)?.rho_tilde;
    let gaps: Vec<Option<f64>> = map_indices(mode, samples, |i| {
        sample_star(area, seed, i).map(|s| s.rho_tilde - bound)
    });
    let drawn: Vec<f64> = gaps.into_iter().flatten().collect();
    if samples > 0 && drawn.is_empty() {
        return Err(Error::InfeasibleArea(area));
    }
    let worst = drawn.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let violations = drawn.iter().filter(|&&g| g > 1e-9).count();
    Ok(SweepReport::new(
        format!("star-extremal area={area:.6}"),
        drawn.len(),
        worst,
        1e-9,
        violations,
        seed,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexCurve {
    LuneRho,
    SigmaBranch,
    SigmaTildeBranch,
}

fn curve_points(curve: ConvexCurve, n: usize) -> Result<Vec<(f64, f64)>> {
    let grid = |lo: f64, hi: f64| (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64);
    match curve {
        ConvexCurve::LuneRho => grid(ALPHA0, GAMMA).map(|t| Ok((t, lune_rho(t)?))).collect(),
        ConvexCurve::SigmaBranch => grid(TRI_MIN, half_square()).map(|a| Ok((a, f1(a)?))).collect(),
        ConvexCurve::SigmaTildeBranch => grid(half_square(), F1_MAX_AREA)
            .map(|a| Ok((a, f1(a)?)))
            .collect(),
    }
}

pub fn convexity_scan(curve: ConvexCurve, n: usize) -> Result<SweepReport> {
    if n < 16 {
        return Err(Error::OutOfRange {
            value: n as f64,
            lo: 16.0,
            hi: f64::INFINITY,
        });
    }
    let pts = curve_points(curve, n)?;
    let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let diffs: Vec<f64> = slopes.windows(2).map(|s| s[1] - s[0]).collect();
    let worst = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = diffs.iter().filter(|&&d| d < -1e-9).count();
    Ok(SweepReport::new(format!("convexity {curve:?}"), n, worst, -1e-9, violations, 0))
}

/// rho on an n x n grid of the level domain: non-decreasing in delta and
/// never below the value at (k0, 0).
pub fn monotone_delta_scan(area: f64, n: usize) -> Result<SweepReport> {
    let dom = level_domain(area)?;
    let floor = rho_surface(area, dom.k0, 0.0)?;
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    let mut count = 0;
    for i in 0..n {
        let k = dom.k0 + (dom.k_max - dom.k0) * i as f64 / (n - 1).max(1) as f64;
        let dmax = dom.delta_max(k)?;
        let mut prev: Option<f64> = None;
        for j in 0..n {
            let d = dmax * j as f64 / (n - 1).max(1) as f64;
            let Ok(r) = rho_surface(area, k, d) else { continue };
            count += 1;
            if r < floor - 1e-9 {
                violations += 1;
            }
            if let Some(p) = prev {
                worst = worst.min(r - p);
                if r < p - 1e-9 {
                    violations += 1;
                }
            }
            prev = Some(r);
        }
    }
    Ok(SweepReport::new(
        format!("monotone-delta area={area:.6}"),
        count,
        worst,
        -1e-9,
        violations,
        0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadFit {
    pub coefficient: f64,
    pub cubic: f64,
    pub quartic: f64,
    pub exact: f64,
    pub reference_value: f64,
    pub max_residual: f64,
}

/// Rhombus with sides pi/3 and angle C = gamma0 + eps.
pub fn rhombus_area(eps: f64) -> f64 {
    let c = GAMMA0 + eps;
    4.0 * (c.sin() / (3.0 + c.cos())).atan()
}

/// Least-squares fit of sq_min - area(eps) = c eps^2 + d eps^3 + e eps^4 on (0, 0.05].
pub fn quad_deficit_fit() -> QuadFit {
    let m = 200;
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = nalgebra::Vector3::<f64>::zeros();
    let pts: Vec<(f64, f64)> = (1..=m)
        .map(|i| {
            let e = 0.05 * i as f64 / m as f64;
            (e, SQ_MIN - rhombus_area(e))
        })
        .collect();
    for &(e, y) in &pts {
        let row = nalgebra::Vector3::new(e * e, e.powi(3), e.powi(4));
        ata += row * row.transpose();
        atb += row * y;
    }
    let sol = ata.lu().solve(&atb).unwrap_or_default();
    let max_residual = pts
        .iter()
        .map(|&(e, y)| (y - sol[0] * e * e - sol[1] * e.powi(3) - sol[2] * e.powi(4)).abs())
        .fold(0.0, f64::max);
    QuadFit {
        coefficient: sol[0],
        cubic: sol[1],
        quartic: sol[2],
        exact: 0.5f64.sqrt(),
        reference_value: 0.7046,
        max_residual,
    }
}

/// The five correlation summands of a star.
pub fn correlation_summands(star: &Star5) -> Result<[f64; 5]> {
    let m = mu(star)?;
    let mut out = [0.0; 5];
    for (i, t) in star.triangles.iter().enumerate() {
        let w = t.weight.ok_or(Error::CircumcenterOutside(i))?;
        let fs = f1(t.area)?;
        out[i] = w * (fs - t.rho) + (fs - m) * (w_hat(t.area)? - w);
    }
    Ok(out)
}

pub fn sublemma_scan(samples: usize, seed: u64) -> SweepReport {
    sublemma_scan_with(samples, seed, ExecMode::default())
}

pub fn sublemma_scan_with(samples: usize, seed: u64, mode: ExecMode) -> SweepReport {
    let (lo, hi) = (min_star_area(), max_star_area());
    let mins: Vec<Option<f64>> = map_indices(mode, samples, |i| {
        let mut rng = stream(seed, i);
        for _ in 0..MAX_ATTEMPTS {
            let area = rng.random_range(lo..hi);
            if let Some(s) = propose(&mut rng, area) {
                if let Ok(v) = correlation_summands(&s) {
                    return Some(v.iter().copied().fold(f64::INFINITY, f64::min));
                }
            }
        }
        None
    });
    let vals: Vec<f64> = mins.into_iter().flatten().collect();
    let worst = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = vals.iter().filter(|&&v| v < -1e-9).count();
    SweepReport::new("sublemma", vals.len(), worst, -1e-9, violations, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FdTarget {
    /// d|sigma|/dC at fixed sides a, b.
    AreaWrtC,
    /// d|sigma|/dx, x = 1 + cos c, at fixed a, b.
    AreaWrtX,
}

/// Central difference against the closed-form partial at the SAS point (a, b, C).
pub fn fd_check(target: FdTarget, point: [f64; 3], h: f64) -> Result<SweepReport> {
    let [a, b, c] = point;
    let tri = SphericalTriangle::from_sas(a, b, c)?;
    let (exact, fd) = match target {
        FdTarget::AreaWrtC => {
            let g = |t: f64| -> Result<f64> { Ok(SphericalTriangle::from_sas(a, b, t)?.invariants().area) };
            (area_partials(&tri, Wrt::C)?, (g(c + h)? - g(c - h)?) / (2.0 * h))
        }
        FdTarget::AreaWrtX => {
            let x = 1.0 + tri.cos_c;
            let g = |x: f64| -> Result<f64> {
                Ok(SphericalTriangle::from_cosines(tri.cos_a, tri.cos_b, x - 1.0)?.invariants().area)
            };
            (area_partials(&tri, Wrt::X)?, (g(x + h)? - g(x - h)?) / (2.0 * h))
        }
    };
    let rel = (fd - exact).abs() / exact.abs().max(1e-300);
    let ok = rel <= 1e-6 || (fd - exact).abs() <= 1e-9;
    Ok(SweepReport::new(
        format!("fd {target:?}"),
        1,
        rel,
        1e-6,
        usize::from(!ok),
        0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curve {
    StarExtremal,
    F1,
    F2,
    F3,
    F4,
    LuneRho,
    SigmaRho,
    SigmaTildeRho,
    TightExtension,
    SmallStar,
}

impl Curve {
    pub const ALL: [Curve; 10] = [
        Curve::StarExtremal,
        Curve::F1,
        Curve::F2,
        Curve::F3,
        Curve::F4,
        Curve::LuneRho,
        Curve::SigmaRho,
        Curve::SigmaTildeRho,
        Curve::TightExtension,
        Curve::SmallStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Curve::StarExtremal => "star-extremal",
            Curve::F1 => "f1",
            Curve::F2 => "f2",
            Curve::F3 => "f3",
            Curve::F4 => "f4",
            Curve::LuneRho => "lune-rho",
            Curve::SigmaRho => "sigma-rho",
            Curve::SigmaTildeRho => "sigma-tilde-rho",
            Curve::TightExtension => "tight-extension",
            Curve::SmallStar => "smallstar",
        }
    }

    pub fn parse(s: &str) -> Option<Curve> {
        Curve::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Natural parameter range.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Curve::StarExtremal => (min_star_area(), max_star_area()),
            Curve::F1 | Curve::F2 | Curve::F3 | Curve::F4 => (0.60, 0.92),
            Curve::LuneRho | Curve::TightExtension => (ALPHA0, GAMMA),
            Curve::SigmaRho => Branch::Sigma.theta_range(),
            Curve::SigmaTildeRho => Branch::SigmaTilde.theta_range(),
            // slice lambda1 = alpha0 over theta
            Curve::SmallStar => (0.0, 3.0 * ALPHA0 - PI),
        }
    }

    pub fn eval(self, x: f64) -> Result<f64> {
        match self {
            Curve::StarExtremal => Ok(extremal_star(x)?.rho_tilde),
            Curve::F1 => Ok(four_curves(x)?.f1),
            Curve::F2 => Ok(four_curves(x)?.f2),
            Curve::F3 => Ok(four_curves(x)?.f3),
            Curve::F4 => Ok(four_curves(x)?.f4),
            Curve::LuneRho => lune_rho(x),
            Curve::SigmaRho => Ok(sigma_theta(x)?.rho),
            Curve::SigmaTildeRho => Ok(sigma_tilde(x)?.inv.rho),
            Curve::TightExtension => Ok(st5o_tight_extension(x)?.ext.rho_bar),
            Curve::SmallStar => Ok(smallstar_config(x, ALPHA0)?.rho_bar),
        }
    }
}

/// Rows (x, curve(x)) for x = lo, lo + step, ... <= hi.
pub fn tabulate(curve: Curve, range: (f64, f64), step: f64) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = range;
    check_range(step, f64::MIN_POSITIVE, f64::INFINITY, 0.0)?;
    if lo > hi {
        return Ok(Vec::new());
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|i| {
            let x = (lo + step * i as f64).min(hi);
            Ok((x, curve.eval(x)?))
        })
        .collect()
}

/// Fixed-point decimal with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.11}", 0.0);
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit
    let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
    let lead_zeros = s
        .trim_start_matches('-')
        .chars()
        .take_while(|&c| c == '0' || c == '.')
        .filter(|&c| c == '0')
        .count();
    if digits - lead_zeros > 12 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}
