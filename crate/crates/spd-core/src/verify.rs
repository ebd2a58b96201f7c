//! The acceptance checks, shared by the `acceptance` test target and `spd verify`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clusters::{
    correlation_residual, minimal_star, mu, small_star_bound, st5_circle, st5_pair, weighted_slope,
    Star5,
};
use crate::configurations::{fcc, five_square, hcp, perturb, rho_bar, Triangulation};
use crate::extremal::{
    half_square, sigma_theta, sigma_tilde, ALPHA0, GAMMA, RHO_STAR, SQ_MIN,
    TRI_MIN,
};
use crate::level::{delta_exact, level_domain, lexell, triangle_from_sas};
use crate::local_packing::{hcp_cell_example, prism_density, prism_density_triangle};
use crate::sweeps::{
    fd_check, map_indices, monotone_delta_scan, quad_deficit_fit, sample_star, verify_star_extremal_with,
    ExecMode, FdTarget,
};
use crate::trig::{quad_solve_missing, QuadGram, SphericalTriangle};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(skip)]
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(criterion: u8, name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        VerificationReport {
            criterion,
            name: name.into(),
            value,
            expected,
            tol,
            pass: (value - expected).abs() <= tol,
        }
    }

    /// Informational line, always passing.
    pub fn info(criterion: u8, name: impl Into<String>, value: f64) -> Self {
        VerificationReport {
            criterion,
            name: format!("[info] {}", name.into()),
            value,
            expected: value,
            tol: 0.0,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Stars per area in the criterion 11 campaign.
    pub star_samples: usize,
    /// Random stars in the property suites of criterion 10.
    pub property_samples: usize,
    pub mode: ExecMode,
}

impl SuiteOptions {
    pub fn full(seed: u64) -> Self {
        SuiteOptions {
            seed,
            star_samples: 100_000,
            property_samples: 10_000,
            mode: ExecMode::default(),
        }
    }
}

type Reports = Vec<VerificationReport>;

/// Criteria that need no sampling.
pub fn quick_suite() -> Reports {
    let mut out = Vec::new();
    crit1(&mut out);
    crit2(&mut out);
    crit3(&mut out);
    crit4(&mut out);
    crit5(&mut out);
    crit6(&mut out);
    crit7(&mut out);
    crit8(&mut out);
    crit9(&mut out);
    out.push(VerificationReport::new(
        12,
        "prism_density(2, {1,1,1})",
        prism_density(2.0, [1.0; 3]).unwrap_or(f64::NAN),
        PI / 27f64.sqrt(),
        1e-12,
    ));
    crit13(&mut out);
    crit14(&mut out);
    out
}

pub fn full_suite(opts: SuiteOptions) -> Reports {
    let mut out = quick_suite();
    crit10(&mut out, opts);
    crit11(&mut out, opts);
    crit12_sampled(&mut out, opts);
    out.sort_by_key(|r| r.criterion);
    out
}

fn value_or_nan<T>(r: crate::Result<T>, f: impl FnOnce(T) -> f64) -> f64 {
    r.map(f).unwrap_or(f64::NAN)
}

fn crit1(out: &mut Reports) {
    let c = hcp_cell_example();
    out.push(VerificationReport::new(1, "hcp cell rho_tet", c.rho_tet, 0.7796356, 1e-6));
    out.push(VerificationReport::new(1, "hcp cell rho_oct", c.rho_oct, 0.7209029, 1e-6));
    out.push(VerificationReport::new(1, "hcp cell weighted average", c.rho_bar, RHO_STAR, 1e-12));
}

fn crit2(out: &mut Reports) {
    let f = value_or_nan(rho_bar(&fcc()), |r| r.rho_bar);
    let h = value_or_nan(rho_bar(&hcp()), |r| r.rho_bar);
    out.push(VerificationReport::new(2, "rho_bar(fcc)", f, RHO_STAR, 1e-9));
    out.push(VerificationReport::new(2, "rho_bar(hcp)", h, RHO_STAR, 1e-9));
}

fn crit3(out: &mut Reports) {
    let theta = [ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA];
    let rep = five_square(theta, Triangulation::Icosahedral).and_then(|c| rho_bar(&c));
    let (num, den, rb) = match &rep {
        Ok(r) => (r.numerator / 2.0, r.denominator / 2.0, r.rho_bar),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN),
    };
    out.push(VerificationReport::new(3, "five_square numerator (half sum)", num, 2.09169098, 1e-6));
    out.push(VerificationReport::new(3, "five_square denominator (half sum)", den, 2.82698372, 1e-6));
    out.push(VerificationReport::new(3, "five_square rho_bar", rb, RHO_STAR - 0.000578464, 1e-7));
}

fn crit4(out: &mut Reports) {
    let s = sigma_theta(GAMMA).ok();
    let t = sigma_tilde(GAMMA).ok();
    let w = s.and_then(|s| s.weight).unwrap_or(f64::NAN);
    let rho = s.map(|s| s.rho).unwrap_or(f64::NAN);
    out.push(VerificationReport::new(4, "w(sigma_gamma)", w, 0.257559362, 1e-8));
    out.push(VerificationReport::new(4, "rho(sigma_gamma)", rho, 0.750350316, 1e-8));
    out.push(VerificationReport::new(
        4,
        "w_net(sigma~_gamma)",
        t.map(|t| t.w_net).unwrap_or(f64::NAN),
        0.369536595,
        1e-8,
    ));
    out.push(VerificationReport::new(
        4,
        "rho(sigma~_gamma)",
        t.map(|t| t.inv.rho).unwrap_or(f64::NAN),
        0.695876979,
        1e-8,
    ));
}

fn crit5(out: &mut Reports) {
    out.push(VerificationReport::new(5, "8 tri + 6 sq", 8.0 * TRI_MIN + 6.0 * SQ_MIN, 4.0 * PI, 1e-12));
    out.push(VerificationReport::new(5, "gamma - sq", GAMMA, SQ_MIN, 1e-12));
}

fn crit6(out: &mut Reports) {
    out.push(VerificationReport::new(6, "small_star_bound", small_star_bound(), 0.10398539, 1e-7));
    out.push(VerificationReport::new(6, "lambda0 = 2 pi - 5 alpha0", 2.0 * PI - 5.0 * ALPHA0, 0.12838822, 1e-7));
}

fn crit7(out: &mut Reports) {
    let big = value_or_nan(st5_pair(ALPHA0, GAMMA), |s| s.area);
    out.push(VerificationReport::new(7, "|St5(a0, gamma)|", big, PI + 0.21672, 2e-5));
    out.push(VerificationReport::new(7, "|minimal star|", minimal_star().area, PI - 0.345, 5e-4));
}

fn crit8(out: &mut Reports) {
    let a = st5_pair(ALPHA0, ALPHA0);
    let b = st5_circle(PI - ALPHA0);
    out.push(VerificationReport::new(8, "rho~(St5(a0, a0))", value_or_nan(a.clone(), |s| s.rho_tilde), RHO_STAR, 1e-9));
    out.push(VerificationReport::new(8, "|St5(a0, a0)|", value_or_nan(a, |s| s.area), PI, 1e-10));
    out.push(VerificationReport::new(8, "rho~(St5o(pi - a0))", value_or_nan(b.clone(), |s| s.rho_tilde), RHO_STAR, 1e-9));
    out.push(VerificationReport::new(8, "|St5o(pi - a0)|", value_or_nan(b, |s| s.area), PI, 1e-10));
}

fn crit9(out: &mut Reports) {
    let half = level_domain(half_square());
    let at8 = level_domain(0.80);
    let g = |r: &crate::Result<crate::level::LevelDomain>, f: fn(&crate::level::LevelDomain) -> f64| {
        r.as_ref().map(f).unwrap_or(f64::NAN)
    };
    out.push(VerificationReport::new(9, "half-square k1", g(&half, |d| d.k1), 2.53, 0.01));
    out.push(VerificationReport::new(9, "half-square delta1", g(&half, |d| d.delta1), 0.27, 0.01));
    out.push(VerificationReport::new(9, "half-square k0", g(&half, |d| d.k0), 2.41, 0.01));
    out.push(VerificationReport::new(9, "0.80 k0", g(&at8, |d| d.k0), 2.03, 0.01));
    out.push(VerificationReport::new(9, "0.80 k1", g(&at8, |d| d.k1), 2.20, 0.01));
    out.push(VerificationReport::new(9, "0.80 delta1", g(&at8, |d| d.delta1), 0.46, 0.01));
    out.push(VerificationReport::new(9, "0.80 k-hat", g(&at8, |d| d.k_hat.unwrap_or(f64::NAN)), 2.57, 0.01));
    out.push(VerificationReport::new(9, "0.80 delta-hat", g(&at8, |d| d.delta_hat.unwrap_or(f64::NAN)), 0.25, 0.01));
}

fn crit13(out: &mut Reports) {
    let fit = quad_deficit_fit();
    // [0.700, 0.715] as centre and half-width
    out.push(VerificationReport::new(13, "quad deficit coefficient in [0.700, 0.715]", fit.coefficient, 0.7075, 0.0075));
    out.push(VerificationReport::info(13, "reference coefficient", fit.reference_value));
    out.push(VerificationReport::info(13, "exact coefficient sqrt2/2", fit.exact));
}

fn crit14(out: &mut Reports) {
    let m_hat = value_or_nan(weighted_slope(&minimal_star()), |x| x);
    let m_check = value_or_nan(st5_pair(ALPHA0, GAMMA).and_then(|s| weighted_slope(&s)), |x| x);
    // the inequality m_hat < -m_check encoded as a zero-overshoot check
    out.push(VerificationReport::new(14, "m_hat < -m_check (overshoot)", (m_hat + m_check).max(0.0), 0.0, 0.0));
    out.push(VerificationReport::info(14, "m_hat", m_hat));
    out.push(VerificationReport::info(14, "m_check", m_check));
    out.push(VerificationReport::info(14, "m_hat < m_check (overshoot)", (m_hat - m_check).max(0.0)));
}

fn random_stars(opts: SuiteOptions, salt: u64) -> Vec<Star5> {
    let lo = PI - 0.34;
    let hi = PI + 0.21;
    map_indices(opts.mode, opts.property_samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt);
        rng.set_stream(i as u64);
        let area = rng.random_range(lo..hi);
        sample_star(area, opts.seed ^ salt ^ 0x5eed, i)
    })
    .into_iter()
    .flatten()
    .collect()
}

fn worst(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

fn crit10(out: &mut Reports, opts: SuiteOptions) {
    // correlation identity
    let stars = random_stars(opts, 0xC0);
    let usable: Vec<&Star5> = stars.iter().filter(|s| mu(s).is_ok()).collect();
    let mismatch = worst(usable.iter().map(|s| {
        let lhs = (mu(s).unwrap() - s.rho_tilde) * s.w_tilde;
        (lhs - correlation_residual(s).unwrap()).abs()
    }));
    out.push(VerificationReport::new(10, format!("correlation identity ({} stars)", usable.len()), mismatch, 0.0, 1e-10));

    // lune identity
    let n = 1000;
    let lune = worst((0..=n).map(|i| {
        let t = ALPHA0 + (PI / 2.0 - ALPHA0) * i as f64 / n as f64;
        let s = sigma_theta(t).map(|x| x.area).unwrap_or(f64::NAN);
        let st = sigma_tilde(t).map(|x| x.inv.area).unwrap_or(f64::NAN);
        (s + st - t).abs()
    }));
    out.push(VerificationReport::new(10, "lune identity", lune, 0.0, 1e-12));

    // star areas over built configurations
    let mut configs = vec![fcc(), hcp()];
    if let Ok(c) = five_square([ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA], Triangulation::Icosahedral) {
        configs.push(c);
    }
    if let Ok(c) = five_square([1.25, 1.25, 1.26, 1.27, 2.0 * PI - 5.03], Triangulation::Other) {
        configs.push(c);
    }
    for seed in 0..8 {
        if let Ok(c) = perturb(&fcc(), opts.seed.wrapping_add(seed), 0.02) {
            configs.push(c);
        }
    }
    let area_gap = worst(configs.iter().map(|c| {
        value_or_nan(rho_bar(c), |r| (r.stars.iter().map(|s| s.area).sum::<f64>() - 12.0 * PI).abs())
    }));
    out.push(VerificationReport::new(10, format!("sum of star areas = 12 pi ({} configs)", configs.len()), area_gap, 0.0, 1e-9));

    // level-domain scans
    for area in [half_square(), 0.80] {
        let v = value_or_nan(monotone_delta_scan(area, 50), |r| r.violations as f64);
        out.push(VerificationReport::new(10, format!("delta-monotone and (k0,0)-minimal at {area:.6}"), v, 0.0, 0.0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x1e);
    // Lexell invariance
    let mut lex = 0.0f64;
    for _ in 0..200 {
        let a = rng.random_range(1.05..1.6);
        let area = rng.random_range(0.3..0.9);
        let phi = rng.random_range(-0.5..0.5);
        let e = match lexell(a, area, phi) {
            Ok(l) => SphericalTriangle::from_sss(a, l.ab, l.ac)
                .map(|t| (t.invariants().area - area).abs())
                .unwrap_or(f64::NAN),
            Err(_) => continue,
        };
        lex = worst([lex, e]);
    }
    out.push(VerificationReport::new(10, "Lexell area invariance", lex, 0.0, 1e-10));

    // delta_exact against direct construction
    let mut dex = 0.0f64;
    for _ in 0..200 {
        let area = rng.random_range(TRI_MIN..0.9);
        let Ok(dom) = level_domain(area) else { continue };
        let k = rng.random_range(dom.k0..dom.k_max);
        let Ok(dmax) = dom.delta_max(k) else { continue };
        let delta = rng.random_range(0.0..=dmax.max(0.0));
        let Ok((tri, [_, _, c])) = triangle_from_sas(area, k, delta) else { continue };
        let eta = delta * delta / ((k + 1.0) * (k + 1.0));
        let Ok(ex) = delta_exact(k, c, eta) else { continue };
        let inv = tri.invariants();
        let e = [
            ex.area - inv.area,
            ex.det - inv.det,
            ex.u - inv.u,
            ex.tan_r - inv.tan_r,
            ex.rho - inv.rho,
        ]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
        dex = worst([dex, e]);
    }
    out.push(VerificationReport::new(10, "delta_exact vs direct construction", dex, 0.0, 1e-11));

    // quad_solve_missing round trip
    let mut qs = 0.0f64;
    for _ in 0..1000 {
        let p: Vec<_> = (0..4)
            .map(|_| {
                crate::geom::sph(rng.random_range(0.2..PI - 0.2), rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        let g = QuadGram::from_vectors(&p[0], &p[1], &p[2], &p[3]);
        if let Ok(cd) = quad_solve_missing(&g) {
            qs = worst([qs, (cd - p[2].dot(&p[3])).abs()]);
        }
    }
    out.push(VerificationReport::new(10, "quad_solve_missing round trip", qs, 0.0, 1e-10));

    // area partials
    let mut fd = 0.0f64;
    for _ in 0..500 {
        let a = rng.random_range(0.3..2.0);
        let b = rng.random_range(0.3..2.0);
        let c = rng.random_range(0.3..2.6);
        for t in [FdTarget::AreaWrtC, FdTarget::AreaWrtX] {
            if let Ok(r) = fd_check(t, [a, b, c], 1e-5) {
                fd = worst([fd, if r.pass { 0.0 } else { r.worst_case }]);
            }
        }
    }
    out.push(VerificationReport::new(10, "area_partials vs finite differences (failing rel. error)", fd, 0.0, 0.0));
}

pub const SAMPLING_OFFSETS: [f64; 5] = [-0.2, -0.04, 0.0, 0.1, 0.21];

fn crit11(out: &mut Reports, opts: SuiteOptions) {
    for (k, off) in SAMPLING_OFFSETS.iter().enumerate() {
        let area = PI + off;
        let rep = verify_star_extremal_with(area, opts.star_samples, opts.seed.wrapping_add(k as u64), opts.mode);
        match rep {
            Ok(r) => {
                out.push(VerificationReport::new(
                    11,
                    format!("extremal-star sampling at pi{off:+} ({} stars, worst {:+.3e})", r.samples, r.worst_case),
                    r.violations as f64,
                    0.0,
                    0.0,
                ));
            }
            Err(_) => out.push(VerificationReport::new(11, format!("extremal-star sampling at pi{off:+}"), f64::NAN, 0.0, 0.0)),
        }
    }
}

fn crit12_sampled(out: &mut Reports, opts: SuiteOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x12);
    let cap = PI / 27f64.sqrt();
    let mut bad = 0usize;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let sides = [0; 3].map(|_| rng.random_range(2.0..2.6));
        let heights = [0; 3].map(|_| 1.0 + rng.random_range(0.0..0.6));
        match prism_density_triangle(sides, heights) {
            Ok(d) => {
                worst_excess = worst_excess.max(d - cap);
                if d > cap + 1e-9 {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    out.push(VerificationReport::new(
        12,
        format!("perturbed prisms above pi/sqrt27 (worst excess {worst_excess:+.3e})"),
        bad as f64,
        0.0,
        0.0,
    ));
}
