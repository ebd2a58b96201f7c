use std::f64::consts::{FRAC_PI_3, PI};

use approx::assert_abs_diff_eq;
use spd_core::clusters::*;
use spd_core::{Error, ALPHA0, GAMMA, RHO_STAR};

const TAU: f64 = 2.0 * PI;

#[test]
fn lune_values() {
    assert_abs_diff_eq!(lune_rho(ALPHA0).unwrap(), 0.746_074_07, epsilon = 1e-8);
    assert_abs_diff_eq!(lune_rho(GAMMA).unwrap(), 0.7182, epsilon = 1e-3);
    assert_abs_diff_eq!(lune_rho(TAU / 5.0).unwrap(), 0.739_392_32, epsilon = 1e-8);
    assert!(lune_rho(ALPHA0 - 0.01).is_err());
}

#[test]
fn star_validation() {
    assert!(matches!(
        Star5::new([FRAC_PI_3; 5], [1.0; 5]),
        Err(Error::BadAngles(_))
    ));
    assert!(matches!(
        Star5::new([1.0, FRAC_PI_3, FRAC_PI_3, FRAC_PI_3, FRAC_PI_3], [TAU / 5.0; 5]),
        Err(Error::EdgeTooShort(_))
    ));
}

#[test]
fn peak_and_minimal_stars() {
    let p = st5_pair(ALPHA0, ALPHA0).unwrap();
    assert_abs_diff_eq!(p.area, PI, epsilon = 1e-12);
    assert_abs_diff_eq!(p.rho_tilde, RHO_STAR, epsilon = 1e-12);
    let m = minimal_star();
    assert_abs_diff_eq!(m.area, PI - 0.345, epsilon = 5e-4);
    let u = uniform_star([TAU / 5.0; 5]).unwrap();
    assert_abs_diff_eq!(u.area, 2.798_7, epsilon = 1e-4);
    assert_abs_diff_eq!(u.rho_tilde, 0.772_82, epsilon = 1e-5);
}

#[test]
fn circle_stars() {
    let a = st5_circle(ALPHA0).unwrap();
    assert_abs_diff_eq!(a.theta[2], GAMMA, epsilon = 1e-12);
    let top = st5_circle(PI - ALPHA0).unwrap();
    assert_abs_diff_eq!(top.area, PI, epsilon = 1e-10);
    assert_abs_diff_eq!(top.rho_tilde, RHO_STAR, epsilon = 1e-10);
    let mid = st5_circle(1.5).unwrap();
    assert_abs_diff_eq!(mid.area, 2.998_47, epsilon = 1e-5);
    assert_abs_diff_eq!(mid.rho_tilde, 0.746_79, epsilon = 1e-5);
    assert!(mid.area > a.area && mid.area < PI);
}

#[test]
fn pair_stars() {
    let g = st5_pair(ALPHA0, GAMMA).unwrap();
    assert_abs_diff_eq!(g.area, PI + 0.21672, epsilon = 2e-5);
    let mid = st5_pair(ALPHA0, 1.5).unwrap();
    assert_abs_diff_eq!(mid.area, 3.6028, epsilon = 1e-4);
    assert_abs_diff_eq!(mid.rho_tilde, 0.712_17, epsilon = 1e-5);
    assert!(mid.rho_tilde < RHO_STAR);
}

#[test]
fn mu_on_extremal_and_perturbed_stars() {
    for s in [st5_pair(ALPHA0, ALPHA0).unwrap(), minimal_star(), st5_pair(ALPHA0, 1.3).unwrap()] {
        assert_abs_diff_eq!(mu(&s).unwrap(), s.rho_tilde, epsilon = 1e-10);
        assert_abs_diff_eq!(correlation_residual(&s).unwrap(), 0.0, epsilon = 1e-10);
    }
    let s = Star5::new([1.10, 1.05, 1.07, 1.08, 1.06], [TAU / 5.0; 5]).unwrap();
    let m = mu(&s).unwrap();
    assert!(m > s.rho_tilde);
    let lhs = (m - s.rho_tilde) * s.w_tilde;
    assert_abs_diff_eq!(lhs, correlation_residual(&s).unwrap(), epsilon = 1e-10);
}

#[test]
fn small_star_bound_value() {
    let b = small_star_bound();
    assert_abs_diff_eq!(b, 0.103_985_39, epsilon = 1e-8);
    // bound + pi/3 is the shortest V-V edge of the minimal star's extension
    let ext = tight_extension([FRAC_PI_3; 5], [ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA]).unwrap();
    let shortest = ext.cos_b_tilde.iter().fold(-1.0f64, |m, &c| m.max(c)).acos();
    assert_abs_diff_eq!(shortest, b + FRAC_PI_3, epsilon = 1e-12);
}

#[test]
fn tight_extension_feasible_at_bound() {
    let b = small_star_bound();
    let th = [ALPHA0, ALPHA0, GAMMA, ALPHA0, ALPHA0];
    for split in [vec![0usize], vec![0, 1], vec![2, 3], vec![0, 1, 2, 3, 4]] {
        let mut r = [FRAC_PI_3; 5];
        for &p in &split {
            r[p] += b / split.len() as f64;
        }
        let ext = tight_extension(r, th).unwrap();
        assert!(ext.min_separation >= FRAC_PI_3 - 1e-9);
    }
    // the bound is sufficient, not sharp: excess 0.2 flanking gamma breaks it
    let mut r = [FRAC_PI_3; 5];
    r[0] += 0.1;
    r[2] += 0.1;
    assert!(matches!(tight_extension(r, th), Err(Error::SeparationViolation(_))));
}

#[test]
fn uniform_tight_extension() {
    let ext = tight_extension_uniform([ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA]).unwrap();
    assert_abs_diff_eq!(ext.rho_bar, 0.727_729_438_0, epsilon = 1e-9);
    assert!(matches!(
        tight_extension_uniform([1.2, 1.3, 1.25, 1.25, TAU - 5.0]),
        Err(Error::BadAngles(_))
    ));
    for th in [
        [ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA],
        [1.3, 1.25, 1.24, 1.26, TAU - 5.05],
        [TAU / 5.0; 5],
    ] {
        let ext = tight_extension_uniform(th).unwrap();
        let f = tight_extension_uniform_formulas(th);
        for i in 0..5 {
            assert_abs_diff_eq!(ext.cos_b[i], f.cos_b[i], epsilon = 1e-12);
            assert_abs_diff_eq!(ext.cos_d[i], f.d[i].cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(ext.cos_b_tilde[i], f.cos_b_tilde[i], epsilon = 1e-12);
        }
    }
}

#[test]
fn circle_star_extension_formulas() {
    for theta in [ALPHA0, 1.3, GAMMA] {
        let e = st5o_tight_extension(theta).unwrap();
        let x = &e.ext;
        assert_abs_diff_eq!(x.cos_d[1], -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x.cos_d[3], -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x.cos_d[2], e.cos_d_formula[2], epsilon = 1e-12);
        assert_abs_diff_eq!(x.cos_d[0], e.cos_d_formula[0], epsilon = 1e-12);
        assert_abs_diff_eq!(x.cos_d[4], e.cos_d_formula[0], epsilon = 1e-12);
        // the apex angle at A_{j-1} carries formula j
        assert_abs_diff_eq!(x.theta_tilde[4], e.theta_tilde_formula[0], epsilon = 1e-10);
        assert_abs_diff_eq!(x.theta_tilde[0], e.theta_tilde_formula[1], epsilon = 1e-10);
        assert_abs_diff_eq!(x.theta_tilde[3], e.theta_tilde_formula[1], epsilon = 1e-10);
        assert_abs_diff_eq!(x.theta_tilde[1], e.theta_tilde_formula[2], epsilon = 1e-10);
        assert_abs_diff_eq!(x.theta_tilde[2], e.theta_tilde_formula[2], epsilon = 1e-10);
    }
    let a = st5o_tight_extension(ALPHA0).unwrap();
    let u = tight_extension_uniform([ALPHA0, ALPHA0, ALPHA0, ALPHA0, GAMMA]).unwrap();
    assert_abs_diff_eq!(a.ext.rho_bar, u.rho_bar, epsilon = 1e-12);
    assert!(st5o_tight_extension(GAMMA + 0.01).is_err());
}

#[test]
fn small_star_family() {
    assert_abs_diff_eq!(smallstar_total_angle(0.0), 2.0 * ALPHA0, epsilon = 1e-12);
    let c = smallstar_config(0.0, ALPHA0).unwrap();
    let e = c.edges;
    assert_abs_diff_eq!(e.b0, 2.0 * ((3f64.sqrt() / 2.0) * (GAMMA / 2.0).sin()).asin(), epsilon = 1e-12);
    assert_abs_diff_eq!(c.rho_bar, 0.739_902_025_5, epsilon = 1e-9);
    assert_abs_diff_eq!(c.star_a2_area, PI + 0.216_719, epsilon = 1e-6);
    assert_abs_diff_eq!(c.star_a2_rho, 0.722_798_61, epsilon = 1e-8);
    // edge audit: all other edges of the boundary configuration are pi/3
    let marked = [(1, 2), (6, 7), (2, 6), (3, 7), (4, 8), (5, 9), (1, 10), (1, 6), (2, 7)];
    let v = &c.config.vertices;
    for f in &c.config.faces {
        for k in 0..3 {
            let (i, j) = (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]));
            if !marked.contains(&(i, j)) {
                let d = v[i].dot(&v[j]).clamp(-1.0, 1.0).acos();
                assert_abs_diff_eq!(d, FRAC_PI_3, epsilon = 1e-9);
            }
        }
    }
    for (theta, l1) in [(0.0, ALPHA0), (0.05, smallstar_total_angle(0.05) / 2.0), (3.0 * ALPHA0 - PI, ALPHA0)] {
        let c = smallstar_config(theta, l1).unwrap();
        let e = c.edges;
        let got = [e.b0, e.b_prime, e.l4, e.l3, e.l2, e.l5];
        for (g, f) in got.iter().zip(c.edge_formulas) {
            assert_abs_diff_eq!(*g, f, epsilon = 1e-9);
        }
        let a = c.angles;
        for (g, f) in [a.mu1, a.mu2, a.mu3, a.mu5].iter().zip(c.angle_formulas) {
            assert_abs_diff_eq!(*g, f, epsilon = 1e-9);
        }
    }
    assert!(smallstar_config(0.6, ALPHA0).is_err());
}

#[test]
fn weighted_slopes() {
    let hat = weighted_slope(&minimal_star()).unwrap();
    let check = weighted_slope(&st5_pair(ALPHA0, GAMMA).unwrap()).unwrap();
    assert_abs_diff_eq!(hat, 0.114_33, epsilon = 1e-5);
    assert_abs_diff_eq!(check, 0.126_19, epsilon = 1e-5);
    assert!(matches!(
        weighted_slope(&st5_pair(ALPHA0, ALPHA0).unwrap()),
        Err(Error::AreaAtPi)
    ));
}
