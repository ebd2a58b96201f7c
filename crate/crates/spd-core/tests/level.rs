use std::f64::consts::FRAC_PI_3;

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spd_core::extremal::{half_square, sigma_tilde, ALPHA0, GAMMA, TRI_MIN};
use spd_core::level::*;
use spd_core::trig::SphericalTriangle;

#[test]
fn domain_corners() {
    let d = level_domain(half_square()).unwrap();
    assert_abs_diff_eq!(d.k0, 2.41, epsilon = 0.01);
    assert_abs_diff_eq!(d.k1, 2.53, epsilon = 0.01);
    assert_abs_diff_eq!(d.delta1, 0.27, epsilon = 0.01);
    assert!(d.k_hat.is_none());
    let d = level_domain(0.80).unwrap();
    assert_abs_diff_eq!(d.k0, 2.03, epsilon = 0.01);
    assert_abs_diff_eq!(d.k1, 2.20, epsilon = 0.01);
    assert_abs_diff_eq!(d.delta1, 0.46, epsilon = 0.01);
    assert_abs_diff_eq!(d.k_hat.unwrap(), 2.57, epsilon = 0.01);
    assert_abs_diff_eq!(d.delta_hat.unwrap(), 0.25, epsilon = 0.01);
    assert!(d.k0 <= d.k1 && d.k1 <= d.k_max);
    assert!(level_domain(0.98).is_err());
    assert!(level_domain(0.5).is_err());
}

#[test]
fn triangle_from_examples() {
    let t = triangle_from(TRI_MIN, 3.0, 0.0).unwrap();
    for s in t.sides() {
        assert_abs_diff_eq!(s, FRAC_PI_3, epsilon = 1e-7);
    }
    // the (k_hat, delta_hat) corner just above half a square is a sigma-tilde
    let st = sigma_tilde(1.25).unwrap();
    let d = level_domain(st.inv.area).unwrap();
    let (k, delta) = d.top_corner();
    let inv = triangle_from(st.inv.area, k, delta).unwrap().invariants();
    assert_abs_diff_eq!(inv.rho, st.inv.rho, epsilon = 1e-9);
    // (k0, 0) is equilateral; the isosceles with base 2R sits at (k_hat, 0)
    let d = level_domain(0.80).unwrap();
    let s = triangle_from(0.80, d.k0, 0.0).unwrap().sides();
    assert_abs_diff_eq!(s[0], s[2], epsilon = 1e-12);
    let t = triangle_from(0.80, d.k_hat.unwrap(), 0.0).unwrap();
    let c = t.sides().into_iter().fold(0.0, f64::max);
    assert_abs_diff_eq!(c, 2.0 * t.invariants().circumradius(), epsilon = 1e-9);
}

#[test]
fn rho_surface_examples() {
    assert_abs_diff_eq!(rho_surface(TRI_MIN, 3.0, 0.0).unwrap(), 0.7796356, epsilon = 1e-7);
    let st = sigma_tilde(GAMMA).unwrap();
    let d = level_domain(st.inv.area).unwrap();
    let (k, delta) = d.top_corner();
    assert_abs_diff_eq!(rho_surface(st.inv.area, k, delta).unwrap(), 0.695876979, epsilon = 1e-8);
    let d = level_domain(0.80).unwrap();
    assert_abs_diff_eq!(
        rho_surface(0.80, d.k1, d.delta1).unwrap(),
        rho_slant(0.80, d.k1).unwrap(),
        epsilon = 1e-10
    );
    assert!(rho_surface(0.80, 1.0, 0.0).is_err());
}

#[test]
fn slant_matches_surface() {
    for area in [0.62, 0.7, 0.8, 0.9] {
        let d = level_domain(area).unwrap();
        for i in 0..=10 {
            let k = d.k1 + (d.k_max - d.k1) * i as f64 / 10.0;
            let delta = (3f64.sqrt() - k / 3f64.sqrt()).max(0.0);
            assert_abs_diff_eq!(
                rho_slant(area, k).unwrap(),
                rho_surface(area, k, delta).unwrap(),
                epsilon = 1e-10
            );
        }
    }
}

#[test]
fn curved_edge_matches_surface() {
    for area in [0.6, 0.7, 0.8, 0.9] {
        let d = level_domain(area).unwrap();
        let s0 = rho_delta_star(area, d.k0).unwrap();
        assert_abs_diff_eq!(s0.delta_star, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s0.rho, rho_surface(area, d.k0, 0.0).unwrap(), epsilon = 1e-9);
        let k = 0.5 * (d.k0 + d.k1);
        let s = rho_delta_star(area, k).unwrap();
        let (t, [_, _, c]) = triangle_from_sas(area, k, s.delta_star).unwrap();
        assert_abs_diff_eq!(s.rho, t.invariants().rho, epsilon = 1e-9);
        // isosceles: the two longer sides agree
        let mut sides = t.sides();
        sides.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(sides[1], sides[2], epsilon = 1e-9);
        assert!(c > 0.0);
        if d.k1 < d.k_max {
            let s1 = rho_delta_star(area, d.k1).unwrap();
            assert_abs_diff_eq!(s1.rho, rho_slant(area, d.k1).unwrap(), epsilon = 1e-9);
        }
    }
}

#[test]
fn four_curves_at_half_square() {
    let f = four_curves(half_square()).unwrap();
    assert_abs_diff_eq!(f.f1, 0.7209029, epsilon = 1e-7);
    assert!(f.f4 <= f.f3 && f.f4 <= f.f2);
    for i in 0..=20 {
        let a = TRI_MIN + 0.001 + (0.97 - TRI_MIN - 0.001) * i as f64 / 20.0;
        let f = four_curves(a).unwrap();
        assert!(f.f4 <= f.f3 + 1e-12 && f.f4 <= f.f2 + 1e-12, "area {a}");
    }
}

#[test]
fn area_preserved_across_delta() {
    for area in [0.6, 0.75, 0.9] {
        let d = level_domain(area).unwrap();
        for i in 0..=8 {
            let k = d.k0 + (d.k_max - d.k0) * i as f64 / 8.0;
            let top = d.delta_max(k).unwrap();
            for j in 0..=8 {
                let t = triangle_from(area, k, top * j as f64 / 8.0).unwrap();
                assert_abs_diff_eq!(t.invariants().area, area, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn delta_exact_undeformed_and_direct() {
    let k = 2.5;
    let c = included_angle(0.80, k).unwrap();
    let a = ((k - 1.0) / (k + 1.0)).acos();
    let iso = SphericalTriangle::from_sas(a, a, c).unwrap().invariants();
    let ex = delta_exact(k, c, 0.0).unwrap();
    assert_abs_diff_eq!(ex.rho, iso.rho, epsilon = 1e-12);
    assert_abs_diff_eq!(ex.tan_r, iso.tan_r, epsilon = 1e-12);

    let eta: f64 = 0.005;
    let delta = eta.sqrt() * (k + 1.0);
    let (tri, _) = triangle_from_sas(0.80, k, delta).unwrap();
    let inv = tri.invariants();
    let ex = delta_exact(k, c, eta).unwrap();
    assert_abs_diff_eq!(ex.area, inv.area, epsilon = 1e-11);
    assert_abs_diff_eq!(ex.det, inv.det, epsilon = 1e-11);
    assert_abs_diff_eq!(ex.u, inv.u, epsilon = 1e-11);
    assert_abs_diff_eq!(ex.tan_r, inv.tan_r, epsilon = 1e-11);
    assert_abs_diff_eq!(ex.d[2], inv.d[2], epsilon = 1e-11);
    assert_abs_diff_eq!(ex.rho, inv.rho, epsilon = 1e-11);
    assert!(delta_exact(k, c, -0.1).is_err());
}

#[test]
fn delta_exact_seeded_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut n = 0;
    for _ in 0..1000 {
        let area = rng.random_range(TRI_MIN + 1e-3..0.95);
        let d = level_domain(area).unwrap();
        let k = rng.random_range(d.k0..d.k_max);
        let delta = rng.random_range(0.0..=d.delta_max(k).unwrap());
        let Ok((tri, [_, _, c])) = triangle_from_sas(area, k, delta) else { continue };
        let ex = delta_exact(k, c, delta * delta / ((k + 1.0) * (k + 1.0))).unwrap();
        let inv = tri.invariants();
        assert_abs_diff_eq!(ex.rho, inv.rho, epsilon = 1e-11);
        assert_abs_diff_eq!(ex.tan_r, inv.tan_r, epsilon = 1e-11);
        n += 1;
    }
    assert!(n > 900);
}

#[test]
fn lexell_examples() {
    let l = lexell(FRAC_PI_3, half_square(), 0.1).unwrap();
    let t = SphericalTriangle::from_sss(FRAC_PI_3, l.ab, l.ac).unwrap();
    assert_abs_diff_eq!(t.invariants().area, half_square(), epsilon = 1e-10);
    let end = lexell(FRAC_PI_3, half_square(), l.theta).unwrap();
    assert_abs_diff_eq!(end.ab.min(end.ac), l.b, epsilon = 1e-9);
    assert!(lexell(FRAC_PI_3, half_square(), l.theta + 0.1).is_err());
    for i in -10..=10 {
        let phi = l.theta * i as f64 / 10.5;
        let m = lexell(1.2, 0.7, phi.min(0.2)).unwrap();
        let t = SphericalTriangle::from_sss(1.2, m.ab, m.ac).unwrap();
        assert_abs_diff_eq!(t.invariants().area, 0.7, epsilon = 1e-10);
    }
    let _ = ALPHA0;
}
