use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use spd_core::extremal::*;
use spd_core::trig::max_area_two_sides;

#[test]
fn constants() {
    let c = Constants::get();
    assert_abs_diff_eq!(c.gamma, SQ_MIN, epsilon = 1e-12);
    assert_abs_diff_eq!(8.0 * TRI_MIN + 6.0 * SQ_MIN, 4.0 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(TRI_MIN, 0.551_285_598_1, epsilon = 1e-9);
}

#[test]
fn sigma_endpoints() {
    let e = sigma_theta(ALPHA0).unwrap();
    assert_abs_diff_eq!(e.rho, 0.7796356, epsilon = 1e-7);
    assert_abs_diff_eq!(e.weight.unwrap(), 2f64.sqrt() / 6.0, epsilon = 1e-14);
    let g = sigma_theta(GAMMA).unwrap();
    assert_abs_diff_eq!(g.rho, 0.750_350_316, epsilon = 1e-8);
    assert_abs_diff_eq!(g.weight.unwrap(), 0.257_559_362, epsilon = 1e-8);
    let top = sigma_theta(PI - ALPHA0).unwrap();
    assert_abs_diff_eq!(top.area, max_area_two_sides(PI / 3.0, PI / 3.0).unwrap(), epsilon = 1e-13);
    assert!(sigma_theta(ALPHA0 - 0.01).is_err());
    assert!(sigma_theta(PI - ALPHA0 + 0.01).is_err());
}

#[test]
fn sigma_tilde_values() {
    let g = sigma_tilde(GAMMA).unwrap();
    assert_abs_diff_eq!(g.inv.rho, 0.695_876_979, epsilon = 1e-8);
    assert_abs_diff_eq!(g.w_net, 0.369_536_594, epsilon = 2e-9);
    assert_abs_diff_eq!(g.inv.w.unwrap(), 0.370_979_998_818, epsilon = 1e-11);
    assert_abs_diff_eq!(g.tip_volume, 0.001_443_404_985, epsilon = 1e-11);
    let a = sigma_tilde(ALPHA0).unwrap();
    assert_abs_diff_eq!(a.inv.rho, 0.720_902_9, epsilon = 1e-7);
    assert_abs_diff_eq!(a.w_net, 8f64.sqrt() / 9.0, epsilon = 1e-13);
    assert!(sigma_tilde(FRAC_PI_2 + 0.01).is_err());
}

#[test]
fn tip_and_volume_closed_forms() {
    for i in 0..=20 {
        let t = ALPHA0 + (FRAC_PI_2 - ALPHA0) * i as f64 / 20.0;
        let s = sigma_tilde(t).unwrap();
        assert_abs_diff_eq!(s.tip_volume, sigma_tilde_tip_closed(t), epsilon = 1e-12);
        assert_abs_diff_eq!(s.inv.w.unwrap(), sigma_tilde_vol_closed(t), epsilon = 1e-12);
    }
}

#[test]
fn lune_identity() {
    for i in 0..=50 {
        let t = ALPHA0 + (FRAC_PI_2 - ALPHA0) * i as f64 / 50.0;
        let s = sigma_theta(t).unwrap().area + sigma_tilde(t).unwrap().inv.area;
        assert_abs_diff_eq!(s, t, epsilon = 1e-12);
    }
}

#[test]
fn area_to_theta_examples() {
    assert_abs_diff_eq!(area_to_theta(TRI_MIN, Branch::Sigma).unwrap(), ALPHA0, epsilon = 1e-9);
    assert_abs_diff_eq!(area_to_theta(half_square(), Branch::SigmaTilde).unwrap(), ALPHA0, epsilon = 1e-9);
    let t = area_to_theta(0.60, Branch::Sigma).unwrap();
    assert_abs_diff_eq!(sigma_theta(t).unwrap().area, 0.60, epsilon = 1e-13);
    assert!(area_to_theta(0.3, Branch::Sigma).is_err());
}

#[test]
fn envelope_peak_and_branches() {
    let peak = f1(half_square()).unwrap();
    assert_abs_diff_eq!(peak, (3.0 * PI - 6.0 * ALPHA0) / 8f64.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(f1(TRI_MIN).unwrap(), 0.7796356, epsilon = 1e-7);
    assert_abs_diff_eq!(w_hat(TRI_MIN).unwrap(), 2f64.sqrt() / 6.0, epsilon = 1e-12);
    let a = sigma_tilde(1.4).unwrap();
    assert_abs_diff_eq!(f1(a.inv.area).unwrap(), a.inv.rho, epsilon = 1e-12);
    assert_abs_diff_eq!(w_hat(a.inv.area).unwrap(), a.w_net, epsilon = 1e-12);
    assert!(f1(0.95).is_err());
}
