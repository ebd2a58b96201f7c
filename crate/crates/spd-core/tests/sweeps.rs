use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use spd_core::clusters::{minimal_star, st5_circle, st5_pair};
use spd_core::extremal::{half_square, SQ_MIN};
use spd_core::sweeps::*;
use spd_core::{Error, ALPHA0, GAMMA, RHO_STAR};

#[test]
fn star_area_range() {
    assert_abs_diff_eq!(min_star_area(), minimal_star().area, epsilon = 1e-12);
    assert_abs_diff_eq!(max_star_area(), st5_pair(ALPHA0, GAMMA).unwrap().area, epsilon = 1e-12);
    assert!(matches!(extremal_star(2.0), Err(Error::InfeasibleArea(_))));
    assert!(matches!(extremal_star(3.5), Err(Error::InfeasibleArea(_))));
}

#[test]
fn extremal_star_branches() {
    let p = extremal_star(PI).unwrap();
    assert_abs_diff_eq!(p.rho_tilde, RHO_STAR, epsilon = 1e-9);
    let left = extremal_star(PI - 0.1).unwrap();
    assert_abs_diff_eq!(left.area, PI - 0.1, epsilon = 1e-10);
    assert_abs_diff_eq!(left.r[1], std::f64::consts::FRAC_PI_3, epsilon = 1e-12);
    assert!((left.r[0] - st5_circle(ALPHA0).unwrap().r[0]).abs() > 0.0);
    let right = extremal_star(PI + 0.1).unwrap();
    assert_abs_diff_eq!(right.area, PI + 0.1, epsilon = 1e-10);
    assert!(right.rho_tilde < RHO_STAR && left.rho_tilde > RHO_STAR);
}

#[test]
fn sampled_stars_are_valid_and_deterministic() {
    for i in 0..50 {
        let Some(s) = sample_star(PI + 0.1, 9, i) else { continue };
        assert_abs_diff_eq!(s.area, PI + 0.1, epsilon = 1e-9);
        assert_abs_diff_eq!(s.theta.iter().sum::<f64>(), 2.0 * PI, epsilon = 1e-10);
        assert!(s.r.iter().chain(&s.b).all(|&x| x >= PI / 3.0 - 1e-10));
        let again = sample_star(PI + 0.1, 9, i).unwrap();
        assert_eq!(s.r, again.r);
        assert_eq!(s.theta, again.theta);
    }
}

#[test]
fn star_extremal_sweep_modes_agree() {
    for area in [PI - 0.1, PI, PI + 0.1] {
        let a = verify_star_extremal_with(area, 100, 5, ExecMode::Sequential).unwrap();
        let b = verify_star_extremal_with(area, 100, 5, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.pass, "{a:?}");
        assert!(a.samples > 50);
        assert_eq!(verify_star_extremal(area, 100, 5).unwrap(), a);
    }
}

#[test]
fn convexity() {
    for c in [ConvexCurve::LuneRho, ConvexCurve::SigmaBranch, ConvexCurve::SigmaTildeBranch] {
        let r = convexity_scan(c, 200).unwrap();
        assert!(r.pass, "{r:?}");
    }
    assert!(convexity_scan(ConvexCurve::LuneRho, 3).is_err());
}

#[test]
fn monotone_scans() {
    for area in [0.80, half_square()] {
        let r = monotone_delta_scan(area, 50).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn quad_fit() {
    let f = quad_deficit_fit();
    assert!((0.700..=0.715).contains(&f.coefficient));
    assert_abs_diff_eq!(f.coefficient, 0.5f64.sqrt(), epsilon = 1e-4);
    assert_abs_diff_eq!(rhombus_area(0.0), SQ_MIN, epsilon = 1e-15);
    assert!(f.max_residual < 1e-9);
}

#[test]
fn sublemma() {
    for s in [st5_pair(ALPHA0, ALPHA0).unwrap(), st5_pair(ALPHA0, 1.4).unwrap(), minimal_star()] {
        for v in correlation_summands(&s).unwrap() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }
    let a = sublemma_scan_with(200, 3, ExecMode::Sequential);
    let b = sublemma_scan_with(200, 3, ExecMode::Parallel);
    assert_eq!(a, b);
    assert_eq!(sublemma_scan(200, 3), a);
    assert!(a.samples > 0);
}

#[test]
fn finite_differences() {
    for p in [[1.1, 1.2, 1.3], [1.05, 1.4, 0.9], [1.3, 1.3, 1.9]] {
        for t in [FdTarget::AreaWrtC, FdTarget::AreaWrtX] {
            assert!(fd_check(t, p, 1e-5).unwrap().pass);
        }
    }
    // Richardson: the coarse step already agrees to O(h^2)
    let coarse = fd_check(FdTarget::AreaWrtC, [1.1, 1.2, 1.3], 1e-3).unwrap();
    let fine = fd_check(FdTarget::AreaWrtC, [1.1, 1.2, 1.3], 1e-6).unwrap();
    assert!(coarse.worst_case < 1e-5 && fine.worst_case < 1e-6);
}

#[test]
fn tabulation() {
    assert!(tabulate(Curve::LuneRho, (1.3, 1.2), 0.01).unwrap().is_empty());
    let (lo, hi) = Curve::StarExtremal.domain();
    let rows = tabulate(Curve::StarExtremal, (lo, hi), 0.01).unwrap();
    assert!(rows.last().unwrap().0 <= hi && hi - rows.last().unwrap().0 < 0.01);
    let end = tabulate(Curve::StarExtremal, (hi, hi), 0.01).unwrap();
    let last = &end[0];
    assert_abs_diff_eq!(last.0, PI + 0.21672, epsilon = 2e-5);
    assert_abs_diff_eq!(last.1, st5_pair(ALPHA0, GAMMA).unwrap().rho_tilde, epsilon = 1e-9);
    let at_pi = tabulate(Curve::StarExtremal, (PI, PI), 0.1).unwrap();
    assert_eq!(at_pi.len(), 1);
    assert_abs_diff_eq!(at_pi[0].1, RHO_STAR, epsilon = 1e-9);
    let f = tabulate(Curve::F4, (0.60, 0.92), 0.04).unwrap();
    assert_eq!(f.len(), 9);
    for c in Curve::ALL {
        assert_eq!(Curve::parse(c.name()), Some(c));
        let (lo, hi) = c.domain();
        assert!(c.eval(lo).is_ok() && c.eval(hi).is_ok(), "{}", c.name());
    }
    assert_eq!(Curve::parse("nope"), None);
    assert!(tabulate(Curve::F1, (0.6, 0.7), 0.0).is_err());
}

#[test]
fn significant_digits() {
    assert_eq!(fmt_sig(RHO_STAR), "0.740480489693");
    assert_eq!(fmt_sig(PI), "3.14159265359");
    assert_eq!(fmt_sig(0.0), "0.00000000000");
    assert_eq!(fmt_sig(-12.5), "-12.5000000000");
}
