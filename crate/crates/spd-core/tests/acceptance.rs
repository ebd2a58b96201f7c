//! One line per acceptance criterion. Run with `--nocapture` to see them.

use std::collections::BTreeMap;

use spd_core::verify::{full_suite, SuiteOptions, VerificationReport};

const CRITERIA: [&str; 14] = [
    "HCP dual-cell example",
    "rho_bar(fcc) = rho_bar(hcp) = pi/sqrt18",
    "five_square lopsided configuration",
    "extremal-family constants",
    "8 tri + 6 sq = 4 pi, gamma = sq",
    "small-star bound and lambda0",
    "extremal star areas",
    "star peak at (pi, pi/sqrt18)",
    "level-domain corners",
    "property suites",
    "extremal-star sampling",
    "boundary prism",
    "quad deficit coefficient",
    "weighted slope m_hat < -m_check",
];

fn seed() -> u64 {
    std::env::var("SPD_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(42)
}

#[test]
fn acceptance() {
    let reports = full_suite(SuiteOptions::full(seed()));
    let mut by: BTreeMap<u8, Vec<&VerificationReport>> = BTreeMap::new();
    for r in &reports {
        by.entry(r.criterion).or_default().push(r);
    }
    let mut failed = Vec::new();
    for (i, title) in CRITERIA.iter().enumerate() {
        let n = i as u8 + 1;
        let rs = by.get(&n).cloned().unwrap_or_default();
        let ok = !rs.is_empty() && rs.iter().all(|r| r.pass);
        println!("criterion {n:>2} {}: {title}", if ok { "PASS" } else { "FAIL" });
        for r in rs {
            println!(
                "    {} {}: value {:.12} expected {:.12} tol {:e}",
                if r.pass { "ok  " } else { "FAIL" },
                r.name,
                r.value,
                r.expected,
                r.tol
            );
        }
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
