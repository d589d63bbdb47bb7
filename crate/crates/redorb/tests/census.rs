use redorb::census::*;
use redorb::local::{Condition, FamilySpec};

#[test]
fn tiny_boxes() {
    let e = enumerate_invariants(3, 1, None, false).unwrap();
    assert!(e.polys.is_empty());
    assert_eq!(e.degenerate, 1);
    let e = enumerate_invariants(3, 2, None, false).unwrap();
    assert_eq!(e.polys.len() as u64 + e.degenerate, 315);
    let r1 = enumerate_invariants(3, 2, Some(1), false).unwrap().polys.len();
    let r3 = enumerate_invariants(3, 2, Some(3), false).unwrap().polys.len();
    assert_eq!(r1 + r3, e.polys.len());
}

#[test]
fn quartic_parity_filter() {
    let e = enumerate_invariants(4, 2, None, true).unwrap();
    assert!(e.polys.iter().all(|f| f[0] % 2 == 0 && f[2] % 2 == 0));
    assert_eq!(e.polys.len() as u64 + e.degenerate, 7 * 7 * 31);
}

#[test]
fn global_counts() {
    let full = FamilySpec::full(3);
    // disc(x^3 + x + 1) = -31
    assert_eq!(orbit_count_global(&[0, 1, 1], &full).unwrap(), 1);
    // x^3 - 3x + 2 has a double root
    assert!(orbit_count_global(&[0, -3, 2], &full).is_err());
    // disc(x^3 + 8) = -1728 = -2^6 3^3: product of the two local counts.
    let f = redorb::exactmath::MonicPoly::from_ints(&[0, 0, 8]);
    let c2 = redorb::local::orbit_count_local(&f, 2).unwrap();
    let c3 = redorb::local::orbit_count_local(&f, 3).unwrap();
    assert_eq!(orbit_count_global(&[0, 0, 8], &full).unwrap(), c2 * c3);
    assert!(c2 > 1 && c3 > 1);
}

#[test]
fn method_two_matches_direct_enumeration() {
    for x in 2..=4 {
        let (m2, direct) = cross_check_direct(3, x).unwrap();
        assert_eq!(m2, direct, "X = {x}");
    }
}

#[test]
fn census_strata_add_up_and_families_are_monotone() {
    let mut cfg = CensusConfig::new(3, vec![3, 4]);
    cfg.samples = 100_000;
    let full = census(&cfg).unwrap();
    for x in [3u64, 4] {
        let rows: Vec<_> = full.iter().filter(|r| r.x == x).collect();
        let all = rows.iter().find(|r| r.r.is_none()).unwrap();
        let sum: u64 = rows.iter().filter(|r| r.r.is_some()).map(|r| r.empirical).sum();
        assert_eq!(all.empirical, sum);
        assert!(all.empirical >= all.polynomials);
    }
    let mut sub = cfg.clone();
    sub.family = FamilySpec::full(3).with(2, Condition::UnitLambda);
    let part = census(&sub).unwrap();
    for (a, b) in full.iter().zip(&part) {
        assert_eq!((a.x, a.r), (b.x, b.r));
        assert!(b.empirical <= a.empirical);
    }
    let again = census(&cfg).unwrap();
    for (a, b) in full.iter().zip(&again) {
        assert_eq!(a.config_hash, b.config_hash);
        assert_eq!((a.empirical, a.predicted, &a.histogram), (b.empirical, b.predicted, &b.histogram));
    }
}

#[test]
fn census_matches_direct_count_at_three() {
    let mut cfg = CensusConfig::new(3, vec![3]);
    cfg.samples = 50_000;
    let all = census(&cfg).unwrap().into_iter().find(|r| r.r.is_none()).unwrap();
    assert_eq!(all.empirical, cross_check_direct(3, 3).unwrap().1);
}

#[test]
fn quartic_census_runs() {
    let mut cfg = CensusConfig::new(4, vec![2]);
    cfg.samples = 50_000;
    let rows = census(&cfg).unwrap();
    let all = rows.iter().find(|r| r.r.is_none()).unwrap();
    assert!(all.empirical >= all.polynomials);
    assert!(all.anomalies.is_empty());
}
