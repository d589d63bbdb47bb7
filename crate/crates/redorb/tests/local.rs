use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use redorb::exactmath::{Integers, MonicPoly};
use redorb::local::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn poly(c: &[i64]) -> MonicPoly<Integers> {
    MonicPoly::new(Integers, c.iter().map(|x| BigInt::from(*x)).collect()).unwrap()
}

#[test]
fn cubic_full_integral() {
    let v = local_lambda_integral(3, 3, &FamilySpec::full(3), 0).unwrap().value;
    assert_eq!(v, rat(3, 4));
}

#[test]
fn euler_identity_small_primes() {
    for n in 3..=9 {
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            let (l, r, eq) = euler_factor_identity(n, p);
            assert!(eq, "n = {n}, p = {p}: {l} vs {r}");
        }
    }
}

#[test]
fn level_route_matches_closed_form() {
    // The residue-sum route with a trivial level-1 condition reproduces the closed form.
    for (n, p) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let pred = LevelPredicate { j: 1, test: Box::new(|_| true) };
        let a = lambda_integral_level(n, p, &pred).unwrap();
        let b = local_lambda_integral(n, p, &FamilySpec::full(n), 0).unwrap().value;
        assert_eq!(a, b, "n = {n}, p = {p}");
        let pred2 = LevelPredicate { j: 2, test: Box::new(|_| true) };
        if n == 3 {
            assert_eq!(lambda_integral_level(n, p, &pred2).unwrap(), b);
        }
    }
}

#[test]
fn two_routes_agree_on_full_family() {
    for (n, p) in [(3, 2), (3, 3), (3, 5), (4, 2), (4, 3), (5, 2), (5, 3), (6, 2), (6, 3), (7, 2)] {
        let (a, b) = big_family_consistency(n, p, &FamilySpec::full(n), 2).unwrap();
        assert_eq!(a, b, "n = {n}, p = {p}");
    }
}

#[test]
fn two_routes_agree_on_congruence_families() {
    let fams = [
        FamilySpec::full(3).with(2, Condition::UnitLambda),
        FamilySpec::full(3).with(3, Condition::InvIn { j: 1, residues: vec![vec![0, 0, 0]] }),
        FamilySpec::full(3).with(2, Condition::InvIn { j: 1, residues: vec![vec![1, 1, 1], vec![0, 1, 1]] }),
        FamilySpec::full(4).with(3, Condition::InvIn { j: 1, residues: vec![vec![0, 1, 0, 1], vec![0, 2, 0, 2]] }),
        FamilySpec::full(4).with(2, Condition::UnitLambda),
    ];
    for fam in &fams {
        fam.validate().unwrap();
        let p = fam.primes()[0];
        let (a, b) = big_family_consistency(fam.n, p, fam, 2).unwrap();
        assert_eq!(a, b, "{fam:?}");
    }
}

#[test]
fn residue_family_needs_invariance() {
    let bad = FamilySpec::full(3).with(3, Condition::Residues { j: 1, points: vec![vec![1, 0, 0, 0]] });
    assert!(bad.validate().is_err());
}

#[test]
fn cubic_fast_path_matches_search_and_union_find() {
    let cases: &[[i64; 3]] = &[[0, 0, 8], [0, -3, 2], [1, 0, 4], [0, 9, 0], [3, 3, 9], [0, 0, 27], [2, 2, 2], [0, 4, 4]];
    for c in cases {
        for p in [2u64, 3] {
            let f = poly(c);
            let disc = f.disc();
            if disc == BigInt::from(0) {
                continue;
            }
            let fast = orbit_count_n3([c[0] as i128, c[1] as i128, c[2] as i128], p);
            let coeffs: Vec<BigInt> = c.iter().map(|x| BigInt::from(*x)).collect();
            let dfs = orbit_count_dfs(&coeffs, p, &|_| true, &mut |_| true).unwrap();
            assert_eq!(fast, dfs, "{c:?} at {p}");
            let unit = orbit_count_n3_unit_lambda([c[0] as i128, c[1] as i128, c[2] as i128], p);
            let unit_dfs = orbit_count_dfs(&coeffs, p, &|e| e[0] == 0, &mut |_| true).unwrap();
            assert_eq!(unit, unit_dfs, "{c:?} at {p}, unit lambda");
            let v = redorb::exactmath::padic_val_int(&disc, p).finite().unwrap() as u32;
            let k = v.div_ceil(2) + 2;
            if (p as u128).pow(4 * k) < 5_000_000 {
                let uf = orbit_count_union_find(c, p, k, 3).unwrap();
                assert_eq!(uf, orbit_count_union_find(c, p, k, 4).unwrap(), "lift depth not stable");
                assert_eq!(fast, uf, "{c:?} at {p} (union-find mod {p}^{k})");
            }
        }
    }
}

#[test]
fn quartic_search_matches_union_find() {
    // (f, p, k, extra): the lifted-point count is stable from extra = 2 on.
    let cases: [([i64; 4], u64, u32, u32); 5] = [
        ([0, 2, 0, 3], 2, 2, 2),
        ([2, 1, 2, 3], 2, 2, 2),
        ([0, 3, 0, 3], 3, 1, 2),
        ([2, 1, 0, 3], 3, 1, 2),
        ([0, 0, 3, 3], 3, 1, 2),
    ];
    for (c, p, k, e) in cases {
        let coeffs: Vec<BigInt> = c.iter().map(|x| BigInt::from(*x)).collect();
        let dfs = orbit_count_dfs(&coeffs, p, &|_| true, &mut |_| true).unwrap();
        let uf = orbit_count_union_find(&c, p, k, e).unwrap();
        assert_eq!(uf, orbit_count_union_find(&c, p, k, e + 1).unwrap(), "{c:?} unstable");
        assert!(dfs > 1);
        assert_eq!(dfs, uf, "{c:?} at {p}");
    }
}

#[test]
fn unramified_invariant_has_one_orbit() {
    assert_eq!(orbit_count_local(&poly(&[0, 1, 1]), 5).unwrap(), 1);
    assert_eq!(orbit_count_local(&poly(&[0, 2, 0, 3]), 7).unwrap(), 1);
}

#[test]
fn odd_coefficient_parity_rejected() {
    assert!(orbit_count_local(&poly(&[1, 0, 0, 1]), 3).is_err());
}

#[test]
fn jacobian_odd_primes() {
    for p in [3u64, 5] {
        let r = jacobian_verify(3, p, 1).unwrap();
        assert_eq!(r.measured, BigRational::one(), "{r:?}");
        assert_eq!(r.orbits, 1);
    }
}

#[test]
fn jacobian_at_two() {
    let r = jacobian_verify(3, 2, 3).unwrap();
    assert_eq!(r.measured, r.expected, "{r:?}");
    assert_eq!(r.orbits, 2);
    let r = jacobian_verify(4, 2, 2).unwrap();
    assert_eq!(r.expected, rat(4, 1));
    assert_eq!(r.measured, r.expected, "{r:?}");
}

#[test]
fn euler_product_encloses_zeta_two() {
    let e = euler_product(3, &Default::default(), 1000, TailModel::Sieved { up_to: 1_000_000 });
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!(e.contains(z2), "{e}");
    assert!(e.width() < 1e-5);
    let crude = euler_product(3, &Default::default(), 1000, TailModel::Crude);
    assert!(crude.contains(z2));
}

#[test]
fn family_json_round_trip() {
    let fam = FamilySpec::full(3).with(2, Condition::UnitLambda).with(3, Condition::InvIn { j: 1, residues: vec![vec![0, 0, 0]] });
    let s = serde_json::to_string(&fam).unwrap();
    assert!(s.contains("unit-lambda") && s.contains("inv-in"));
    let back: FamilySpec = serde_json::from_str(&s).unwrap();
    assert_eq!(back, fam);
}
