use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use redorb::exactmath::{Integers, MonicPoly, Rationals, Ring, ZMod};
use redorb::group::{act_w0, random_p, random_p_with};
use redorb::reduction::*;
use redorb::rep::{inv, sigma0, w0_positions, ReducibleMatrix};
use redorb::Error;

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=5).into())
}

fn all_polys(ring: ZMod, n: usize) -> Vec<MonicPoly<ZMod>> {
    let m = ring.modulus();
    (0..m.pow(n as u32))
        .map(|mut k| {
            let c = (0..n)
                .map(|_| {
                    let x = k % m;
                    k /= m;
                    x
                })
                .collect();
            MonicPoly::new(ring, c).unwrap()
        })
        .collect()
}

#[test]
fn section_reduces_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 3..7 {
        let f = MonicPoly::new(Rationals, (0..n).map(|_| rand_rational(&mut rng)).collect()).unwrap();
        let b = sigma0(&f).unwrap();
        let r = reduce_over_field(&b).unwrap();
        assert!(r.g.is_identity());
        assert_eq!(r.target, b);
        assert!(r.mod2_pattern.is_none());
    }
}

#[test]
fn round_trip_over_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 3..=6 {
        for _ in 0..40 {
            let f = MonicPoly::new(Rationals, (0..n).map(|_| rand_rational(&mut rng)).collect()).unwrap();
            if f.disc() == BigRational::from_integer(0.into()) {
                continue;
            }
            let h = random_p_with(&Rationals, n, 4, &mut rng);
            let b = act_w0(&h, &sigma0(&f).unwrap());
            let r = reduce_over_field(&b).unwrap();
            assert_eq!(r.g, h.inverse());
            assert_eq!(r.target, sigma0(&f).unwrap());
        }
    }
}

#[test]
fn fiber_over_f5_reduces_to_section() {
    let ring = ZMod::new(5).unwrap();
    let f = MonicPoly::from_i64(ring, &[0, 1, 1]).unwrap();
    assert!(ring.is_unit(&f.disc()));
    let fiber = fiber_points(ring, &f).unwrap();
    assert_eq!(fiber.len(), 20);
    for b in &fiber {
        assert_eq!(reduce_over_field(b).unwrap().target, sigma0(&f).unwrap());
    }
}

#[test]
fn simple_transitivity_n3_p3() {
    let ring = ZMod::new(3).unwrap();
    let p_size = enumerate_parabolic(ring, 3).unwrap().len();
    assert_eq!(p_size, 6);
    for f in all_polys(ring, 3) {
        if !ring.is_unit(&f.disc()) {
            continue;
        }
        let fiber = fiber_points(ring, &f).unwrap();
        assert_eq!(fiber.len(), p_size);
        for b in &fiber {
            assert_eq!(stabilizer_fp(b).unwrap().len(), 1);
        }
    }
}

#[test]
fn parabolic_enumeration_is_injective() {
    for (n, p) in [(3, 5), (4, 3), (5, 3)] {
        let ring = ZMod::new(p).unwrap();
        let all = enumerate_parabolic(ring, n).unwrap();
        let distinct: BTreeSet<Vec<u64>> = all.iter().map(|g| g.matrix().to_vec()).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|g| g.is_in_p() && g.check_membership()));
    }
}

// Over Z/8 with odd n, bit j of the pattern is the parity of f_{2j}, the
// coefficient of x^{n-2j}.
#[test]
fn mod2_pattern_tracks_odd_degree_coefficients() {
    let ring = ZMod::new(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [3usize, 5] {
        let dim = w0_positions(n).len();
        let mut seen = BTreeSet::new();
        for _ in 0..3000 {
            let coords: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..8)).collect();
            let b = ReducibleMatrix::from_w0_coords(ring, n, &coords).unwrap();
            let f = inv(b.as_sym());
            let Ok(r) = reduce_over_field(&b) else { continue };
            let pat = r.mod2_pattern.unwrap();
            let expect: Vec<u8> = (1..=n / 2).map(|j| (f.coeff(2 * j) % 2) as u8).collect();
            assert_eq!(pat, expect);
            assert_eq!(redorb::group::act(&r.g, b.as_sym()), *r.target.as_sym());
            seen.insert(pat);
        }
        assert_eq!(seen.len(), 1 << (n / 2));
    }
}

#[test]
fn padic_reduction_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [3usize, 4, 5] {
        let mut done = 0;
        while done < 10 {
            let coords: Vec<BigInt> = (0..w0_positions(n).len()).map(|_| rng.gen_range(-9i64..=9).into()).collect();
            let b = ReducibleMatrix::from_w0_coords(Integers, n, &coords).unwrap();
            match reduce_padic(&b, 3, 3) {
                Ok(_) => done += 1,
                Err(Error::NonUnitDiscriminant) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

fn random_integral(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Option<ReducibleMatrix<Integers>> {
    let coords: Vec<BigInt> = (0..w0_positions(n).len()).map(|_| rng.gen_range(-bound..=bound).into()).collect();
    let b = ReducibleMatrix::from_w0_coords(Integers, n, &coords).unwrap();
    let ok = b.slicing().iter().all(|x| *x != BigInt::from(0)) && inv(b.as_sym()).disc() != BigInt::from(0);
    ok.then_some(b)
}

#[test]
fn canonical_form_is_invariant_and_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [3usize, 4, 5] {
        let mut trials = 0;
        while trials < 100 {
            let Some(b) = random_integral(&mut rng, n, 4) else { continue };
            trials += 1;
            let (c, w) = canonical_form_z_with_witness(&b).unwrap();
            assert_eq!(act_w0(&w, &b), c.matrix());
            assert!(c.slicing.iter().all(|x| *x > BigInt::from(0)));
            assert!(is_canonical(&c.matrix()).unwrap());
            let p = random_p(&Integers, n, 3, rng.gen());
            let moved = act_w0(&p, &b);
            assert_eq!(canonical_form_z(&moved).unwrap(), c);
            assert!(equivalent_z(&b, &moved).unwrap());
        }
    }
}

#[test]
fn canonical_form_errors() {
    let b = ReducibleMatrix::from_w0_coords(Integers, 3, &[0, 1, 1, 1, 1].map(BigInt::from)).unwrap();
    assert_eq!(canonical_form_z(&b), Err(Error::ZeroSliceEntry(1)));
    assert!(matches!(orbit_bfs_oracle(&b, 3, 1000), Err(Error::ZeroSliceEntry(1))));
}

#[test]
fn different_lambda_means_inequivalent() {
    let a = ReducibleMatrix::from_w0_coords(Integers, 3, &[1, 0, 0, 1, 0].map(BigInt::from)).unwrap();
    let b = ReducibleMatrix::from_w0_coords(Integers, 3, &[2, 0, 0, 1, 0].map(BigInt::from)).unwrap();
    assert!(!equivalent_z(&a, &b).unwrap());
}

// Every class found by BFS inside a generous box is exactly one canonical form.
#[test]
fn canonical_forms_match_bfs_classes_n3() {
    let n = 3;
    let bound = 3i64;
    let dim = w0_positions(n).len();
    let mut points = Vec::new();
    let mut forms = BTreeSet::new();
    let side = 2 * bound + 1;
    for k in 0..side.pow(dim as u32) {
        let mut r = k;
        let coords: Vec<BigInt> = (0..dim)
            .map(|_| {
                let x = r % side - bound;
                r /= side;
                BigInt::from(x)
            })
            .collect();
        let b = ReducibleMatrix::from_w0_coords(Integers, n, &coords).unwrap();
        if let Ok(c) = canonical_form_z(&b) {
            forms.insert(c);
            points.push(b);
        }
    }
    let classes = bfs_classes(&points, 8, 1 << 22).unwrap();
    assert_eq!(classes, forms.len());
}
