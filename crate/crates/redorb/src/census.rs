//! The global orbit count: enumerate invariant polynomials of bounded
//! height, multiply local orbit counts over the primes whose square divides
//! the discriminant, and compare with the predicted asymptotic.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::archimedean::{constant_cfin, constant_cinf, predicted_count, volume_all, VolumeEstimate};
use crate::error::{Error, Result};
use crate::exactmath::{disc_cubic, discriminant_int, rational_to_f64, Integers, Interval, MonicPoly};
use crate::local::{local_lambda_integral, orbit_count_family, orbit_count_n3, satisfies_parity, Condition, FamilySpec};
use crate::reduction::is_canonical;
use crate::rep::{inv_i128, ReducibleMatrix, SymMatrix};

/// Primes `p` with `p^2 | d`, with their valuations. Trial division up to
/// the cube root of what is left; the remaining cofactor then has at most
/// two prime factors, and is divisible by a prime square only if it is a
/// perfect square. Large inputs go to a general factorizer.
pub fn square_primes(d: u128) -> Vec<(u64, u32)> {
    assert!(d > 0);
    if d > 1u128 << 60 {
        return num_prime::nt_funcs::factorize128(d)
            .into_iter()
            .filter(|(_, e)| *e >= 2)
            .map(|(p, e)| (p as u64, e as u32))
            .collect();
    }
    let mut m = d as u64;
    let mut out = Vec::new();
    let mut try_p = |p: u64, m: &mut u64| {
        if *m % p == 0 {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            if e >= 2 {
                out.push((p, e));
            }
        }
    };
    try_p(2, &mut m);
    try_p(3, &mut m);
    let mut p = 5u64;
    let mut step = 2;
    while (p as u128).pow(3) <= m as u128 {
        try_p(p, &mut m);
        p += step;
        step = 6 - step;
    }
    if m > 1 {
        let s = m.isqrt();
        if s * s == m {
            out.push((s, 2));
        }
    }
    out.sort_unstable();
    out
}

/// `prod_p c_p(f)` over primes with `p^2 | disc f`; primes carrying a
/// family condition are always visited since the condition can exclude `f`.
pub fn orbit_count_global(f: &[i64], family: &FamilySpec) -> Result<u64> {
    let n = f.len();
    let fb: Vec<BigInt> = f.iter().map(|c| BigInt::from(*c)).collect();
    if !satisfies_parity(&fb) {
        return Err(Error::DegenerateInput("parity condition fails".into()));
    }
    let disc: BigInt = if n == 3 {
        BigInt::from(disc_cubic(f[0] as i128, f[1] as i128, f[2] as i128))
    } else {
        let mut asc: Vec<BigInt> = fb.iter().rev().cloned().collect();
        asc.push(BigInt::one());
        discriminant_int(&asc)
    };
    if disc.is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    let d = disc.magnitude().to_u128().ok_or_else(|| Error::FactorizationTimeout(format!("{disc}")))?;
    let mut bad: BTreeMap<u64, ()> = square_primes(d).into_iter().map(|(p, _)| (p, ())).collect();
    for p in family.primes() {
        bad.insert(p, ());
    }
    let poly = MonicPoly::new(Integers, fb)?;
    let mut total = 1u64;
    for &p in bad.keys() {
        let c = if n == 3 && family.condition(p) == &Condition::Full {
            orbit_count_n3([f[0] as i128, f[1] as i128, f[2] as i128], p)
        } else {
            orbit_count_family(&poly, p, family)?
        };
        if c == 0 {
            return Ok(0);
        }
        total = total.checked_mul(c).ok_or_else(|| Error::InstanceTooLarge("orbit count overflow".into()))?;
    }
    Ok(total)
}

/// Real roots of an integer monic polynomial with nonzero discriminant.
pub fn real_root_count(f: &[i64]) -> usize {
    if f.len() == 3 {
        return if disc_cubic(f[0] as i128, f[1] as i128, f[2] as i128) > 0 { 3 } else { 1 };
    }
    let mut asc: Vec<BigRational> = f.iter().rev().map(|c| BigRational::from_integer(BigInt::from(*c))).collect();
    asc.push(BigRational::one());
    crate::exactmath::sturm_count_q(&asc)
}

/// Box `|f_i| < X^i` as inclusive ranges.
pub fn height_box(n: usize, x: u64) -> Result<Vec<i64>> {
    (1..=n as u32)
        .map(|i| {
            x.checked_pow(i)
                .and_then(|v| i64::try_from(v).ok())
                .map(|v| v - 1)
                .ok_or(Error::BoxTooLarge { size: u128::MAX, cap: i64::MAX as u128 })
        })
        .collect()
}

/// Counts from `enumerate_invariants`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub polys: Vec<Vec<i64>>,
    pub degenerate: u64,
}

fn nonzero_disc(f: &[i64]) -> bool {
    if f.len() == 3 {
        return disc_cubic(f[0] as i128, f[1] as i128, f[2] as i128) != 0;
    }
    let mut asc: Vec<BigInt> = f.iter().rev().map(|c| BigInt::from(*c)).collect();
    asc.push(BigInt::one());
    !discriminant_int(&asc).is_zero()
}

/// Walk the box `|f_i| < X^i` in lexicographic order (optionally with `f_1`
/// fixed), calling `visit(f, Some(r))` for nondegenerate `f` and
/// `visit(f, None)` for zero discriminant. With `parity`, `f_i` runs over
/// even values for odd `i`.
fn walk(n: usize, x: u64, first: Option<i64>, parity: bool, mut visit: impl FnMut(&[i64], Option<usize>)) -> Result<()> {
    let bounds = height_box(n, x)?;
    let step = |i: usize| if parity && i % 2 == 0 { 2 } else { 1 };
    let lo = |i: usize| {
        let v = -bounds[i];
        if step(i) == 2 && v % 2 != 0 {
            v + 1
        } else {
            v
        }
    };
    let mut f: Vec<i64> = (0..n).map(lo).collect();
    let fixed = usize::from(first.is_some());
    if let Some(v) = first {
        f[0] = v;
    }
    if f.iter().zip(&bounds).any(|(v, b)| v.abs() > *b) {
        return Ok(());
    }
    loop {
        if nonzero_disc(&f) {
            visit(&f, Some(real_root_count(&f)));
        } else {
            visit(&f, None);
        }
        let mut k = n;
        loop {
            if k == fixed {
                return Ok(());
            }
            k -= 1;
            if f[k] + step(k) <= bounds[k] {
                f[k] += step(k);
                break;
            }
            f[k] = lo(k);
        }
    }
}

/// Every integer `f` with `|f_i| < X^i` in lexicographic order, keeping those
/// with nonzero discriminant whose real-root count matches `r`; with
/// `parity`, even `n` keeps only `f` with `f_i` even for odd `i`. Returns the
/// number of degenerate `f` skipped.
pub fn for_each_invariant(
    n: usize,
    x: u64,
    r: Option<usize>,
    parity: bool,
    mut visit: impl FnMut(&[i64], usize),
) -> Result<u64> {
    let mut degenerate = 0;
    walk(n, x, None, parity && n % 2 == 0, |f, rr| match rr {
        None => degenerate += 1,
        Some(rr) if r.is_none_or(|r| r == rr) => visit(f, rr),
        Some(_) => {}
    })?;
    Ok(degenerate)
}

pub fn enumerate_invariants(n: usize, x: u64, r: Option<usize>, parity: bool) -> Result<Enumeration> {
    let mut polys = Vec::new();
    let degenerate = for_each_invariant(n, x, r, parity, |f, _| polys.push(f.to_vec()))?;
    Ok(Enumeration { polys, degenerate })
}

/// Inputs that determine a census report; the hash of this is the config hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub n: usize,
    pub xs: Vec<u64>,
    pub family: FamilySpec,
    pub samples: u64,
    pub seed: u64,
    /// Relative width target for the Euler product.
    pub precision: f64,
}

impl CensusConfig {
    pub fn new(n: usize, xs: Vec<u64>) -> Self {
        CensusConfig { n, xs, family: FamilySpec::full(n), samples: 4_000_000, seed: 1, precision: 1e-6 }
    }

    pub fn hash(&self) -> String {
        let s = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    /// `None` for all strata combined.
    pub r: Option<usize>,
    pub x: u64,
    pub polynomials: u64,
    pub degenerate: u64,
    pub empirical: u64,
    pub predicted: Interval,
    pub ratio: f64,
    /// `prod_p c_p` value to number of `f`.
    pub histogram: BTreeMap<u64, u64>,
    pub anomalies: Vec<String>,
    pub wall_time_s: f64,
    pub config_hash: String,
}

/// The predicted-constant multiplier of a family: the ratio of its lambda
/// integral to the full one at each conditioned prime.
pub fn family_factor(family: &FamilySpec) -> Result<BigRational> {
    let n = family.n;
    let mut r = BigRational::one();
    for p in family.primes() {
        let s = local_lambda_integral(n, p, family, 8)?.value;
        let full = local_lambda_integral(n, p, &FamilySpec::full(n), 0)?.value;
        r *= s / full;
    }
    Ok(r)
}

#[derive(Default, Clone)]
struct Bucket {
    polys: u64,
    degenerate: u64,
    empirical: u64,
    hist: BTreeMap<u64, u64>,
    anomalies: Vec<String>,
}

impl Bucket {
    fn merge(&mut self, o: &Bucket) {
        self.polys += o.polys;
        self.degenerate += o.degenerate;
        self.empirical += o.empirical;
        for (k, v) in &o.hist {
            *self.hist.entry(*k).or_default() += v;
        }
        self.anomalies.extend(o.anomalies.iter().cloned());
    }
}

/// Smallest index `k` with `H(f) < xs[k]`, for sorted `xs`.
fn height_index(f: &[i64], xs: &[u64]) -> usize {
    xs.iter()
        .position(|&x| f.iter().enumerate().all(|(i, c)| (c.unsigned_abs() as u128) < (x as u128).pow(i as u32 + 1)))
        .expect("inside the largest box")
}

/// Census over a sweep of heights from a single pass over the largest box,
/// sharded by `f_1`. Returns reports for every valid `r` and for all strata
/// combined, at each `X` in the sweep.
pub fn census(cfg: &CensusConfig) -> Result<Vec<CensusReport>> {
    let start = Instant::now();
    let n = cfg.n;
    cfg.family.validate()?;
    if cfg.family.n != n {
        return Err(Error::LengthMismatch { expected: n, got: cfg.family.n });
    }
    let mut xs = cfg.xs.clone();
    xs.sort_unstable();
    xs.dedup();
    let xmax = *xs.last().ok_or_else(|| Error::DegenerateInput("empty sweep".into()))?;
    let bounds = height_box(n, xmax)?;
    let parity = n % 2 == 0;
    let b1 = bounds[0];
    let f1s: Vec<i64> = (-b1..=b1).filter(|v| !parity || v % 2 == 0).collect();
    let nr = n + 1;
    // buckets[x index][r]
    let shards: Vec<Result<Vec<Vec<Bucket>>>> = f1s
        .par_iter()
        .map(|&f1| {
            let mut buckets = vec![vec![Bucket::default(); nr]; xs.len()];
            let mut err = None;
            walk(n, xmax, Some(f1), parity, |f, rr| {
                let k = height_index(f, &xs);
                let Some(rr) = rr else {
                    buckets[k][0].degenerate += 1;
                    return;
                };
                let b = &mut buckets[k][rr];
                b.polys += 1;
                match orbit_count_global(f, &cfg.family) {
                    Ok(c) => {
                        b.empirical += c;
                        *b.hist.entry(c).or_default() += 1;
                    }
                    Err(Error::FactorizationTimeout(_) | Error::StabilizationFailure(_) | Error::InstanceTooLarge(_)) => {
                        b.anomalies.push(format!("{f:?}"))
                    }
                    Err(e) => err = Some(e),
                }
            })?;
            match err {
                Some(e) => Err(e),
                None => Ok(buckets),
            }
        })
        .collect();
    let mut acc = vec![vec![Bucket::default(); nr]; xs.len()];
    for s in shards {
        let s = s?;
        for (a, b) in acc.iter_mut().zip(&s) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
    }
    // Cumulative in X.
    for k in 1..xs.len() {
        let prev = acc[k - 1].clone();
        for (x, y) in acc[k].iter_mut().zip(&prev) {
            x.merge(y);
        }
    }
    let cfin = constant_cfin(n, cfg.precision);
    let fam = rational_to_f64(&family_factor(&cfg.family)?);
    let vols = volume_all(n, cfg.samples, cfg.seed)?;
    let hash = cfg.hash();
    let wall = start.elapsed().as_secs_f64();
    let mut out = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        let mut all = Bucket::default();
        let mut pred_all = Interval::exact(0.0);
        for v in &vols {
            let b = &acc[k][v.r];
            all.merge(b);
            let pred = predicted(n, v, &cfin, fam, x)?;
            pred_all = pred_all.add(&pred);
            out.push(report(n, Some(v.r), x, b, pred, &hash, wall));
        }
        all.degenerate = acc[k][0].degenerate;
        out.push(report(n, None, x, &all, pred_all, &hash, wall));
    }
    Ok(out)
}

fn predicted(n: usize, v: &VolumeEstimate, cfin: &Interval, fam: f64, x: u64) -> Result<Interval> {
    let cinf = constant_cinf(n, v.r, v)?;
    Ok(predicted_count(n, cfin, &cinf, x as f64).scale(fam))
}

fn report(n: usize, r: Option<usize>, x: u64, b: &Bucket, predicted: Interval, hash: &str, wall: f64) -> CensusReport {
    let degenerate = if r.is_none() { b.degenerate } else { 0 };
    CensusReport {
        n,
        r,
        x,
        polynomials: b.polys,
        degenerate,
        empirical: b.empirical,
        predicted,
        ratio: b.empirical as f64 / predicted.mid(),
        histogram: b.hist.clone(),
        anomalies: b.anomalies.clone(),
        wall_time_s: wall,
        config_hash: hash.to_string(),
    }
}

/// Orbits counted two ways for `n = 3`: the product of local counts over
/// all `f` with `H(f) < X`, and the canonical representatives `B` with
/// `H(inv B) < X` found by a box search over the entries of `B`.
pub fn cross_check_direct(n: usize, x: u64) -> Result<(u64, u64)> {
    if n != 3 || x > 6 {
        return Err(Error::BoxTooLarge { size: x as u128, cap: 6 });
    }
    let mut method2 = 0u64;
    for_each_invariant(3, x, None, false, |f, _| {
        method2 += orbit_count_global(f, &FamilySpec::full(3)).expect("nondegenerate");
    })?;
    let xi = x as i128;
    let bound = [xi - 1, xi * xi - 1, xi * xi * xi - 1];
    let [x1, x2, x3] = bound;
    // b^2 divides the discriminant, so it is at most the largest |disc| in the box.
    let dmax = x1 * x1 * x2 * x2 + 4 * x2 * x2 * x2 + 4 * x1 * x1 * x1 * x3 + 27 * x3 * x3 + 18 * x1 * x2 * x3;
    let inv_at = |b: i128, c: i128, d: i128, e: i128, h: i128| inv_i128(3, &[0, b, c, b, d, e, c, e, h]);
    // f_k is affine in the entry solved for it (d, e, h for k = 1, 2, 3)
    // once the earlier entries are fixed; the window is the preimage of
    // |f_k| <= bound, padded by one.
    let window = |k: usize, g: &dyn Fn(i128) -> Vec<i128>| -> (i128, i128) {
        let (v0, v1, v2) = (g(0)[k], g(1)[k], g(2)[k]);
        let s = v1 - v0;
        assert!(s != 0 && v2 - v1 == s, "f_{} is not affine in its entry", k + 1);
        let lo = (-bound[k] - v0) as f64 / s as f64;
        let hi = (bound[k] - v0) as f64 / s as f64;
        (lo.min(hi).floor() as i128 - 1, lo.max(hi).ceil() as i128 + 1)
    };
    let mut direct = 0u64;
    let mut b = 1i128;
    while b * b <= dmax {
        for c in 0..2 * b {
            let (dl, dh) = window(0, &|d| inv_at(b, c, d, 0, 0));
            for d in dl..=dh {
                let (el, eh) = window(1, &|e| inv_at(b, c, d, e, 0));
                for e in el..=eh {
                    let (hl, hh) = window(2, &|h| inv_at(b, c, d, e, h));
                    for h in hl..=hh {
                        let f = inv_at(b, c, d, e, h);
                        if f.iter().zip(&bound).any(|(v, m)| v.abs() > *m) || disc_cubic(f[0], f[1], f[2]) == 0 {
                            continue;
                        }
                        let rows: Vec<i64> = [0, b, c, b, d, e, c, e, h].iter().map(|v| *v as i64).collect();
                        let m = ReducibleMatrix::new(SymMatrix::from_i64_rows(Integers, 3, &rows)?)?;
                        if !is_canonical(&m)? {
                            return Err(Error::StabilizationFailure(format!("{rows:?} is not canonical")));
                        }
                        direct += 1;
                    }
                }
            }
        }
        b += 1;
    }
    Ok((method2, direct))
}
