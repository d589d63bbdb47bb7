//! Real-place constants: Monte Carlo volumes of the height box by real-root
//! count, the zeta products, slice sums over `Z(b)`, and predicted counts.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{disc_rational, sturm_count_f64, sturm_count_q, Interval};
use crate::local::{euler_product, zeta_arguments, TailModel};
use crate::rep::zpoly_exponents;

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.5758293035489;

const SHARD: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub n: usize,
    pub r: usize,
    pub estimate: f64,
    /// 99% confidence half-width.
    pub half_width: f64,
    pub samples: u64,
    pub seed: u64,
}

impl VolumeEstimate {
    pub fn standard_error(&self) -> f64 {
        self.half_width / Z99
    }

    pub fn interval(&self) -> Interval {
        Interval::new((self.estimate - self.half_width).max(0.0), self.estimate + self.half_width)
    }
}

pub fn check_parity(n: usize, r: usize) -> Result<()> {
    if r > n || (n - r) % 2 != 0 {
        return Err(Error::InvalidParity { n, r });
    }
    Ok(())
}

/// Real roots of `x^n + f_1 x^(n-1) + ... + f_n`, or `None` when the
/// discriminant vanishes.
pub fn real_roots(f: &[f64]) -> Option<usize> {
    let mut asc: Vec<f64> = f.iter().rev().copied().collect();
    asc.push(1.0);
    if let Some(r) = sturm_count_f64(&asc) {
        return Some(r);
    }
    let q: Vec<BigRational> = asc.iter().map(|c| BigRational::from_float(*c).expect("finite")).collect();
    let monic: Vec<BigRational> = q[..f.len()].iter().rev().cloned().collect();
    if num_traits::Zero::is_zero(&disc_rational(&monic)) {
        return None;
    }
    Some(sturm_count_q(&q))
}

fn shard_counts(n: usize, seed: u64, shard: u64, size: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut counts = vec![0u64; n + 1];
    let mut f = vec![0.0; n];
    let mut done = 0;
    while done < size {
        for c in f.iter_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        if let Some(r) = real_roots(&f) {
            counts[r] += 1;
            done += 1;
        }
    }
    counts
}

/// Estimates of `V^(r)(1)` for every valid `r` from one sample stream:
/// `f_i` uniform on `(-1, 1)`, classified by the Sturm count. Samples are
/// split into shards with independent ChaCha streams, so the result depends
/// only on `(samples, seed)`.
pub fn volume_all(n: usize, samples: u64, seed: u64) -> Result<Vec<VolumeEstimate>> {
    if samples == 0 {
        return Err(Error::DegenerateInput("no samples".into()));
    }
    let shards = samples.div_ceil(SHARD);
    let parts: Vec<Vec<u64>> = (0..shards)
        .into_par_iter()
        .map(|s| shard_counts(n, seed, s, SHARD.min(samples - s * SHARD)))
        .collect();
    let mut counts = vec![0u64; n + 1];
    for p in parts {
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }
    let cube = 2f64.powi(n as i32);
    Ok((0..=n)
        .filter(|r| (n - r) % 2 == 0)
        .map(|r| {
            let phat = counts[r] as f64 / samples as f64;
            VolumeEstimate {
                n,
                r,
                estimate: cube * phat,
                half_width: Z99 * cube * (phat * (1.0 - phat) / samples as f64).sqrt(),
                samples,
                seed,
            }
        })
        .collect())
}

pub fn volume_vr(n: usize, r: usize, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    check_parity(n, r)?;
    Ok(volume_all(n, samples, seed)?.into_iter().find(|v| v.r == r).expect("valid r"))
}

const BERNOULLI: [(f64, f64); 9] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
];

/// `zeta(s)` for integer `s >= 2` by Euler-Maclaurin at `N = 12` with eight
/// correction terms; the ninth term bounds the remainder.
pub fn zeta_em(s: u32) -> Interval {
    assert!(s >= 2, "zeta pole");
    let n = 12.0f64;
    let sf = s as f64;
    let mut head = 0.0;
    for k in (1..12).rev() {
        head += (k as f64).powf(-sf);
    }
    let mut sum = head + n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    let mut rising = sf;
    let mut fact = 2.0;
    let mut last = 0.0;
    for (j, (a, b)) in BERNOULLI.iter().enumerate() {
        let k = j as f64 + 1.0;
        let term = a / b / fact * rising * n.powf(-sf - 2.0 * k + 1.0);
        if j == BERNOULLI.len() - 1 {
            last = term.abs();
        } else {
            sum += term;
        }
        rising *= (sf + 2.0 * k - 1.0) * (sf + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    let err = 2.0 * last + 64.0 * f64::EPSILON * sum;
    Interval::with_radius(sum, err)
}

/// `prod zeta(a)` over the zeta arguments of `C_n^fin`, by Euler-Maclaurin.
pub fn zeta_product(n: usize) -> Interval {
    zeta_arguments(n).iter().fold(Interval::exact(1.0), |acc, a| acc.mul(&zeta_em(*a)))
}

/// `C_n^fin` as an Euler product over all primes, explicit up to a sieve
/// bound chosen so the analytic tail is below `precision / 10`.
pub fn constant_cfin(n: usize, precision: f64) -> Interval {
    let h = zeta_arguments(n).len() as f64;
    let up_to = ((10.0 * h / precision).ceil() as u64).clamp(1000, 100_000_000);
    euler_product(n, &Default::default(), 1000.min(up_to), TailModel::Sieved { up_to })
}

/// `C_{n,r}^inf = V^(r)(1)`, times `2^(-n/2)` for even `n`.
pub fn constant_cinf(n: usize, r: usize, v: &VolumeEstimate) -> Result<Interval> {
    check_parity(n, r)?;
    if v.n != n || v.r != r {
        return Err(Error::DegenerateInput("volume estimate for another stratum".into()));
    }
    let scale = if n % 2 == 0 { 2f64.powi(-((n / 2) as i32)) } else { 1.0 };
    Ok(v.interval().scale(scale))
}

pub fn count_exponent(n: usize) -> u32 {
    ((n * n + n) / 2) as u32
}

/// `C_n^fin C_{n,r}^inf X^((n^2+n)/2)`.
pub fn predicted_count(n: usize, cfin: &Interval, cinf: &Interval, x: f64) -> Interval {
    if x == 0.0 {
        return Interval::exact(0.0);
    }
    cfin.mul(cinf).mul(&Interval::around(x).powi(count_exponent(n) as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSum {
    pub n: usize,
    pub m_trunc: u64,
    /// Sum of `1/Z(b)` over the box `1 <= b_i <= m_trunc`.
    pub partial: f64,
    /// Enclosure of the remainder outside the box.
    pub tail: Interval,
    /// Enclosure of the full sum.
    pub total: Interval,
}

fn power_sum(m: u64, z: u32) -> f64 {
    // Smallest terms first.
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for b in (1..=m).rev() {
        let y = (b as f64).powi(-(z as i32)) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// `sum_{b in Z_{>0}^h} 1/Z(b)` truncated to the box `b_i <= m_trunc`. The
/// sum factors over the slicing entries, and each remainder
/// `sum_{b > M} b^-z` lies between the integrals from `M + 1` and from `M`.
pub fn slice_sum(n: usize, m_trunc: u64) -> SliceSum {
    assert!(m_trunc >= 1);
    let mut partial = 1.0;
    let mut lo = Interval::exact(1.0);
    for z in zpoly_exponents(n) {
        assert!(z >= 2, "divergent slice sum");
        let p = power_sum(m_trunc, z);
        let zf = z as f64;
        let t_lo = ((m_trunc + 1) as f64).powf(1.0 - zf) / (zf - 1.0);
        let t_hi = (m_trunc as f64).powf(1.0 - zf) / (zf - 1.0);
        let err = 4.0 * m_trunc as f64 * f64::EPSILON * p;
        partial *= p;
        lo = lo.mul(&Interval::new(p + t_lo - err, p + t_hi + err));
    }
    let total = lo;
    let tail = Interval::new((total.lo - partial).max(0.0), (total.hi - partial).max(0.0));
    SliceSum { n, m_trunc, partial, tail, total }
}

/// Sum of `1/Z(b)` over `b` with `Z(b) < bound`, by recursion on the slicing entries.
fn sum_below(z: &[u32], bound: f64) -> (f64, u64) {
    fn rec(z: &[u32], bound: f64, acc: f64, s: &mut f64, c: &mut f64, count: &mut u64) {
        if z.is_empty() {
            let y = 1.0 / acc - *c;
            let t = *s + y;
            *c = (t - *s) - y;
            *s = t;
            *count += 1;
            return;
        }
        let mut b = 1u64;
        loop {
            let v = acc * (b as f64).powi(z[0] as i32);
            if v >= bound {
                break;
            }
            rec(&z[1..], bound, v, s, c, count);
            b += 1;
        }
    }
    let (mut s, mut c, mut count) = (0.0, 0.0, 0);
    rec(z, bound, 1.0, &mut s, &mut c, &mut count);
    (s, count)
}

/// `sum_{Z(b) >= M^2} 1/Z(b)`: the full sum (a zeta product) minus the
/// finite sum below the threshold.
pub fn tail_over_threshold(n: usize, m: f64) -> Interval {
    let z = zpoly_exponents(n);
    let total = zeta_product(n);
    let (below, count) = sum_below(&z, m * m);
    let err = 4.0 * (count as f64 + 1.0) * f64::EPSILON * below;
    Interval::new((total.lo - below - err).max(0.0), total.hi - below + err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_and_four() {
        let pi = std::f64::consts::PI;
        assert!(zeta_em(2).contains(pi * pi / 6.0));
        assert!(zeta_em(4).contains(pi.powi(4) / 90.0));
        assert!(zeta_em(2).width() < 1e-12);
        assert!(zeta_em(3).contains(1.2020569031595942));
    }

    #[test]
    fn parity() {
        assert!(check_parity(3, 2).is_err());
        assert!(check_parity(4, 0).is_ok());
        assert!(check_parity(3, 5).is_err());
    }

    #[test]
    fn roots_of_known_cubics() {
        assert_eq!(real_roots(&[0.0, -1.0, 0.0]), Some(3));
        assert_eq!(real_roots(&[0.0, 1.0, 0.0]), Some(1));
        assert_eq!(real_roots(&[0.0, 0.0, 0.0]), None);
    }

    #[test]
    fn sum_below_counts() {
        let (s, c) = sum_below(&[2], 10.0);
        assert_eq!(c, 3);
        assert!((s - (1.0 + 0.25 + 1.0 / 9.0)).abs() < 1e-15);
    }
}
