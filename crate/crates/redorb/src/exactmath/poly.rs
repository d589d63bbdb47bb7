//! Univariate polynomial utilities: resultants, discriminants, Sturm sequences,
//! and the monic polynomial type `MonicPoly`.
//!
//! Dense coefficient vectors are stored in ascending degree order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::ring::{Integers, Ring, RingTag};

fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree<T>(p: &[T]) -> usize {
    p.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = degree(a) + 1 - db;
    while r.len() > db && !r.is_empty() {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bc;
        }
        trim(&mut r);
        e -= 1;
    }
    let scale = num_traits::pow(lb.clone(), e);
    for c in r.iter_mut() {
        *c *= &scale;
    }
    r
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Resultant of two integer polynomials by the subresultant algorithm.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let mut s = BigInt::one();
    if degree(&a) < degree(&b) {
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if degree(&b) == 0 {
        return s * num_traits::pow(b[0].clone(), degree(&a));
    }
    let ca = content(&a);
    let cb = content(&b);
    for c in a.iter_mut() {
        *c /= &ca;
    }
    for c in b.iter_mut() {
        *c /= &cb;
    }
    let t = num_traits::pow(ca, degree(&b)) * num_traits::pow(cb, degree(&a));
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = degree(&a);
        let db = degree(&b);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.into_iter().map(|c| c / &div).collect();
        g = a[degree(&a)].clone();
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
        }
        if degree(&b) == 0 {
            let da = degree(&a);
            let lb = b[0].clone();
            let hh = if da == 0 {
                BigInt::one()
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
            };
            return s * t * hh;
        }
    }
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant as the determinant of the Sylvester matrix (oracle for `resultant`).
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (da, db) = (degree(&a), degree(&b));
    let size = da + db;
    if size == 0 {
        return BigInt::one();
    }
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for row in 0..db {
        for (i, c) in a.iter().rev().enumerate() {
            m[row][row + i] = c.clone();
        }
    }
    for row in 0..da {
        for (i, c) in b.iter().rev().enumerate() {
            m[db + row][row + i] = c.clone();
        }
    }
    bareiss_det(m)
}

fn derivative_int(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Discriminant of an integer polynomial of degree d with leading coefficient a:
/// `(-1)^(d(d-1)/2) Res(f, f') / a`.
pub fn discriminant_int(f: &[BigInt]) -> BigInt {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return BigInt::zero();
    }
    let d = degree(&f);
    let r = resultant(&f, &derivative_int(&f)) / &f[d];
    if (d * (d - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Discriminant of the monic cubic `x^3 + a x^2 + b x + c`.
pub fn disc_cubic(a: i128, b: i128, c: i128) -> i128 {
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

fn derivative_q(f: &[BigRational]) -> Vec<BigRational> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect()
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = degree(&r);
        let q = &r[dr] / lb;
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &q * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Number of distinct real roots of a squarefree rational polynomial
/// (ascending coefficients), from sign changes of the Sturm sequence at the
/// two infinities.
pub fn sturm_count_q(f: &[BigRational]) -> usize {
    let mut seq: Vec<Vec<BigRational>> = vec![f.to_vec()];
    trim(&mut seq[0]);
    let mut d = derivative_q(&seq[0]);
    trim(&mut d);
    seq.push(d);
    while !seq.last().unwrap().is_empty() && degree(seq.last().unwrap()) > 0 {
        let k = seq.len();
        let mut r = rem_q(&seq[k - 2], &seq[k - 1]);
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        seq.push(r);
    }
    let signs_at = |neg: bool| -> Vec<i8> {
        seq.iter()
            .filter(|p| !p.is_empty())
            .map(|p| {
                let lc = if p[degree(p)].is_positive() { 1 } else { -1 };
                if neg && degree(p) % 2 == 1 {
                    -lc
                } else {
                    lc
                }
            })
            .collect()
    };
    let changes = |s: Vec<i8>| s.windows(2).filter(|w| w[0] != w[1]).count();
    changes(signs_at(true)) - changes(signs_at(false))
}

/// Floating Sturm count with a relative guard; `None` when some leading
/// coefficient is too close to zero to trust.
pub fn sturm_count_f64(f: &[f64]) -> Option<usize> {
    let mut seq: Vec<Vec<f64>> = vec![f.to_vec()];
    let scale = f.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let d: Vec<f64> = f.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    seq.push(d);
    while degree(seq.last().unwrap()) > 0 {
        let k = seq.len();
        let a = &seq[k - 2];
        let b = &seq[k - 1];
        let db = degree(b);
        let lb = b[db];
        if lb.abs() < 1e-9 * scale.max(1.0) {
            return None;
        }
        let mut r = a.clone();
        while r.len() > db {
            let dr = r.len() - 1;
            let q = r[dr] / lb;
            for (i, bc) in b.iter().enumerate() {
                r[dr - db + i] -= q * bc;
            }
            r.pop();
        }
        if r.is_empty() {
            return None;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let last = seq.last().unwrap()[0];
    if last.abs() < 1e-12 * scale.max(1.0) {
        return None;
    }
    let signs_at = |neg: bool| -> Vec<bool> {
        seq.iter()
            .map(|p| {
                let pos = p[p.len() - 1] > 0.0;
                if neg && (p.len() - 1) % 2 == 1 {
                    !pos
                } else {
                    pos
                }
            })
            .collect()
    };
    let changes = |s: Vec<bool>| s.windows(2).filter(|w| w[0] != w[1]).count();
    Some(changes(signs_at(true)) - changes(signs_at(false)))
}

/// A monic polynomial `x^n + f_1 x^(n-1) + ... + f_n` over a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> MonicPoly<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, got: 0 });
        }
        Ok(MonicPoly { ring, coeffs })
    }

    /// `x^n`.
    pub fn monomial(ring: R, n: usize) -> Self {
        let coeffs = vec![ring.zero(); n];
        MonicPoly { ring, coeffs }
    }

    pub fn from_i64(ring: R, coeffs: &[i64]) -> Result<Self> {
        let c = coeffs.iter().map(|v| ring.from_i64(*v)).collect();
        Self::new(ring, c)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// `[f_1, ..., f_n]`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// `f_i` for `1 <= i <= n`.
    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i - 1]
    }

    pub fn rational_coeffs(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| self.ring.to_rational(c)).collect()
    }

    /// Ascending coefficient vector of the lift to the rationals, leading 1 included.
    pub fn rational_ascending(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self.rational_coeffs().into_iter().rev().collect();
        v.push(BigRational::one());
        v
    }

    /// Map to another ring through the canonical rational lift.
    pub fn map_to<S: Ring>(&self, target: S) -> Result<MonicPoly<S>> {
        let c = self
            .rational_coeffs()
            .iter()
            .map(|q| {
                target
                    .from_rational(q)
                    .ok_or_else(|| Error::RingMismatch(format!("{} does not map to {}", q, target.tag())))
            })
            .collect::<Result<Vec<_>>>()?;
        MonicPoly::new(target, c)
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f')`, computed on the integral lift.
    pub fn disc(&self) -> R::Elem {
        let q = disc_rational(&self.rational_coeffs());
        self.ring.from_rational(&q).expect("discriminant is a polynomial in the coefficients")
    }

    /// Evaluate at a ring element.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.one();
        for c in &self.coeffs {
            acc = r.add(&r.mul(&acc, x), c);
        }
        acc
    }
}

/// Discriminant of a monic rational polynomial given by `[f_1..f_n]`.
pub fn disc_rational(f: &[BigRational]) -> BigRational {
    let n = f.len();
    let d = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    // g(x) = d^n f(x/d) is monic and integral; disc(g) = d^(n(n-1)) disc(f).
    let mut g: Vec<BigInt> = Vec::with_capacity(n + 1);
    for i in (1..=n).rev() {
        let c = &f[i - 1] * BigRational::from_integer(num_traits::pow(d.clone(), i));
        g.push(c.to_integer());
    }
    g.push(BigInt::one());
    let dg = discriminant_int(&g);
    BigRational::new(dg, num_traits::pow(d, n * (n - 1)))
}

/// Number of real roots of a monic polynomial over an ordered ring.
pub fn sturm_real_roots<R: Ring>(f: &MonicPoly<R>) -> Result<usize> {
    if !f.ring().is_ordered() {
        return Err(Error::RingMismatch(format!("root counting over {}", f.ring().tag())));
    }
    let q = f.rational_coeffs();
    if disc_rational(&q).is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    Ok(sturm_count_q(&f.rational_ascending()))
}

/// JSON form of a polynomial: coefficients as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub ring: RingTag,
    pub coeffs: Vec<String>,
}

impl<R: Ring> MonicPoly<R> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.n(),
            ring: self.ring.tag(),
            coeffs: self.coeffs.iter().map(|c| self.ring.format_elem(c)).collect(),
        }
    }

    pub fn from_json(ring: R, j: &PolyJson) -> Result<Self> {
        if j.ring != ring.tag() {
            return Err(Error::RingMismatch(format!("expected {}, got {}", ring.tag(), j.ring)));
        }
        if j.coeffs.len() != j.n {
            return Err(Error::LengthMismatch { expected: j.n, got: j.coeffs.len() });
        }
        let c = j.coeffs.iter().map(|s| ring.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, c)
    }
}

impl MonicPoly<Integers> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_i64(Integers, coeffs).expect("nonempty")
    }
}
