use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::padic::{padic_val_int, Valuation};

/// Identifies a coefficient ring.
///
/// The string form is used in every JSON schema: `Z`, `Q`, `Z/m`, `Z_p/p^k`
/// (written e.g. `Z_3/3^4`) and `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    Integers,
    Rationals,
    IntegersMod(u64),
    PadicTrunc { p: u64, k: u32 },
    Reals,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integers => write!(f, "Z"),
            RingTag::Rationals => write!(f, "Q"),
            RingTag::IntegersMod(m) => write!(f, "Z/{m}"),
            RingTag::PadicTrunc { p, k } => write!(f, "Z_{p}/{p}^{k}"),
            RingTag::Reals => write!(f, "R"),
        }
    }
}

impl FromStr for RingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown ring '{s}'"));
        match s {
            "Z" => return Ok(RingTag::Integers),
            "Q" => return Ok(RingTag::Rationals),
            "R" => return Ok(RingTag::Reals),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Z_") {
            let (p, pk) = rest.split_once('/').ok_or_else(bad)?;
            let (p2, k) = pk.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.parse().map_err(|_| bad())?;
            let p2: u64 = p2.parse().map_err(|_| bad())?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            if p != p2 || !is_prime(p) || k == 0 || p.checked_pow(k).is_none() {
                return Err(bad());
            }
            return Ok(RingTag::PadicTrunc { p, k });
        }
        if let Some(m) = s.strip_prefix("Z/") {
            let m: u64 = m.parse().map_err(|_| bad())?;
            if m < 2 || m > (1 << 62) {
                return Err(bad());
            }
            return Ok(RingTag::IntegersMod(m));
        }
        Err(bad())
    }
}

impl Serialize for RingTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A commutative ring with exact (or, for `Reals`, floating) arithmetic.
///
/// Every ring has a canonical lift to the rationals. Polynomial identities
/// with integer coefficients (the invariant map, the discriminant) are
/// computed on the lift and mapped back, which is valid for all rings here.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// `None` when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// Canonical lift: the integer itself, the least nonnegative residue, or
    /// the exact dyadic value of a float.
    fn to_rational(&self, a: &Self::Elem) -> BigRational;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// A unit `u` such that `u*a` is the chosen representative of `a` modulo
    /// units, or `None` if `a` cannot anchor the normalization (zero, or a
    /// non-unit in a finite ring).
    fn scalar_normalizer(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    /// Number of elements, for finite rings.
    fn size(&self) -> Option<u64> {
        None
    }

    /// All elements in increasing residue order, for finite rings.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inverse(a).is_some()
    }

    /// Exact half. Rings without 1/2 halve the canonical lift when it is even.
    fn half(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let two = self.from_i64(2);
        if let Some(h) = self.inverse(&two) {
            return Some(self.mul(a, &h));
        }
        let q = self.to_rational(a);
        if !q.is_integer() || q.numer().is_odd() {
            return None;
        }
        self.from_rational(&(q / BigInt::from(2)))
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Power with a signed exponent; `None` if a negative power of a non-unit is requested.
    fn powi(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u32))
        } else {
            self.inverse(a).map(|ai| self.pow(&ai, (-e) as u32))
        }
    }

    fn to_f64(&self, a: &Self::Elem) -> f64 {
        rational_to_f64(&self.to_rational(a))
    }

    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// Whether values embed in the reals (heights and root counts make sense).
    fn is_ordered(&self) -> bool {
        matches!(self.tag(), RingTag::Integers | RingTag::Rationals | RingTag::Reals)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: scale through logarithms.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// The ring of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn tag(&self) -> RingTag {
        RingTag::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        q.is_integer().then(|| q.numer().clone())
    }
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
    fn sqrt(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_negative() {
            return None;
        }
        let r = a.sqrt();
        (&r * &r == *a).then_some(r)
    }
    fn scalar_normalizer(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_zero() {
            None
        } else {
            Some(a.signum())
        }
    }
    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: '{s}'")))
    }
}

/// The field of rationals, always in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> RingTag {
        RingTag::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = Integers.sqrt(a.numer())?;
        let d = Integers.sqrt(a.denom())?;
        Some(BigRational::new(n, d))
    }
    fn scalar_normalizer(&self, a: &BigRational) -> Option<BigRational> {
        self.inverse(a)
    }
    fn format_elem(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
}

/// Integers modulo `m` (any `m >= 2`), elements stored as least residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZMod {
    m: u64,
}

impl ZMod {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 || m > (1 << 62) {
            return Err(Error::Parse(format!("modulus {m} out of range")));
        }
        Ok(ZMod { m })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.m as i128) as u64
    }
}

impl Ring for ZMod {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::IntegersMod(self.m)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.m)).to_u64().expect("residue fits")
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        inv_mod(d, self.m).map(|di| mul_mod(n, di, self.m))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.m as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.m as u128 - *b as u128) % self.m as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.m)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.m - a % self.m) % self.m
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.m == 0
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.m)
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        if self.m > 1 << 24 {
            return None;
        }
        (0..self.m).find(|x| mul_mod(*x, *x, self.m) == *a)
    }
    fn scalar_normalizer(&self, a: &u64) -> Option<u64> {
        self.inverse(a)
    }
    fn half(&self, a: &u64) -> Option<u64> {
        if let Some(h) = inv_mod(2, self.m) {
            return Some(mul_mod(*a, h, self.m));
        }
        // Even modulus: halve the least residue (one of the two halves).
        (a % 2 == 0).then_some(a / 2)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let v: BigInt = s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: '{s}'")))?;
        Ok(self.from_bigint(&v))
    }
    fn size(&self) -> Option<u64> {
        Some(self.m)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        (self.m <= 1 << 24).then(|| (0..self.m).collect())
    }
}

/// `Z/p^k` viewed as a truncation of the p-adic integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicTrunc {
    p: u64,
    k: u32,
    inner: ZMod,
}

impl PadicTrunc {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::Parse(format!("invalid p-adic truncation p={p}, k={k}")));
        }
        let m = p
            .checked_pow(k)
            .filter(|m| *m <= 1 << 62)
            .ok_or_else(|| Error::Parse(format!("{p}^{k} is too large")))?;
        Ok(PadicTrunc { p, k, inner: ZMod { m } })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.inner.m
    }

    /// Valuation of a residue; zero reports `Infinite` (indistinguishable from 0 at this level).
    pub fn valuation(&self, a: &u64) -> Valuation {
        padic_val_int(&BigInt::from(*a), self.p)
    }
}

impl Ring for PadicTrunc {
    type Elem = u64;

    fn tag(&self) -> RingTag {
        RingTag::PadicTrunc { p: self.p, k: self.k }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.inner.one()
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.inner.from_bigint(v)
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.inner.from_i64(v)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        self.inner.from_rational(q)
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        self.inner.to_rational(a)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.inner.add(a, b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.inner.sub(a, b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.inner.mul(a, b)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.inner.neg(a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        self.inner.is_zero(a)
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        self.inner.inverse(a)
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        self.inner.sqrt(a)
    }
    fn scalar_normalizer(&self, a: &u64) -> Option<u64> {
        self.inner.inverse(a)
    }
    fn half(&self, a: &u64) -> Option<u64> {
        self.inner.half(a)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        self.inner.parse_elem(s)
    }
    fn size(&self) -> Option<u64> {
        Some(self.inner.m)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        self.inner.elements()
    }
}

/// Double-precision reals. Exact algorithms run on the dyadic value of each float.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Reals;

impl Ring for Reals {
    type Elem = f64;

    fn tag(&self) -> RingTag {
        RingTag::Reals
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn from_bigint(&self, v: &BigInt) -> f64 {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_i64(&self, v: i64) -> f64 {
        v as f64
    }
    fn from_rational(&self, q: &BigRational) -> Option<f64> {
        Some(rational_to_f64(q))
    }
    fn to_rational(&self, a: &f64) -> BigRational {
        BigRational::from_float(*a).expect("finite float")
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }
    fn inverse(&self, a: &f64) -> Option<f64> {
        (*a != 0.0).then(|| 1.0 / a)
    }
    fn sqrt(&self, a: &f64) -> Option<f64> {
        (*a >= 0.0).then(|| a.sqrt())
    }
    fn scalar_normalizer(&self, a: &f64) -> Option<f64> {
        self.inverse(a)
    }
    fn half(&self, a: &f64) -> Option<f64> {
        Some(a / 2.0)
    }
    fn to_f64(&self, a: &f64) -> f64 {
        *a
    }
    fn format_elem(&self, a: &f64) -> String {
        format!("{a:?}")
    }
    fn parse_elem(&self, s: &str) -> Result<f64> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not a float: '{s}'")))
    }
    fn eq_elem(&self, a: &f64, b: &f64) -> bool {
        a == b
    }
}
