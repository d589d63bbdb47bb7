//! Symmetric matrices, the reducible hyperplane `W0`, the invariant map and
//! the polynomial section `sigma0`.

use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::zpoly::anti_pencil_charpoly;
use crate::exactmath::{disc_rational, sturm_count_q, MonicPoly, Reals, Ring, RingTag};

/// Positions `(i, j)`, `i <= j`, of `W0` in row-major order (1-based).
pub fn w0_positions(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            if i + j >= n {
                v.push((i, j));
            }
        }
    }
    v
}

/// Slicing positions `(i, n-i)` for `i = 1..floor(n/2)`; for even `n` the
/// last one is the center `(n/2, n/2)`.
pub fn slicing_positions(n: usize) -> Vec<(usize, usize)> {
    (1..=n / 2).map(|i| (i, n - i)).collect()
}

/// Exponents of the slicing entries in `lambda`.
pub fn lambda_exponents(n: usize) -> Vec<u32> {
    let h = n / 2;
    (1..=h)
        .map(|i| if n % 2 == 0 && i == h { (n as u32 - 2) / 2 } else { 2 * i as u32 - 1 })
        .collect()
}

/// Exponents of the slicing entries in the slice polynomial `Z`.
pub fn zpoly_exponents(n: usize) -> Vec<u32> {
    let h = n / 2;
    (1..=h).map(|k| if n % 2 == 0 && k == h { h as u32 } else { 2 * k as u32 }).collect()
}

/// Entries left free by the canonical sweep: for each `m = 1..n`, the most
/// central position on the anti-diagonal `i + j = n + m`.
pub fn free_positions(n: usize) -> Vec<(usize, usize)> {
    (1..=n).map(|m| ((n + m) / 2, (n + m + 1) / 2)).collect()
}

/// Index of the slicing entry sitting in row `k` (1-based), i.e. `b_{k,n-k}`.
pub fn slice_index_of_row(n: usize, k: usize) -> usize {
    k.min(n - k) - 1
}

/// One step of the unipotent sweep: generator `u_{gi,gj}` moves `target` by
/// a multiple of the slicing entry of row `target.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepStep {
    pub gen: (usize, usize),
    pub target: (usize, usize),
    pub slice: usize,
    /// Middle-row generators need even parameters over rings without 1/2.
    pub middle: bool,
}

/// The sweep in application order: rows `k = 1..n-2` ascending, and inside a
/// row the generator column `j` descending.
pub fn sweep_steps(n: usize) -> Vec<SweepStep> {
    let mut v = Vec::new();
    for k in 1..n.saturating_sub(1) {
        let i = k + 1;
        let jmax = k.min(n - 1 - k);
        for j in (1..=jmax).rev() {
            v.push(SweepStep {
                gen: (i, j),
                target: (k, n + 1 - j),
                slice: slice_index_of_row(n, k),
                middle: n % 2 == 1 && 2 * i == n + 1,
            });
        }
    }
    v
}

/// Weight `i + j - n` of an entry; the coefficient `f_m` is homogeneous of weight `m`.
pub fn weight(n: usize, (i, j): (usize, usize)) -> usize {
    i + j - n
}

/// The anti-diagonal Gram matrix of ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntiDiagonalForm {
    pub n: usize,
}

impl AntiDiagonalForm {
    pub fn matrix<R: Ring>(&self, ring: &R) -> Vec<R::Elem> {
        let n = self.n;
        (0..n * n).map(|k| if k / n + k % n == n - 1 { ring.one() } else { ring.zero() }).collect()
    }

    /// `(-1)^(n(n-1)/2)`.
    pub fn det_sign(&self) -> i32 {
        if (self.n * (self.n - 1) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// An `n x n` symmetric matrix over a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<R: Ring> {
    ring: R,
    n: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> SymMatrix<R> {
    pub fn zero(ring: R, n: usize) -> Self {
        let data = vec![ring.zero(); n * n];
        SymMatrix { ring, n, data }
    }

    /// From a full row-major array; fails unless it is symmetric.
    pub fn from_rows(ring: R, n: usize, data: Vec<R::Elem>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: data.len() });
        }
        for i in 0..n {
            for j in 0..i {
                if !ring.eq_elem(&data[i * n + j], &data[j * n + i]) {
                    return Err(Error::DegenerateInput(format!("not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(SymMatrix { ring, n, data })
    }

    pub fn from_i64_rows(ring: R, n: usize, rows: &[i64]) -> Result<Self> {
        let data = rows.iter().map(|v| ring.from_i64(*v)).collect();
        Self::from_rows(ring, n, data)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `b_ij`, 1-based, symmetric.
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        let n = self.n;
        self.data[(i - 1) * n + (j - 1)] = v.clone();
        self.data[(j - 1) * n + (i - 1)] = v;
    }

    /// Row-major storage.
    pub fn rows(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn is_in_w0(&self) -> bool {
        (1..=self.n).all(|i| (1..=self.n).all(|j| i + j >= self.n || self.ring.is_zero(self.get(i, j))))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let data = self.data.iter().map(|x| self.ring.mul(x, c)).collect();
        SymMatrix { ring: self.ring.clone(), n: self.n, data }
    }

    pub fn map_to<S: Ring>(&self, target: S) -> Result<SymMatrix<S>> {
        let data = self
            .data
            .iter()
            .map(|x| {
                let q = self.ring.to_rational(x);
                target
                    .from_rational(&q)
                    .ok_or_else(|| Error::RingMismatch(format!("{} does not map to {}", q, target.tag())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymMatrix { ring: target, n: self.n, data })
    }

    pub fn rational_rows(&self) -> Vec<BigRational> {
        self.data.iter().map(|x| self.ring.to_rational(x)).collect()
    }
}

/// A symmetric matrix in the reducible hyperplane `W0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducibleMatrix<R: Ring>(SymMatrix<R>);

impl<R: Ring> ReducibleMatrix<R> {
    pub fn new(b: SymMatrix<R>) -> Result<Self> {
        if !b.is_in_w0() {
            return Err(Error::DegenerateInput("matrix has a nonzero entry with i + j < n".into()));
        }
        Ok(ReducibleMatrix(b))
    }

    /// Build from the `W0` coordinates listed by [`w0_positions`].
    pub fn from_w0_coords(ring: R, n: usize, coords: &[R::Elem]) -> Result<Self> {
        let pos = w0_positions(n);
        if coords.len() != pos.len() {
            return Err(Error::LengthMismatch { expected: pos.len(), got: coords.len() });
        }
        let mut b = SymMatrix::zero(ring, n);
        for (&(i, j), v) in pos.iter().zip(coords) {
            b.set(i, j, v.clone());
        }
        Ok(ReducibleMatrix(b))
    }

    pub fn w0_coords(&self) -> Vec<R::Elem> {
        w0_positions(self.n()).into_iter().map(|(i, j)| self.get(i, j).clone()).collect()
    }

    pub fn as_sym(&self) -> &SymMatrix<R> {
        &self.0
    }

    pub fn into_sym(self) -> SymMatrix<R> {
        self.0
    }

    /// The slicing entries `b_{i,n-i}`, `i = 1..floor(n/2)`.
    pub fn slicing(&self) -> Vec<R::Elem> {
        slicing_positions(self.n()).into_iter().map(|(i, j)| self.get(i, j).clone()).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) -> Result<()> {
        if i + j < self.n() && !self.ring().is_zero(&v) {
            return Err(Error::IndexError(format!("({i}, {j}) lies outside W0")));
        }
        self.0.set(i, j, v);
        Ok(())
    }
}

impl<R: Ring> Deref for ReducibleMatrix<R> {
    type Target = SymMatrix<R>;
    fn deref(&self) -> &SymMatrix<R> {
        &self.0
    }
}

/// The invariant polynomial `(-1)^floor(n/2) det(x*A + B)`.
///
/// Computed by fraction-free elimination over `Z[x]` on the integral lift
/// `d*B`, `d` the common denominator; valid in every ring since the
/// coefficients are integer polynomials in the entries.
pub fn inv<R: Ring>(b: &SymMatrix<R>) -> MonicPoly<R> {
    let n = b.n();
    let q = b.rational_rows();
    let f = inv_rational(n, &q);
    let ring = b.ring().clone();
    let coeffs = f
        .iter()
        .map(|c| ring.from_rational(c).expect("invariant coefficients are integral in the entries"))
        .collect();
    MonicPoly::new(ring, coeffs).expect("n >= 1")
}

/// `inv` on a rational row-major matrix.
pub fn inv_rational(n: usize, rows: &[BigRational]) -> Vec<BigRational> {
    let d = rows.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let scaled: Vec<BigInt> = rows.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect();
    // det(x A + B) = d^-n det(d x A + d B); coefficient i of inv picks up d^-i.
    let p = anti_pencil_charpoly(n, &scaled);
    p.into_iter()
        .enumerate()
        .map(|(k, c)| BigRational::new(c, num_traits::pow(d.clone(), k + 1)))
        .collect()
}

/// `inv` for small integer matrices (row-major), in machine arithmetic.
pub fn inv_i128(n: usize, rows: &[i128]) -> Vec<i128> {
    anti_pencil_charpoly(n, rows)
}

/// `H(f) = max |f_i|^(1/i)` for rings embedding in the reals.
pub fn height<R: Ring>(f: &MonicPoly<R>) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| f.ring().to_f64(c).abs().powf(1.0 / (k + 1) as f64))
        .fold(0.0, f64::max)
}

pub fn height_matrix<R: Ring>(b: &SymMatrix<R>) -> f64 {
    height(&inv(b))
}

/// Exact form of `H(f) < X`: `|f_i| < X^i` for every `i`.
pub fn height_below<R: Ring>(f: &MonicPoly<R>, x: &BigInt) -> bool {
    let xq = BigRational::from_integer(x.clone());
    let mut pow = BigRational::one();
    for c in f.coeffs() {
        pow *= &xq;
        if f.ring().to_rational(c).abs() >= pow {
            return false;
        }
    }
    true
}

fn product_with_exponents<R: Ring>(ring: &R, vals: &[R::Elem], exps: &[u32]) -> R::Elem {
    vals.iter().zip(exps).fold(ring.one(), |acc, (v, e)| ring.mul(&acc, &ring.pow(v, *e)))
}

/// The weight `lambda` on `W0`: a monomial in the slicing entries.
pub fn lambda<R: Ring>(b: &ReducibleMatrix<R>) -> R::Elem {
    product_with_exponents(b.ring(), &b.slicing(), &lambda_exponents(b.n()))
}

/// The slice polynomial `Z(b)` for a vector of `floor(n/2)` slicing values.
pub fn zpoly<R: Ring>(ring: &R, n: usize, b: &[R::Elem]) -> Result<R::Elem> {
    if b.len() != n / 2 {
        return Err(Error::LengthMismatch { expected: n / 2, got: b.len() });
    }
    Ok(product_with_exponents(ring, b, &zpoly_exponents(n)))
}

pub fn zpoly_of<R: Ring>(b: &ReducibleMatrix<R>) -> R::Elem {
    zpoly(b.ring(), b.n(), &b.slicing()).expect("slicing has floor(n/2) entries")
}

/// Value placed at the free entry of weight `m` by `sigma0`. The pattern was
/// fixed by searching all sign vectors against `inv(sigma0(f)) = f` (see the
/// `sigma0_sign_calibration` test).
fn sigma0_entry<R: Ring>(f: &MonicPoly<R>, m: usize) -> Result<R::Elem> {
    let r = f.ring();
    let n = f.n();
    let fm = f.coeff(m);
    let halve = |x: &R::Elem| r.half(x).ok_or_else(|| Error::HalvingError(r.format_elem(x)));
    if n % 2 == 1 {
        Ok(match m {
            1 => fm.clone(),
            _ if m % 2 == 0 => r.neg(&halve(fm)?),
            _ => fm.clone(),
        })
    } else {
        Ok(match m {
            1 => halve(fm)?,
            2 => {
                let h = halve(f.coeff(1))?;
                r.sub(&r.mul(&h, &h), fm)
            }
            _ if m % 2 == 1 => halve(fm)?,
            _ => r.neg(fm),
        })
    }
}

/// The polynomial section: slicing entries 1, sweep targets 0, and the free
/// entry of weight `m` a simple function of `f_m` (and `f_1` for even `n`).
pub fn sigma0<R: Ring>(f: &MonicPoly<R>) -> Result<ReducibleMatrix<R>> {
    let n = f.n();
    let ring = f.ring().clone();
    let mut b = SymMatrix::zero(ring.clone(), n);
    for (i, j) in slicing_positions(n) {
        b.set(i, j, ring.one());
    }
    for (m, (i, j)) in free_positions(n).into_iter().enumerate() {
        b.set(i, j, sigma0_entry(f, m + 1)?);
    }
    ReducibleMatrix::new(b)
}

/// Height-rescaled section `H * sigma0(f(x/H))` over the reals.
pub fn sigma(f: &MonicPoly<Reals>) -> Result<ReducibleMatrix<Reals>> {
    let h = height(f);
    if h == 0.0 {
        return Err(Error::DegenerateInput("x^n has height zero".into()));
    }
    if disc_rational(&f.rational_coeffs()).is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    let scaled: Vec<f64> = f.coeffs().iter().enumerate().map(|(k, c)| c / h.powi(k as i32 + 1)).collect();
    let b0 = sigma0(&MonicPoly::new(Reals, scaled)?)?;
    ReducibleMatrix::new(b0.scale(&h))
}

/// Number of real roots `r`, checked against the parity constraint `r = n mod 2`.
pub fn stratify<R: Ring>(f: &MonicPoly<R>) -> Result<usize> {
    if !f.ring().is_ordered() {
        return Err(Error::RingMismatch(format!("root counting over {}", f.ring().tag())));
    }
    let q = f.rational_coeffs();
    if disc_rational(&q).is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    let r = sturm_count_q(&f.rational_ascending());
    assert_eq!(r % 2, f.n() % 2, "real root count parity");
    Ok(r)
}

/// `f` lies in `U^(r)`.
pub fn in_u_r<R: Ring>(f: &MonicPoly<R>, r: usize) -> bool {
    stratify(f).map(|s| s == r).unwrap_or(false)
}

/// `B` lies in `W^(r)`.
pub fn in_w_r<R: Ring>(b: &SymMatrix<R>, r: usize) -> bool {
    in_u_r(&inv(b), r)
}

/// JSON form of a symmetric matrix, listing nonzero entries with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymJson {
    pub n: usize,
    pub ring: RingTag,
    pub entries: Vec<(usize, usize, String)>,
}

impl<R: Ring> SymMatrix<R> {
    pub fn to_json(&self) -> SymJson {
        let mut entries = Vec::new();
        for i in 1..=self.n {
            for j in i..=self.n {
                let v = self.get(i, j);
                if !self.ring.is_zero(v) {
                    entries.push((i, j, self.ring.format_elem(v)));
                }
            }
        }
        SymJson { n: self.n, ring: self.ring.tag(), entries }
    }

    pub fn from_json(ring: R, j: &SymJson) -> Result<Self> {
        if j.ring != ring.tag() {
            return Err(Error::RingMismatch(format!("expected {}, got {}", ring.tag(), j.ring)));
        }
        let mut b = SymMatrix::zero(ring.clone(), j.n);
        for (i, k, v) in &j.entries {
            if *i == 0 || *i > *k || *k > j.n {
                return Err(Error::IndexError(format!("entry ({i}, {k}) must satisfy 1 <= i <= j <= {}", j.n)));
            }
            b.set(*i, *k, ring.parse_elem(v)?);
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{Integers, Rationals, ZMod};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn structure_partitions_w0() {
        for n in 2..=9 {
            let mut all: Vec<(usize, usize)> = slicing_positions(n);
            all.extend(free_positions(n));
            all.extend(sweep_steps(n).iter().map(|s| s.target));
            all.sort();
            let mut w0 = w0_positions(n);
            w0.sort();
            assert_eq!(all, w0, "n = {n}");
        }
    }

    #[test]
    fn zero_matrix_has_monomial_invariant() {
        for n in 2..8 {
            let b = SymMatrix::zero(Integers, n);
            assert_eq!(inv(&b), MonicPoly::monomial(Integers, n));
        }
    }

    #[test]
    fn inv_over_rationals_and_finite_rings() {
        let b = SymMatrix::from_i64_rows(Integers, 3, &[0, 2, -1, 2, 3, 5, -1, 5, 7]).unwrap();
        let f = inv(&b);
        let (a, c, d, e, h) = (2i64, -1, 3, 5, 7);
        let expected = [2 * c + d, c * c + 2 * c * d - 2 * a * e, c * c * d - 2 * a * e * c + a * a * h];
        assert_eq!(f, MonicPoly::from_ints(&expected));
        let half = b.map_to(Rationals).unwrap().scale(&BigRational::new(1.into(), 2.into()));
        let fh = inv(&half);
        for i in 1..=3 {
            let want = q(expected[i - 1]) / q(1 << i);
            assert_eq!(fh.coeff(i), &want);
        }
        let b7 = b.map_to(ZMod::new(7).unwrap()).unwrap();
        assert_eq!(inv(&b7), MonicPoly::from_ints(&expected).map_to(ZMod::new(7).unwrap()).unwrap());
    }

    #[test]
    fn frozen_heights() {
        assert_eq!(height(&MonicPoly::monomial(Integers, 4)), 0.0);
        assert!((height(&MonicPoly::from_ints(&[0, 0, -8])) - 2.0).abs() < 1e-12);
        assert!(!height_below(&MonicPoly::from_ints(&[3, 2, 5]), &BigInt::from(2)));
        assert!(height_below(&MonicPoly::from_ints(&[1, 3, 7]), &BigInt::from(2)));
        assert!(!height_below(&MonicPoly::from_ints(&[1, 4, 7]), &BigInt::from(2)));
    }

    #[test]
    fn frozen_lambda_and_zpoly() {
        let mut b3 = ReducibleMatrix::new(SymMatrix::zero(Integers, 3)).unwrap();
        b3.set(1, 2, 5.into()).unwrap();
        assert_eq!(lambda(&b3), BigInt::from(5));
        let mut b5 = ReducibleMatrix::new(SymMatrix::zero(Integers, 5)).unwrap();
        b5.set(1, 4, 2.into()).unwrap();
        b5.set(2, 3, 3.into()).unwrap();
        assert_eq!(lambda(&b5), BigInt::from(54));
        let mut b4 = ReducibleMatrix::new(SymMatrix::zero(Integers, 4)).unwrap();
        b4.set(1, 3, 2.into()).unwrap();
        b4.set(2, 2, 3.into()).unwrap();
        assert_eq!(lambda(&b4), BigInt::from(6));
        let z = |n: usize, v: &[i64]| zpoly(&Integers, n, &v.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>());
        assert_eq!(z(3, &[2]).unwrap(), BigInt::from(4));
        assert_eq!(z(5, &[2, 3]).unwrap(), BigInt::from(324));
        assert_eq!(z(4, &[2, 3]).unwrap(), BigInt::from(36));
        assert!(matches!(z(5, &[2]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn zpoly_over_product_is_lambda_pattern_for_odd_n() {
        for n in [3usize, 5, 7, 9] {
            let b: Vec<BigInt> = (0..n / 2).map(|k| BigInt::from(k as i64 + 2)).collect();
            let z = zpoly(&Integers, n, &b).unwrap();
            let prod: BigInt = b.iter().product();
            let mut m = ReducibleMatrix::new(SymMatrix::zero(Integers, n)).unwrap();
            for (k, (i, j)) in slicing_positions(n).into_iter().enumerate() {
                m.set(i, j, b[k].clone()).unwrap();
            }
            assert_eq!(z / prod, lambda(&m));
        }
    }

    #[test]
    fn sigma0_of_monomial() {
        let s = sigma0(&MonicPoly::monomial(Integers, 3)).unwrap();
        assert_eq!(s.get(1, 2), &BigInt::one());
        assert_eq!(inv(&s), MonicPoly::monomial(Integers, 3));
        let f = MonicPoly::from_ints(&[0, 1, 1]);
        assert!(matches!(sigma0(&f), Err(Error::HalvingError(_))));
        let g = MonicPoly::from_ints(&[0, 2, 1]);
        assert_eq!(inv(&sigma0(&g).unwrap()), g);
        let fq = MonicPoly::from_i64(Rationals, &[0, 1, 1]).unwrap();
        assert_eq!(inv(&sigma0(&fq).unwrap()), fq);
    }

    /// Search every sign vector on the free entries and check that the
    /// shipped rule is the unique one making `inv(sigma0(f)) = f`.
    #[test]
    fn sigma0_sign_calibration() {
        for n in 3..=8usize {
            // Two generic rational polynomials with distinct coefficients.
            let fs: Vec<MonicPoly<Rationals>> = [[3i64, -5, 7, 11, -13, 17, 19, -23], [2, 9, -4, 6, 10, -8, 14, 12]]
                .iter()
                .map(|c| MonicPoly::from_i64(Rationals, &c[..n]).unwrap())
                .collect();
            let base: Vec<ReducibleMatrix<Rationals>> = fs.iter().map(|f| sigma0(f).unwrap()).collect();
            let mut good = Vec::new();
            for mask in 0u32..(1 << n) {
                let ok = fs.iter().zip(&base).all(|(f, b)| {
                    let mut m = b.clone();
                    for (k, (i, j)) in free_positions(n).into_iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            let v = -m.get(i, j).clone();
                            m.set(i, j, v).unwrap();
                        }
                    }
                    inv(&m) == *f
                });
                if ok {
                    good.push(mask);
                }
            }
            assert_eq!(good, vec![0], "n = {n}");
        }
    }

    #[test]
    fn sigma_rescaling() {
        let f = MonicPoly::new(Reals, vec![0.5, -3.0, 10.0]).unwrap();
        let s = sigma(&f).unwrap();
        let g = inv(&s);
        for i in 1..=3 {
            assert!((g.coeff(i) - f.coeff(i)).abs() < 1e-9);
        }
        let f1 = MonicPoly::new(Reals, vec![0.5, -1.0, 0.25]).unwrap();
        assert_eq!(sigma(&f1).unwrap(), sigma0(&f1).unwrap());
    }

    #[test]
    fn frozen_strata() {
        assert_eq!(stratify(&MonicPoly::from_ints(&[0, -1, 0])).unwrap(), 3);
        assert_eq!(stratify(&MonicPoly::from_ints(&[0, 0, 0, 1])).unwrap(), 0);
        assert_eq!(stratify(&MonicPoly::from_ints(&[0, 1, 1])).unwrap(), 1);
        assert!(stratify(&MonicPoly::from_ints(&[0, 0, 0])).is_err());
        assert!(in_u_r(&MonicPoly::from_ints(&[0, -1, 0]), 3));
    }

    #[test]
    fn json_round_trip() {
        let b = SymMatrix::from_i64_rows(Integers, 3, &[0, 2, -1, 2, 3, 5, -1, 5, 7]).unwrap();
        let j = b.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: SymJson = serde_json::from_str(&s).unwrap();
        assert_eq!(SymMatrix::from_json(Integers, &back).unwrap(), b);
        assert!(s.contains("\"ring\":\"Z\""));
    }
}
