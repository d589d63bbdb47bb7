//! The orthogonal group of the anti-diagonal form, its lower-triangular
//! parabolic subgroup, and the action on symmetric matrices.
//!
//! Conventions:
//! * `act(g, B) = g B g^T`. This is a left action that preserves the
//!   invariant polynomial, and lower-triangular `g` map `W0` to itself.
//! * For odd `n` the group is `SO`: `g^T A g = A`, `det g = 1`.
//! * For even `n` the group is `O/mu_2`, realized as similitudes
//!   `g^T A g = c A` (`c` a unit) modulo scalars, acting by
//!   `B -> g B g^T / c`. Over `Z` the scalars are `+-1` and this is the
//!   class of `g` up to sign; over a field it is the projective group.
//!   Elements are stored normalized: the first entry that is a unit (for
//!   `Z`, the first nonzero entry) is scaled to the ring's representative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{bareiss_det, Integers, Ring, RingTag};
use crate::rep::{w0_positions, AntiDiagonalForm, ReducibleMatrix, SymMatrix};

/// Index pairs `(i, j)` of the unipotent coordinates: `i = 2..n-1`,
/// `j = 1..min(i-1, n-i)`. For even `n` this never includes `(n/2+1, n/2)`.
pub fn unipotent_indices(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 2..n {
        for j in 1..=(i - 1).min(n - i) {
            v.push((i, j));
        }
    }
    v
}

/// Whether `u_ij` needs the quadratic correction (odd `n`, middle row).
pub fn is_middle_row(n: usize, i: usize) -> bool {
    n % 2 == 1 && 2 * i == n + 1
}

/// An element of `G(R)`, stored as a matrix together with its multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElem<R: Ring> {
    ring: R,
    n: usize,
    mat: Vec<R::Elem>,
    mult: R::Elem,
}

fn mat_mul<R: Ring>(ring: &R, n: usize, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ring.zero();
            for k in 0..n {
                let x = &a[i * n + k];
                if ring.is_zero(x) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(x, &b[k * n + j]));
            }
            out.push(acc);
        }
    }
    out
}

fn transpose<T: Clone>(n: usize, a: &[T]) -> Vec<T> {
    (0..n * n).map(|k| a[(k % n) * n + k / n].clone()).collect()
}

/// Determinant through the rational lift.
pub fn det<R: Ring>(ring: &R, n: usize, a: &[R::Elem]) -> R::Elem {
    let q: Vec<BigRational> = a.iter().map(|x| ring.to_rational(x)).collect();
    let d = q.iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| (&q[i * n + j] * BigRational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    let det = BigRational::new(bareiss_det(m), num_traits::pow(d, n));
    ring.from_rational(&det).expect("determinant is integral in the entries")
}

impl<R: Ring> GroupElem<R> {
    pub fn identity(ring: R, n: usize) -> Self {
        let mat = (0..n * n).map(|k| if k / n == k % n { ring.one() } else { ring.zero() }).collect();
        let mult = ring.one();
        GroupElem { ring, n, mat, mult }
    }

    /// Validate membership and normalize. Fails unless `g^T A g = c A` with
    /// `c = 1, det g = 1` (odd `n`) or `c` a unit (even `n`).
    pub fn from_matrix(ring: R, n: usize, mat: Vec<R::Elem>) -> Result<Self> {
        if mat.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: mat.len() });
        }
        let a = AntiDiagonalForm { n }.matrix(&ring);
        let gta = mat_mul(&ring, n, &transpose(n, &mat), &a);
        let m = mat_mul(&ring, n, &gta, &mat);
        let c = m[n - 1].clone();
        for k in 0..n * n {
            let want = if k / n + k % n == n - 1 { c.clone() } else { ring.zero() };
            if !ring.eq_elem(&m[k], &want) {
                return Err(Error::NotInGroup("g^T A g is not a multiple of A".into()));
            }
        }
        if n % 2 == 1 {
            if !ring.eq_elem(&c, &ring.one()) {
                return Err(Error::NotInGroup("multiplier is not 1".into()));
            }
            if !ring.eq_elem(&det(&ring, n, &mat), &ring.one()) {
                return Err(Error::NotInGroup("determinant is not 1".into()));
            }
        } else if !ring.is_unit(&c) {
            return Err(Error::NotInGroup("multiplier is not a unit".into()));
        }
        Ok(GroupElem { ring, n, mat, mult: c }.normalized())
    }

    fn normalized(mut self) -> Self {
        if self.n % 2 == 1 {
            return self;
        }
        let u = self.mat.iter().find_map(|x| self.ring.scalar_normalizer(x));
        if let Some(u) = u {
            let r = &self.ring;
            self.mat = self.mat.iter().map(|x| r.mul(x, &u)).collect();
            self.mult = r.mul(&self.mult, &r.mul(&u, &u));
        }
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `g_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.mat[(i - 1) * self.n + (j - 1)]
    }

    /// Row-major matrix of the stored representative.
    pub fn matrix(&self) -> &[R::Elem] {
        &self.mat
    }

    /// The similitude factor `c` with `g^T A g = c A` (1 for odd `n`).
    pub fn multiplier(&self) -> &R::Elem {
        &self.mult
    }

    /// Even `n`: the element is a class modulo scalars.
    pub fn is_sign_class(&self) -> bool {
        self.n % 2 == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = &self.ring;
        GroupElem {
            ring: r.clone(),
            n: self.n,
            mat: mat_mul(r, self.n, &self.mat, &other.mat),
            mult: r.mul(&self.mult, &other.mult),
        }
        .normalized()
    }

    /// `g^-1 = c^-1 A g^T A`.
    pub fn inverse(&self) -> Self {
        let r = &self.ring;
        let n = self.n;
        let ci = r.inverse(&self.mult).expect("multiplier is a unit");
        let gt = transpose(n, &self.mat);
        let mat = (0..n * n).map(|k| r.mul(&ci, &gt[(n - 1 - k / n) * n + (n - 1 - k % n)])).collect();
        GroupElem { ring: r.clone(), n, mat, mult: ci }.normalized()
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElem::identity(self.ring.clone(), self.n)
    }

    /// Lower-triangular, i.e. in the parabolic subgroup. Scalars do not affect this.
    pub fn is_in_p(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| self.ring.is_zero(&self.mat[i * n + j])))
    }

    /// Recheck the membership equations.
    pub fn check_membership(&self) -> bool {
        GroupElem::from_matrix(self.ring.clone(), self.n, self.mat.clone()).is_ok()
    }

    pub fn map_to<S: Ring>(&self, target: S) -> Result<GroupElem<S>> {
        let conv = |x: &R::Elem| {
            let q = self.ring.to_rational(x);
            target.from_rational(&q).ok_or_else(|| Error::RingMismatch(format!("{q} does not map to {}", target.tag())))
        };
        let mat = self.mat.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let mult = conv(&self.mult)?;
        Ok(GroupElem { ring: target, n: self.n, mat, mult }.normalized())
    }
}

/// `g . B = g B g^T / c`.
pub fn act<R: Ring>(g: &GroupElem<R>, b: &SymMatrix<R>) -> SymMatrix<R> {
    let r = g.ring();
    let n = g.n();
    assert_eq!(n, b.n(), "dimension mismatch");
    let gb = mat_mul(r, n, g.matrix(), b.rows());
    let mut out = mat_mul(r, n, &gb, &transpose(n, g.matrix()));
    if n % 2 == 0 {
        let ci = r.inverse(g.multiplier()).expect("multiplier is a unit");
        out = out.iter().map(|x| r.mul(x, &ci)).collect();
    }
    SymMatrix::from_rows(r.clone(), n, out).expect("congruence preserves symmetry")
}

/// `act` restricted to `W0`; `g` must lie in the parabolic subgroup.
pub fn act_w0<R: Ring>(g: &GroupElem<R>, b: &ReducibleMatrix<R>) -> ReducibleMatrix<R> {
    debug_assert!(g.is_in_p());
    ReducibleMatrix::new(act(g, b.as_sym())).expect("the parabolic subgroup preserves W0")
}

/// `u_ij(v) = exp(v (E_ij - E_{n+1-j, n+1-i}))`; in the middle row of odd `n`
/// the exponential carries the term `-(v^2/2) E_{n+1-j, j}`.
pub fn unipotent_gen<R: Ring>(ring: &R, n: usize, i: usize, j: usize, v: &R::Elem) -> Result<GroupElem<R>> {
    if !(2..n).contains(&i) || j == 0 || j > (i - 1).min(n - i) {
        return Err(Error::IndexError(format!("no unipotent coordinate ({i}, {j}) for n = {n}")));
    }
    let mut g = GroupElem::identity(ring.clone(), n);
    let set = |g: &mut GroupElem<R>, a: usize, b: usize, x: R::Elem| {
        let k = (a - 1) * n + (b - 1);
        g.mat[k] = ring.add(&g.mat[k], &x);
    };
    set(&mut g, i, j, v.clone());
    set(&mut g, n + 1 - j, n + 1 - i, ring.neg(v));
    if is_middle_row(n, i) {
        let q = ring.to_rational(v);
        let half_sq = &q * &q / BigInt::from(2);
        let h = ring.from_rational(&half_sq).ok_or_else(|| Error::HalvingError(format!("{}^2", ring.format_elem(v))))?;
        set(&mut g, n + 1 - j, j, ring.neg(&h));
    }
    debug_assert!(g.check_membership());
    Ok(g)
}

/// Torus coordinates `s_1..s_{floor(n/2)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusCoords<R: Ring> {
    pub s: Vec<R::Elem>,
}

impl<R: Ring> TorusCoords<R> {
    pub fn new(s: Vec<R::Elem>) -> Self {
        TorusCoords { s }
    }

    /// The diagonal `t_1..t_n`. Odd `n`: `t_i = prod_{k>=i} s_k^-1`, middle 1.
    /// Even `n = 2h`: with `r = sqrt(s_{h-1} s_h)`, `t_i = r^-1 prod_{k=i}^{h-2} s_k^-1`
    /// for `i < h` and `t_h = r^-1 s_{h-1}`. Always `t_i t_{n+1-i} = 1`.
    pub fn diagonal(&self, ring: &R, n: usize) -> Result<Vec<R::Elem>> {
        let h = n / 2;
        if self.s.len() != h {
            return Err(Error::LengthMismatch { expected: h, got: self.s.len() });
        }
        let inv: Vec<R::Elem> = self
            .s
            .iter()
            .map(|x| ring.inverse(x).ok_or_else(|| Error::NotInvertible(ring.format_elem(x))))
            .collect::<Result<_>>()?;
        let mut t = vec![ring.one(); n];
        if n % 2 == 1 {
            for i in 1..=h {
                t[i - 1] = (i..=h).fold(ring.one(), |acc, k| ring.mul(&acc, &inv[k - 1]));
            }
        } else {
            let prod = ring.mul(&self.s[h - 2], &self.s[h - 1]);
            let root = ring.sqrt(&prod).ok_or_else(|| Error::NotASquare(ring.format_elem(&prod)))?;
            let root_inv = ring.inverse(&root).ok_or_else(|| Error::NotInvertible(ring.format_elem(&root)))?;
            for i in 1..h {
                t[i - 1] = (i..=h.saturating_sub(2)).fold(root_inv.clone(), |acc, k| ring.mul(&acc, &inv[k - 1]));
            }
            t[h - 1] = ring.mul(&root_inv, &self.s[h - 2]);
        }
        for i in 1..=n.div_ceil(2) {
            if 2 * i != n + 1 {
                t[n - i] = ring.inverse(&t[i - 1]).expect("torus entries are units");
            }
        }
        Ok(t)
    }
}

/// Diagonal torus element `diag(t_1..t_n)`.
pub fn torus_elem<R: Ring>(ring: &R, n: usize, s: &TorusCoords<R>) -> Result<GroupElem<R>> {
    let t = s.diagonal(ring, n)?;
    diag_elem(ring, &t)
}

/// A diagonal group element; validates membership.
pub fn diag_elem<R: Ring>(ring: &R, t: &[R::Elem]) -> Result<GroupElem<R>> {
    let n = t.len();
    let mat = (0..n * n).map(|k| if k / n == k % n { t[k / n].clone() } else { ring.zero() }).collect();
    GroupElem::from_matrix(ring.clone(), n, mat)
}

/// Exponents of `s_i` in the Haar density `delta(s)`.
pub fn haar_delta_exponents(n: usize) -> Vec<i64> {
    let h = n / 2;
    let n = n as i64;
    if n % 2 == 1 {
        let g = h as i64;
        (1..=g).map(|i| i * i - 2 * i * g).collect()
    } else {
        let pair = -(n * n - 2 * n) / 8;
        let mut e: Vec<i64> = (1..=h as i64).map(|i| i * i - i * (n - 1)).collect();
        e[h - 2] = pair;
        e[h - 1] = pair;
        e
    }
}

/// `delta(s)`, the density of the Haar measure in torus coordinates.
pub fn haar_delta<R: Ring>(ring: &R, n: usize, s: &TorusCoords<R>) -> Result<R::Elem> {
    if s.s.len() != n / 2 {
        return Err(Error::LengthMismatch { expected: n / 2, got: s.s.len() });
    }
    s.s.iter().zip(haar_delta_exponents(n)).try_fold(ring.one(), |acc, (x, e)| {
        let p = ring.powi(x, e).ok_or_else(|| Error::NotInvertible(ring.format_elem(x)))?;
        Ok(ring.mul(&acc, &p))
    })
}

/// All diagonal `+-1` matrices in `O_A(Z)`; there are `2^ceil(n/2)`.
pub fn gamma_group_raw(n: usize) -> Vec<Vec<i64>> {
    let free = n.div_ceil(2);
    (0u32..1 << free)
        .map(|mask| {
            let mut t = vec![1i64; n];
            for i in 0..free {
                if mask >> i & 1 == 1 {
                    t[i] = -1;
                    t[n - 1 - i] = -1;
                }
            }
            t
        })
        .collect()
}

/// The diagonal `+-1` group intersected with `G`: determinant one for odd
/// `n`, one representative per sign class for even `n`.
pub fn gamma_group(n: usize) -> Vec<GroupElem<Integers>> {
    let mut out: Vec<GroupElem<Integers>> = Vec::new();
    for t in gamma_group_raw(n) {
        let t: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
        if let Ok(g) = diag_elem(&Integers, &t) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Draw a random unit; integers and small finite rings have few, fields many.
fn random_unit<R: Ring, G: Rng>(ring: &R, bound: i64, rng: &mut G) -> R::Elem {
    for _ in 0..64 {
        let mut v = rng.gen_range(-bound..=bound);
        if v == 0 {
            v = 1;
        }
        let x = ring.from_i64(v);
        if ring.is_unit(&x) {
            return x;
        }
    }
    if rng.gen_bool(0.5) {
        ring.one()
    } else {
        ring.neg(&ring.one())
    }
}

/// Random element of the parabolic subgroup: a random torus element (units
/// drawn from `[-bound, bound]`), followed by every unipotent generator with
/// a parameter from `[-bound, bound]` (even in the middle row when 2 is not a unit).
pub fn random_p_with<R: Ring, G: Rng>(ring: &R, n: usize, bound: i64, rng: &mut G) -> GroupElem<R> {
    let bound = bound.max(1);
    let h = n / 2;
    let mut t = vec![ring.one(); n];
    let c = if n % 2 == 0 { random_unit(ring, bound, rng) } else { ring.one() };
    for i in 0..h {
        t[i] = random_unit(ring, bound, rng);
        let ti = ring.inverse(&t[i]).expect("unit");
        t[n - 1 - i] = ring.mul(&c, &ti);
    }
    let mut g = diag_elem(ring, &t).expect("diagonal similitude");
    let two_unit = ring.is_unit(&ring.from_i64(2));
    for (i, j) in unipotent_indices(n) {
        let mut v = rng.gen_range(-bound..=bound);
        if is_middle_row(n, i) && !two_unit {
            v *= 2;
        }
        let u = unipotent_gen(ring, n, i, j, &ring.from_i64(v)).expect("valid generator");
        g = g.mul(&u);
    }
    g
}

/// `random_p_with` on a ChaCha stream seeded by `seed`.
pub fn random_p<R: Ring>(ring: &R, n: usize, bound: i64, seed: u64) -> GroupElem<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_p_with(ring, n, bound, &mut rng)
}

/// Determinant of `B -> g . B` as a linear map of `W0` (exact rational),
/// for `g` in the parabolic subgroup.
pub fn w0_modulus<R: Ring>(g: &GroupElem<R>) -> BigRational {
    let n = g.n();
    let pos = w0_positions(n);
    let gq = g.map_to(crate::exactmath::Rationals).expect("rational lift");
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    for &(i, j) in &pos {
        let mut e = SymMatrix::zero(crate::exactmath::Rationals, n);
        e.set(i, j, BigRational::one());
        let img = act(&gq, &e);
        cols.push(pos.iter().map(|&(a, b)| img.get(a, b).clone()).collect());
    }
    let d = cols.iter().flatten().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let m: Vec<Vec<BigInt>> = (0..pos.len())
        .map(|r| cols.iter().map(|col| (&col[r] * BigRational::from_integer(d.clone())).to_integer()).collect())
        .collect();
    BigRational::new(bareiss_det(m), num_traits::pow(d, pos.len()))
}

/// JSON form of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub ring: RingTag,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sign_class: bool,
}

impl<R: Ring> GroupElem<R> {
    pub fn to_json(&self) -> GroupJson {
        let n = self.n;
        GroupJson {
            n,
            ring: self.ring.tag(),
            rows: (0..n).map(|i| (0..n).map(|j| self.ring.format_elem(&self.mat[i * n + j])).collect()).collect(),
            sign_class: self.is_sign_class(),
        }
    }

    pub fn from_json(ring: R, j: &GroupJson) -> Result<Self> {
        if j.ring != ring.tag() {
            return Err(Error::RingMismatch(format!("expected {}, got {}", ring.tag(), j.ring)));
        }
        if j.rows.len() != j.n || j.rows.iter().any(|r| r.len() != j.n) {
            return Err(Error::LengthMismatch { expected: j.n, got: j.rows.len() });
        }
        let mat = j.rows.iter().flatten().map(|s| ring.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        GroupElem::from_matrix(ring, j.n, mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{Rationals, ZMod};
    use crate::rep::{inv, lambda};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn n3_unipotent_entries() {
        let g = unipotent_gen(&Integers, 3, 2, 1, &BigInt::from(4)).unwrap();
        assert_eq!(g.get(2, 1), &BigInt::from(4));
        assert_eq!(g.get(3, 2), &BigInt::from(-4));
        assert_eq!(g.get(3, 1), &BigInt::from(-8));
        assert!(matches!(unipotent_gen(&Integers, 3, 2, 1, &BigInt::from(3)), Err(Error::HalvingError(_))));
        let h = unipotent_gen(&ZMod::new(8).unwrap(), 3, 2, 1, &6u64).unwrap();
        assert_eq!(h.get(3, 1), &((8 - 18 % 8) % 8));
    }

    #[test]
    fn one_parameter_subgroups() {
        for n in 2..8 {
            for (i, j) in unipotent_indices(n) {
                let a = unipotent_gen(&Rationals, n, i, j, &q(3, 2)).unwrap();
                let b = unipotent_gen(&Rationals, n, i, j, &q(-5, 7)).unwrap();
                let c = unipotent_gen(&Rationals, n, i, j, &(q(3, 2) + q(-5, 7))).unwrap();
                assert_eq!(a.mul(&b), c);
                assert!(a.is_in_p());
            }
        }
    }

    #[test]
    fn random_elements_are_members() {
        for n in 2..8 {
            for seed in 0..4 {
                let g = random_p(&Integers, n, 5, seed);
                assert!(g.check_membership() && g.is_in_p());
                assert!(g.mul(&g.inverse()).is_identity());
                let g = random_p(&Rationals, n, 5, seed);
                assert!(g.check_membership() && g.mul(&g.inverse()).is_identity());
                for m in [7u64, 8, 9] {
                    let g = random_p(&ZMod::new(m).unwrap(), n, 20, seed);
                    assert!(g.check_membership() && g.mul(&g.inverse()).is_identity());
                }
            }
        }
        assert_eq!(random_p(&Integers, 5, 5, 11), random_p(&Integers, 5, 5, 11));
    }

    #[test]
    fn action_preserves_invariant_and_w0() {
        for n in 2..8 {
            let coords: Vec<BigInt> = (0..w0_positions(n).len()).map(|k| BigInt::from((k as i64 * 7) % 5 - 2)).collect();
            let b = ReducibleMatrix::from_w0_coords(Integers, n, &coords).unwrap();
            for seed in 0..3 {
                let g = random_p(&Integers, n, 3, seed);
                let gb = act_w0(&g, &b);
                assert_eq!(inv(gb.as_sym()), inv(b.as_sym()));
                let back = act_w0(&g.inverse(), &gb);
                assert_eq!(back, b);
            }
        }
    }

    #[test]
    fn sign_classes_for_even_n() {
        let n = 4;
        let g = random_p(&Integers, n, 3, 1);
        let neg: Vec<BigInt> = g.matrix().iter().map(|x| -x).collect();
        assert_eq!(GroupElem::from_matrix(Integers, n, neg).unwrap(), g);
        assert!(g.is_sign_class());
        assert!(g.get(1, 1) > &BigInt::from(0));
    }

    #[test]
    fn parabolic_count_over_small_fields() {
        for p in [2u64, 3, 5] {
            let r = ZMod::new(p).unwrap();
            let mut count = 0;
            for t in 0..p.pow(6) {
                let mut d = t;
                let mut digit = || {
                    let x = d % p;
                    d /= p;
                    x
                };
                let (a, b, c, e, f, g) = (digit(), digit(), digit(), digit(), digit(), digit());
                let m = vec![a, 0, 0, b, c, 0, e, f, g];
                if GroupElem::from_matrix(r, 3, m).is_ok() {
                    count += 1;
                }
            }
            assert_eq!(count, p * (p - 1));
        }
    }

    #[test]
    fn torus_diagonal() {
        let t = TorusCoords::new(vec![q(2, 1), q(3, 1)]).diagonal(&Rationals, 5).unwrap();
        assert_eq!(t, vec![q(1, 6), q(1, 3), q(1, 1), q(3, 1), q(6, 1)]);
        // n = 4: s_1 s_2 = 8 * 2 = 16, root 4.
        let t = TorusCoords::new(vec![q(8, 1), q(2, 1)]).diagonal(&Rationals, 4).unwrap();
        assert_eq!(t, vec![q(1, 4), q(2, 1), q(1, 2), q(4, 1)]);
        assert!(matches!(
            TorusCoords::new(vec![q(2, 1), q(1, 1)]).diagonal(&Rationals, 4),
            Err(Error::NotASquare(_))
        ));
    }

    // Transporting |lambda| dB along the torus scales by delta(s)^-1.
    #[test]
    fn character_identity() {
        let squares = [1i64, 4, 9];
        for n in 2..8 {
            let h = n / 2;
            for seed in 0..3i64 {
                let mut s: Vec<BigRational> = (0..h).map(|i| q(2 + (i as i64 + seed) % 3, 1 + seed)).collect();
                if n % 2 == 0 && h >= 2 {
                    s[h - 1] = &s[h - 2] * q(squares[seed as usize], 1);
                } else if n % 2 == 0 {
                    continue;
                }
                let ts = TorusCoords::new(s.clone());
                let g = torus_elem(&Rationals, n, &ts).unwrap();
                let coords: Vec<BigRational> =
                    (0..w0_positions(n).len()).map(|k| q((k as i64 * 5 + seed) % 7 + 1, 1)).collect();
                let b = ReducibleMatrix::from_w0_coords(Rationals, n, &coords).unwrap();
                let lhs = lambda(&act_w0(&g, &b)) * w0_modulus(&g);
                let delta = haar_delta(&Rationals, n, &ts).unwrap();
                assert_eq!(lhs, lambda(&b) / delta, "n = {n}, seed = {seed}");
            }
            for (i, j) in unipotent_indices(n) {
                let u = unipotent_gen(&Rationals, n, i, j, &q(5, 3)).unwrap();
                assert_eq!(w0_modulus(&u), q(1, 1));
            }
        }
    }

    #[test]
    fn gamma_sizes_and_conjugation() {
        for n in 1..9 {
            assert_eq!(gamma_group_raw(n).len(), 1 << n.div_ceil(2));
            let gam = gamma_group(n);
            let expect = if n % 2 == 1 { 1 << (n / 2) } else { 1 << (n / 2 - 1) };
            assert_eq!(gam.len(), expect, "n = {n}");
            let u = random_p(&Integers, n, 4, 3);
            for rho in &gam {
                let c = rho.mul(&u).mul(&rho.inverse());
                for k in 0..n * n {
                    let a = &c.matrix()[k];
                    let b = &u.matrix()[k];
                    assert!(a == b || *a == -b);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for n in [3, 4] {
            let g = random_p(&Integers, n, 4, 9);
            let j = g.to_json();
            assert_eq!(j.sign_class, n == 4);
            let s = serde_json::to_string(&j).unwrap();
            let back = GroupElem::from_json(Integers, &serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, g);
        }
    }
}
