//! p-adic computations: lambda-density integrals over families, local orbit
//! counts `c_p(f)`, Euler factors and products, and the Jacobian constant.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn pow_u64(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut r, mut b) = (1u128 % m as u128, b as u128 % m as u128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::padic::val_i128;
use crate::exactmath::{
    discriminant_int, format_rational, inv_mod, is_prime, padic_val_int, padic_val_rat, Interval, MonicPoly, Ring,
    Valuation, ZMod,
};
use crate::group::{act, diag_elem, is_middle_row, unipotent_gen, unipotent_indices, GroupElem};
use crate::reduction::enumerate_parabolic;
use crate::rep::{
    free_positions, inv_i128, inv_rational, lambda_exponents, slicing_positions, sweep_steps, w0_positions, weight,
    zpoly_exponents, ReducibleMatrix, SymMatrix,
};

/// `p^e` as a rational, `e` of either sign.
fn ppow(p: u64, e: i64) -> BigRational {
    let b = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

fn abs_p(x: &BigInt, p: u64) -> BigRational {
    match padic_val_int(x, p) {
        Valuation::Finite(v) => ppow(p, -v),
        Valuation::Infinite => BigRational::zero(),
    }
}

/// Where each coordinate of `W0` sits in the reduction: slicing entries,
/// sweep targets, and the free entry of each weight.
#[derive(Debug, Clone)]
pub struct Layout {
    pub n: usize,
    pub positions: Vec<(usize, usize)>,
    pub slicing: Vec<usize>,
    pub targets: Vec<TargetSlot>,
    /// `free[m-1]` is the coordinate of weight `m` solved from `f_m`.
    pub free: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct TargetSlot {
    pub coord: usize,
    pub slice: usize,
    pub middle: bool,
    pub weight: usize,
}

impl TargetSlot {
    /// Middle-row targets move by even multiples at `p = 2`.
    pub fn step(&self, p: u64) -> u64 {
        if self.middle && p == 2 {
            2
        } else {
            1
        }
    }
}

impl Layout {
    pub fn new(n: usize) -> Self {
        let positions = w0_positions(n);
        let idx = |q: (usize, usize)| positions.iter().position(|x| *x == q).expect("position in W0");
        let slicing = slicing_positions(n).into_iter().map(idx).collect();
        let targets = sweep_steps(n)
            .into_iter()
            .map(|s| TargetSlot { coord: idx(s.target), slice: s.slice, middle: s.middle, weight: weight(n, s.target) })
            .collect();
        let free = free_positions(n).into_iter().map(idx).collect();
        Layout { n, positions, slicing, targets, free }
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    /// Full symmetric row-major matrix from `W0` coordinates.
    pub fn rows<T: Clone>(&self, coords: &[T], zero: T) -> Vec<T> {
        let n = self.n;
        let mut m = vec![zero; n * n];
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            m[(i - 1) * n + (j - 1)] = coords[k].clone();
            m[(j - 1) * n + (i - 1)] = coords[k].clone();
        }
        m
    }

    /// Coordinates that are neither free nor... i.e. slicing and targets.
    pub fn fixed_coords(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.slicing.clone();
        v.extend(self.targets.iter().map(|t| t.coord));
        v
    }
}

fn inv_mod_q(lay: &Layout, coords: &[i128], q: i128) -> Vec<i128> {
    inv_i128(lay.n, &lay.rows(coords, 0)).into_iter().map(|c| c.rem_euclid(q)).collect()
}

/// `coef_m = d f_m / d x_m` is a monomial `c_m prod s_i^{a_{m,i}}` in the
/// slicing entries alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeJacobian {
    pub constants: Vec<i128>,
    pub exponents: Vec<Vec<u32>>,
}

impl FreeJacobian {
    pub fn new(n: usize) -> Self {
        let lay = Layout::new(n);
        let h = n / 2;
        let coef = |m: usize, s: &[i128]| -> i128 {
            let mut c = vec![0i128; lay.dim()];
            for (i, &k) in lay.slicing.iter().enumerate() {
                c[k] = s[i];
            }
            let g0 = inv_i128(n, &lay.rows(&c, 0))[m - 1];
            c[lay.free[m - 1]] = 1;
            inv_i128(n, &lay.rows(&c, 0))[m - 1] - g0
        };
        let mut constants = Vec::new();
        let mut exponents = Vec::new();
        for m in 1..=n {
            let c0 = coef(m, &vec![1; h]);
            assert_ne!(c0, 0, "free coefficient of weight {m} vanishes");
            let mut ex = Vec::new();
            for i in 0..h {
                let mut s = vec![1i128; h];
                s[i] = 2;
                let r = coef(m, &s) / c0;
                assert!(r > 0 && (r & (r - 1)) == 0, "coefficient is not a monomial");
                let a = r.trailing_zeros();
                s[i] = 3;
                assert_eq!(coef(m, &s), c0 * 3i128.pow(a));
                ex.push(a);
            }
            constants.push(c0);
            exponents.push(ex);
        }
        FreeJacobian { constants, exponents }
    }

    pub fn constant(&self) -> BigInt {
        self.constants.iter().fold(BigInt::one(), |a, c| a * BigInt::from(*c))
    }

    /// Exponent of each slicing entry in `prod_m coef_m`.
    pub fn total_exponents(&self) -> Vec<u32> {
        let h = self.exponents.first().map_or(0, |e| e.len());
        (0..h).map(|i| self.exponents.iter().map(|e| e[i]).sum()).collect()
    }

    /// `coef_m` at slicing values `s`.
    pub fn coef_at(&self, m: usize, s: &[BigInt]) -> BigInt {
        s.iter().zip(&self.exponents[m - 1]).fold(BigInt::from(self.constants[m - 1]), |acc, (x, a)| {
            acc * num_traits::pow(x.clone(), *a as usize)
        })
    }

    fn coef_mod(&self, m: usize, s: &[i128], q: i128) -> i128 {
        s.iter().zip(&self.exponents[m - 1]).fold(self.constants[m - 1].rem_euclid(q), |acc, (x, a)| {
            (0..*a).fold(acc, |acc, _| (acc * x).rem_euclid(q))
        })
    }
}

fn jacobian_cache(n: usize) -> FreeJacobian {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<usize, FreeJacobian>>> = OnceLock::new();
    let m = CACHE.get_or_init(Default::default);
    let mut g = m.lock().expect("cache lock");
    g.entry(n).or_insert_with(|| FreeJacobian::new(n)).clone()
}

/// A congruence condition at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Condition {
    /// All of `W0(Z_p)`.
    Full,
    /// `lambda(B)` is a p-adic unit.
    UnitLambda,
    /// `inv(B) mod p^j` is one of the listed coefficient vectors `[f_1..f_n]`.
    InvIn { j: u32, residues: Vec<Vec<u64>> },
    /// `B mod p^j` is one of the listed `W0` coordinate vectors.
    Residues { j: u32, points: Vec<Vec<u64>> },
}

static FULL: Condition = Condition::Full;

/// A big family: congruence conditions at finitely many primes, the full
/// `W0(Z_p)` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n: usize,
    #[serde(default)]
    pub conditions: BTreeMap<u64, Condition>,
}

impl FamilySpec {
    pub fn full(n: usize) -> Self {
        FamilySpec { n, conditions: BTreeMap::new() }
    }

    pub fn with(mut self, p: u64, c: Condition) -> Self {
        self.conditions.insert(p, c);
        self
    }

    pub fn condition(&self, p: u64) -> &Condition {
        self.conditions.get(&p).unwrap_or(&FULL)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.conditions.iter().filter(|(_, c)| **c != Condition::Full).map(|(p, _)| *p).collect()
    }

    /// Structural checks, and invariance of explicit residue lists under the
    /// generators of the parabolic group mod `p^j`.
    pub fn validate(&self) -> Result<()> {
        let lay = Layout::new(self.n);
        for (&p, c) in &self.conditions {
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            let (j, list, len) = match c {
                Condition::Full | Condition::UnitLambda => continue,
                Condition::InvIn { j, residues } => (*j, residues, self.n),
                Condition::Residues { j, points } => (*j, points, lay.dim()),
            };
            let q = p.checked_pow(j).ok_or(Error::LevelTooDeep { level: j, max: 63 })?;
            if list.is_empty() {
                return Err(Error::DegenerateInput(format!("empty condition at {p}")));
            }
            for r in list {
                if r.len() != len {
                    return Err(Error::LengthMismatch { expected: len, got: r.len() });
                }
                if r.iter().any(|x| *x >= q) {
                    return Err(Error::Parse(format!("residue out of range mod {q}")));
                }
            }
            if let Condition::Residues { points, .. } = c {
                let ring = ZMod::new(q)?;
                let set: HashSet<&Vec<u64>> = points.iter().collect();
                let gens = generators_mod(self.n, p, j)?;
                for pt in points {
                    let b = ReducibleMatrix::from_w0_coords(ring, self.n, pt)?;
                    for g in &gens {
                        let img = ReducibleMatrix::new(act(g, b.as_sym()))?.w0_coords();
                        if !set.contains(&img) {
                            return Err(Error::DegenerateInput(format!("residue list at {p} is not invariant")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The condition at `p` as a predicate on `W0` coordinates mod `p^j`.
    pub fn level_predicate(&self, p: u64) -> Result<LevelPredicate> {
        let n = self.n;
        let lay = Layout::new(n);
        Ok(match self.condition(p) {
            Condition::Full => LevelPredicate { j: 0, test: Box::new(|_| true) },
            Condition::UnitLambda => {
                let idx: Vec<usize> = lay
                    .slicing
                    .iter()
                    .zip(lambda_exponents(n))
                    .filter(|(_, e)| *e > 0)
                    .map(|(k, _)| *k)
                    .collect();
                LevelPredicate { j: 1, test: Box::new(move |c: &[u64]| idx.iter().all(|&k| c[k] % p != 0)) }
            }
            Condition::InvIn { j, residues } => {
                let q = p.pow(*j) as i128;
                let set: HashSet<Vec<u64>> = residues.iter().cloned().collect();
                LevelPredicate {
                    j: *j,
                    test: Box::new(move |c: &[u64]| {
                        let ci: Vec<i128> = c.iter().map(|x| *x as i128).collect();
                        let f: Vec<u64> = inv_mod_q(&lay, &ci, q).into_iter().map(|x| x as u64).collect();
                        set.contains(&f)
                    }),
                }
            }
            Condition::Residues { j, points } => {
                let set: HashSet<Vec<u64>> = points.iter().cloned().collect();
                LevelPredicate { j: *j, test: Box::new(move |c: &[u64]| set.contains(c)) }
            }
        })
    }
}

/// A `P(Z_p)`-invariant condition seen at level `p^j`.
pub struct LevelPredicate {
    pub j: u32,
    pub test: Box<dyn Fn(&[u64]) -> bool + Send + Sync>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    LambdaDensity,
    OrbitCountAvg,
    EulerZeta,
}

/// An exact local factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    pub value: BigRational,
    pub kind: FactorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorJson {
    pub p: u64,
    pub value: String,
    pub kind: FactorKind,
}

impl LocalFactor {
    pub fn to_json(&self) -> LocalFactorJson {
        LocalFactorJson { p: self.p, value: format_rational(&self.value), kind: self.kind }
    }
}

/// `int_{Z_p} |b|^e db = (1 - 1/p) / (1 - p^-(e+1))`.
fn monomial_integral(p: u64, e: u32) -> BigRational {
    (BigRational::one() - ppow(p, -1)) / (BigRational::one() - ppow(p, -(e as i64 + 1)))
}

const RESIDUE_CAP: u128 = 20_000_000;

fn for_each_residue(dim: usize, q: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let size = (q as u128).pow(dim as u32);
    if size > RESIDUE_CAP {
        return Err(Error::BoxTooLarge { size, cap: RESIDUE_CAP });
    }
    let mut c = vec![0u64; dim];
    loop {
        visit(&c);
        let Some(k) = (0..dim).find(|&k| c[k] + 1 < q) else { return Ok(()) };
        c[k] += 1;
        c[..k].iter_mut().for_each(|x| *x = 0);
    }
}

/// `int_{B in W0(Z_p), B mod p^j in S} |lambda(B)|_p dB` for a predicate at
/// level `j`: a sum over residues mod `p^j`, with the exact tail integral on
/// residues where a slicing entry vanishes.
pub fn lambda_integral_level(n: usize, p: u64, pred: &LevelPredicate) -> Result<BigRational> {
    let lay = Layout::new(n);
    let j = pred.j;
    let exps = lambda_exponents(n);
    let q = p.pow(j);
    // Group residues by the slicing valuations (j meaning "zero mod p^j").
    let mut hist: HashMap<Vec<u32>, u64> = HashMap::new();
    for_each_residue(lay.dim(), q, |c| {
        if (pred.test)(c) {
            let key: Vec<u32> = lay
                .slicing
                .iter()
                .map(|&k| if c[k] == 0 { j } else { crate::exactmath::padic::val_u128(c[k] as u128, p) })
                .collect();
            *hist.entry(key).or_default() += 1;
        }
    })?;
    let mut total = BigRational::zero();
    let others = (lay.dim() - lay.slicing.len()) as i64;
    for (key, count) in hist {
        let mut w = ppow(p, -(j as i64) * others) * BigRational::from_integer(count.into());
        for (v, e) in key.iter().zip(&exps) {
            w *= if *v == j {
                ppow(p, -(j as i64) * (*e as i64 + 1)) * monomial_integral(p, *e)
            } else {
                ppow(p, -(j as i64) - (*v as i64) * (*e as i64))
            };
        }
        total += w;
    }
    Ok(total)
}

/// `int_{(S_p)_0} |lambda(B)|_p dB`.
pub fn local_lambda_integral(n: usize, p: u64, family: &FamilySpec, j_max: u32) -> Result<LocalFactor> {
    let exps = lambda_exponents(n);
    let value = match family.condition(p) {
        Condition::Full => exps.iter().map(|e| monomial_integral(p, *e)).product(),
        Condition::UnitLambda => {
            let k = exps.iter().filter(|e| **e > 0).count();
            num_traits::pow(BigRational::one() - ppow(p, -1), k)
        }
        _ => {
            let pred = family.level_predicate(p)?;
            if pred.j > j_max {
                return Err(Error::LevelTooDeep { level: pred.j, max: j_max });
            }
            lambda_integral_level(n, p, &pred)?
        }
    };
    Ok(LocalFactor { p, value, kind: FactorKind::LambdaDensity })
}

/// Arguments `a` of the zeta values in `C_n^fin`: `2, 4, .., 2 floor(n/2)` for
/// odd `n`; `n/2` and `2, 4, .., n-2` for even `n`.
pub fn zeta_arguments(n: usize) -> Vec<u32> {
    let h = n / 2;
    if n % 2 == 1 {
        (1..=h as u32).map(|i| 2 * i).collect()
    } else {
        let mut v = vec![h as u32];
        v.extend((1..h as u32).map(|i| 2 * i));
        v
    }
}

/// `prod_a (1 - p^-a)^-1` over the zeta arguments.
pub fn zeta_euler_factor(n: usize, p: u64) -> BigRational {
    zeta_arguments(n).iter().map(|a| (BigRational::one() - ppow(p, -(*a as i64))).recip()).product()
}

/// `(1 - 1/p)^-floor(n/2) int |lambda|` against the Euler factor of `C_n^fin`.
pub fn euler_factor_identity(n: usize, p: u64) -> (BigRational, BigRational, bool) {
    let full = local_lambda_integral(n, p, &FamilySpec::full(n), 0).expect("full family").value;
    let lhs = num_traits::pow((BigRational::one() - ppow(p, -1)).recip(), n / 2) * full;
    let rhs = zeta_euler_factor(n, p);
    let eq = lhs == rhs;
    (lhs, rhs, eq)
}

/// `|J|_p` as a local factor: `2^(n/2)` at `p = 2` for even `n`, else 1.
pub fn jacobian_local(n: usize, p: u64) -> BigRational {
    if p == 2 && n % 2 == 0 {
        ppow(2, (n / 2) as i64)
    } else {
        BigRational::one()
    }
}

/// The orbit-count route: `int_{U(Z_p)} c_p^S(f) df`, computed from the
/// parametrization of orbits by slicing valuations `e`, target residues, and
/// free entries `x` (which map to `f` with Jacobian `prod_m coef_m`).
pub fn orbit_route_level(n: usize, p: u64, pred: &LevelPredicate) -> Result<BigRational> {
    let lay = Layout::new(n);
    let jac = jacobian_cache(n);
    let a = jac.total_exponents();
    let h = n / 2;
    let j = pred.j;
    let q = p.pow(j);
    let c0 = abs_p(&jac.constant(), p);
    let targets_of: Vec<Vec<TargetSlot>> =
        (0..h).map(|i| lay.targets.iter().filter(|t| t.slice == i).copied().collect()).collect();
    // Tail factor for e_i >= j, with each target residue mod p^j carrying weight p^e step / p^j.
    let tail = |i: usize| -> Result<BigRational> {
        let t = targets_of[i].len() as i64;
        let ai = a[i] as i64;
        if ai <= t {
            return Err(Error::DegenerateInput("divergent orbit integral".into()));
        }
        let steps: u64 = targets_of[i].iter().map(|s| s.step(p)).product();
        let r = ppow(p, t - ai);
        Ok(BigRational::from_integer(steps.into()) * ppow(p, -(j as i64) * t) * ppow(p, j as i64 * (t - ai))
            / (BigRational::one() - r))
    };
    let tails: Vec<BigRational> = (0..h).map(tail).collect::<Result<_>>()?;
    let mut total = BigRational::zero();
    // state[i] in 0..=j, with j meaning the tail e_i >= j.
    let mut state = vec![0u32; h];
    loop {
        let mut weight = c0.clone() * ppow(p, -(j as i64) * n as i64);
        let mut coords = vec![0u64; lay.dim()];
        for i in 0..h {
            if state[i] == j {
                weight *= &tails[i];
            } else {
                weight *= ppow(p, -(a[i] as i64) * state[i] as i64);
                coords[lay.slicing[i]] = p.pow(state[i]) % q.max(1);
            }
        }
        // Target ranges and weights.
        let mut ranges = Vec::new();
        for t in &lay.targets {
            let e = state[t.slice];
            if e == j {
                ranges.push((t.coord, q));
            } else {
                let full = p.pow(e) * t.step(p);
                let cnt = full.min(q);
                weight *= BigRational::new(full.into(), cnt.into());
                ranges.push((t.coord, cnt));
            }
        }
        for &k in &lay.free {
            ranges.push((k, q));
        }
        let mut hits: u64 = 0;
        let size: u128 = ranges.iter().map(|r| r.1 as u128).product();
        if size > RESIDUE_CAP {
            return Err(Error::BoxTooLarge { size, cap: RESIDUE_CAP });
        }
        let mut idx = vec![0u64; ranges.len()];
        loop {
            for (r, &v) in ranges.iter().zip(&idx) {
                coords[r.0] = v;
            }
            if (pred.test)(&coords) {
                hits += 1;
            }
            let Some(k) = (0..idx.len()).find(|&k| idx[k] + 1 < ranges[k].1) else { break };
            idx[k] += 1;
            idx[..k].iter_mut().for_each(|x| *x = 0);
        }
        total += weight * BigRational::from_integer(hits.into());
        let Some(k) = (0..h).find(|&k| state[k] < j) else { break };
        state[k] += 1;
        state[..k].iter_mut().for_each(|x| *x = 0);
    }
    Ok(total)
}

pub fn orbit_route_integral(n: usize, p: u64, family: &FamilySpec) -> Result<LocalFactor> {
    let pred = family.level_predicate(p)?;
    Ok(LocalFactor { p, value: orbit_route_level(n, p, &pred)?, kind: FactorKind::OrbitCountAvg })
}

/// Both predicted local constants for a family at `p`:
/// `(1-1/p)^-floor(n/2) int_{S_p} |lambda|` and `|J|_p int_U c_p^S(f) df`.
pub fn big_family_consistency(n: usize, p: u64, family: &FamilySpec, j_max: u32) -> Result<(BigRational, BigRational)> {
    let lam = local_lambda_integral(n, p, family, j_max)?.value;
    let route_a = num_traits::pow((BigRational::one() - ppow(p, -1)).recip(), n / 2) * lam;
    let route_b = jacobian_local(n, p) * orbit_route_integral(n, p, family)?.value;
    Ok((route_a, route_b))
}

/// Ascending integer coefficients `[f_n, .., f_1, 1]`.
fn ascending(f: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = f.iter().rev().cloned().collect();
    v.push(BigInt::one());
    v
}

/// Even `n`: invariants of integral matrices have `f_i` even for odd `i`.
pub fn satisfies_parity(f: &[BigInt]) -> bool {
    f.len() % 2 == 1 || f.iter().enumerate().all(|(k, c)| k % 2 == 1 || (c % 2u32).is_zero())
}

/// `c_p(f)` for cubics: the orbits are indexed by `k >= 0` and
/// `c mod p^k step` (`step = 2` at `p = 2`) with `p^{2k} | f(-c)` and
/// `p^{k + [p = 2]} | f'(-c)`; the free entries are then
/// `-f'(-c) / (2 p^k)` and `f(-c) / p^{2k}`.
pub fn orbit_count_n3(f: [i128; 3], p: u64) -> u64 {
    n3_count(f, p, false)
}

/// Cubic count restricted to orbits with `lambda` a unit.
pub fn orbit_count_n3_unit_lambda(f: [i128; 3], p: u64) -> u64 {
    n3_count(f, p, true)
}

// k is the valuation of the slicing entry, which is lambda itself for n = 3.
fn n3_count(f: [i128; 3], p: u64, unit_only: bool) -> u64 {
    let [a, b, c] = f;
    let d = crate::exactmath::disc_cubic(a, b, c);
    assert_ne!(d, 0, "degenerate cubic");
    let v = val_i128(d, p);
    if v <= 1 {
        return 1;
    }
    let pi = p as i128;
    let (step, delta) = if p == 2 { (2i128, 1u32) } else { (1, 0) };
    let mut count = 0u64;
    let k_max = if unit_only { 0 } else { v / 2 };
    for k in 0..=k_max {
        let q2 = pi.pow(2 * k);
        let m1 = pi.pow(k + delta);
        let range = pi.pow(k) * step;
        for x in 0..range {
            let y = (-x).rem_euclid(q2);
            let mul = |u: i128, w: i128| (u % q2) * (w % q2) % q2;
            let fy = (mul(mul(y, y), y) + mul(a, mul(y, y)) + mul(b, y) + c).rem_euclid(q2);
            if fy != 0 {
                continue;
            }
            let y1 = (-x).rem_euclid(m1);
            let fp = (3 * (y1 * y1 % m1) + 2 * a % m1 * y1 + b).rem_euclid(m1);
            if fp == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Budget for the generic search.
pub const DFS_NODE_CAP: u64 = 50_000_000;

struct Dfs<'a> {
    lay: Layout,
    jac: FreeJacobian,
    f: Vec<BigRational>,
    p: u64,
    coords: Vec<BigRational>,
    slicing: Vec<BigInt>,
    accept: &'a mut dyn FnMut(&[BigRational]) -> bool,
    count: u64,
    nodes: u64,
}

impl Dfs<'_> {
    fn rec(&mut self, m: usize) -> Result<()> {
        let n = self.lay.n;
        if m > n {
            if (self.accept)(&self.coords) {
                self.count += 1;
            }
            return Ok(());
        }
        let slots: Vec<TargetSlot> = self.lay.targets.iter().filter(|t| t.weight == m).copied().collect();
        let ranges: Vec<BigInt> = slots.iter().map(|t| &self.slicing[t.slice] * BigInt::from(t.step(self.p))).collect();
        let mut idx = vec![BigInt::zero(); slots.len()];
        loop {
            self.nodes += 1;
            if self.nodes > DFS_NODE_CAP {
                return Err(Error::InstanceTooLarge(format!("more than {DFS_NODE_CAP} search nodes")));
            }
            for (t, v) in slots.iter().zip(&idx) {
                self.coords[t.coord] = BigRational::from_integer(v.clone());
            }
            let fc = self.lay.free[m - 1];
            self.coords[fc] = BigRational::zero();
            let g0 = inv_rational(n, &self.lay.rows(&self.coords, BigRational::zero()))[m - 1].clone();
            let coef = BigRational::from_integer(self.jac.coef_at(m, &self.slicing));
            let x = (&self.f[m - 1] - g0) / coef;
            if padic_val_rat(&x, self.p) >= Valuation::Finite(0) {
                self.coords[fc] = x;
                self.rec(m + 1)?;
                self.coords[fc] = BigRational::zero();
            }
            let Some(k) = (0..idx.len()).find(|&k| &idx[k] + 1u32 < ranges[k]) else { break };
            idx[k] += 1u32;
            idx[..k].iter_mut().for_each(|x| *x = BigInt::zero());
        }
        for t in &slots {
            self.coords[t.coord] = BigRational::zero();
        }
        Ok(())
    }
}

/// All slicing valuation vectors `e` with `sum z_i e_i <= v`.
fn valuation_vectors(z: &[u32], v: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &zi in z {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().zip(z).map(|(a, b)| a * b).sum();
            let mut k = 0;
            while used + zi * k <= v {
                let mut e2 = e.clone();
                e2.push(k);
                next.push(e2);
                if zi == 0 {
                    break;
                }
                k += 1;
            }
        }
        out = next;
    }
    out
}

/// Visit the canonical `P(Z_p)`-orbit representatives over `f`: slicing
/// entries `p^e` (with `Z(p^e) | disc f`), targets in `[0, p^e step)`, and
/// free entries solved exactly (kept only when p-integral). Returns the
/// number of representatives accepted by `accept`; `e_ok` prunes valuations.
pub fn orbit_count_dfs(
    f: &[BigInt],
    p: u64,
    e_ok: &dyn Fn(&[u32]) -> bool,
    accept: &mut dyn FnMut(&[BigRational]) -> bool,
) -> Result<u64> {
    let n = f.len();
    let disc = discriminant_int(&ascending(f));
    let v = match padic_val_int(&disc, p) {
        Valuation::Finite(v) => v as u32,
        Valuation::Infinite => return Err(Error::DegenerateInput("discriminant is zero".into())),
    };
    let lay = Layout::new(n);
    let jac = jacobian_cache(n);
    let mut total = 0;
    let mut nodes = 0;
    for e in valuation_vectors(&zpoly_exponents(n), v) {
        if !e_ok(&e) {
            continue;
        }
        let slicing: Vec<BigInt> = e.iter().map(|k| num_traits::pow(BigInt::from(p), *k as usize)).collect();
        let mut coords = vec![BigRational::zero(); lay.dim()];
        for (i, &k) in lay.slicing.iter().enumerate() {
            coords[k] = BigRational::from_integer(slicing[i].clone());
        }
        let mut d = Dfs {
            lay: lay.clone(),
            jac: jac.clone(),
            f: f.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
            p,
            coords,
            slicing,
            accept: &mut *accept,
            count: 0,
            nodes,
        };
        d.rec(1)?;
        total += d.count;
        nodes = d.nodes;
    }
    Ok(total)
}

/// `c_p(f)`: the number of `P(Z_p)`-orbits on `W0(Z_p)` over `f`.
pub fn orbit_count_local(f: &MonicPoly<crate::exactmath::Integers>, p: u64) -> Result<u64> {
    let c = f.coeffs();
    if !satisfies_parity(c) {
        return Err(Error::DegenerateInput("odd-index coefficients must be even for even n".into()));
    }
    let disc = discriminant_int(&ascending(c));
    if disc.is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    if padic_val_int(&disc, p) <= Valuation::Finite(1) {
        return Ok(1);
    }
    if f.n() == 3 {
        if let Some(small) = small_cubic(c) {
            return Ok(orbit_count_n3(small, p));
        }
    }
    let count = orbit_count_dfs(c, p, &|_| true, &mut |_| true)?;
    assert!(count >= 1, "every invariant has an integral orbit");
    Ok(count)
}

// Coefficients small enough for the i128 arithmetic of the cubic fast path.
fn small_cubic(c: &[BigInt]) -> Option<[i128; 3]> {
    let (a, b, cc) = (c[0].to_i64()?, c[1].to_i64()?, c[2].to_i64()?);
    (a.abs() < 1 << 20 && b.abs() < 1 << 30 && cc.abs() < 1 << 40).then_some([a as i128, b as i128, cc as i128])
}

/// `c_p` restricted to a family condition at `p`.
pub fn orbit_count_family(f: &MonicPoly<crate::exactmath::Integers>, p: u64, family: &FamilySpec) -> Result<u64> {
    let c = f.coeffs();
    let n = f.n();
    match family.condition(p) {
        Condition::Full => orbit_count_local(f, p),
        Condition::UnitLambda => {
            // Every slicing entry divides disc to at least the second power.
            if padic_val_int(&f.disc(), p) <= Valuation::Finite(1) {
                return Ok(1);
            }
            if n == 3 {
                if let Some(small) = small_cubic(c) {
                    return Ok(orbit_count_n3_unit_lambda(small, p));
                }
            }
            let exps = lambda_exponents(n);
            orbit_count_dfs(c, p, &|e| e.iter().zip(&exps).all(|(k, x)| *x == 0 || *k == 0), &mut |_| true)
        }
        Condition::InvIn { j, residues } => {
            let q = BigInt::from(p.pow(*j));
            let r: Vec<u64> = c.iter().map(|x| (((x % &q) + &q) % &q).to_u64().expect("residue")).collect();
            if residues.contains(&r) {
                orbit_count_local(f, p)
            } else {
                Ok(0)
            }
        }
        Condition::Residues { .. } => {
            let pred = family.level_predicate(p)?;
            let q = p.pow(pred.j);
            orbit_count_dfs(c, p, &|_| true, &mut |coords: &[BigRational]| {
                let r: Vec<u64> = coords.iter().map(|x| rational_mod(x, q)).collect();
                (pred.test)(&r)
            })
        }
    }
}

/// A p-integral rational reduced mod `q = p^j`.
pub fn rational_mod(x: &BigRational, q: u64) -> u64 {
    let qb = BigInt::from(q);
    let num = ((x.numer() % &qb) + &qb) % &qb;
    let den = ((x.denom() % &qb) + &qb) % &qb;
    let di = inv_mod(den.to_u64().expect("small"), q).expect("p-integral");
    let n = num.to_u64().expect("small");
    ((n as u128 * di as u128) % q as u128) as u64
}

/// Generators of the image of `P(Z_p)` in `P(Z/p^k)`: torus elements built
/// from generators of `(Z/p^k)^x`, and `u_ij(1)` (`u_ij(2)` in the middle row
/// at `p = 2`).
pub fn generators_mod(n: usize, p: u64, k: u32) -> Result<Vec<GroupElem<ZMod>>> {
    let q = p.pow(k);
    let ring = ZMod::new(q)?;
    let unit_gens: Vec<u64> = if q <= 2 {
        vec![]
    } else if p == 2 {
        vec![q - 1, 5 % q]
    } else {
        let g = (2..p)
            .find(|&g| {
                let order_ok = |m: u64| (1..m - 1).all(|e| pow_u64(g, e, m) != 1 || e == 0);
                order_ok(p) && (p * p > q || pow_u64(g, p - 1, p * p) != 1)
            })
            .expect("primitive root");
        vec![g]
    };
    let h = n / 2;
    let mut gens = Vec::new();
    for &u in &unit_gens {
        let ui = inv_mod(u, q).expect("unit");
        for i in 0..h {
            let mut t = vec![1u64; n];
            t[i] = u;
            t[n - 1 - i] = ui;
            gens.push(diag_elem(&ring, &t)?);
        }
        if n % 2 == 0 {
            let mut t = vec![1u64; n];
            for i in 0..h {
                t[n - 1 - i] = u;
            }
            gens.push(diag_elem(&ring, &t)?);
        }
    }
    for (i, j) in unipotent_indices(n) {
        let v = if is_middle_row(n, i) && p == 2 { 2 % q } else { 1 % q };
        gens.push(unipotent_gen(&ring, n, i, j, &v)?);
    }
    Ok(gens)
}

/// Points of `W0(Z/p^k)` over `f mod p^k`, enumerated by choosing slicing
/// and target entries freely and solving the (triangular, linear) equations
/// for the free entries.
pub fn fiber_mod(f: &[i64], p: u64, k: u32) -> Result<Vec<Vec<u64>>> {
    let n = f.len();
    let lay = Layout::new(n);
    let jac = jacobian_cache(n);
    let q = p.pow(k) as i128;
    let fixed = lay.fixed_coords();
    let size = (q as u128).pow(fixed.len() as u32);
    if size > RESIDUE_CAP {
        return Err(Error::BoxTooLarge { size, cap: RESIDUE_CAP });
    }
    let fq: Vec<i128> = f.iter().map(|c| (*c as i128).rem_euclid(q)).collect();
    let mut out = Vec::new();
    let mut c = vec![0i128; lay.dim()];
    let mut idx = vec![0i128; fixed.len()];
    loop {
        for (&k, &v) in fixed.iter().zip(&idx) {
            c[k] = v;
        }
        for &k in &lay.free {
            c[k] = 0;
        }
        let s: Vec<i128> = lay.slicing.iter().map(|&k| c[k]).collect();
        solve_free(&lay, &jac, &fq, q, &s, &mut c, 1, &mut out);
        let Some(j) = (0..idx.len()).find(|&j| idx[j] + 1 < q) else { break };
        idx[j] += 1;
        idx[..j].iter_mut().for_each(|x| *x = 0);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn solve_free(
    lay: &Layout,
    jac: &FreeJacobian,
    f: &[i128],
    q: i128,
    s: &[i128],
    c: &mut Vec<i128>,
    m: usize,
    out: &mut Vec<Vec<u64>>,
) {
    if m > lay.n {
        out.push(c.iter().map(|x| *x as u64).collect());
        return;
    }
    let fc = lay.free[m - 1];
    c[fc] = 0;
    let g0 = inv_mod_q(lay, c, q)[m - 1];
    let coef = jac.coef_mod(m, s, q);
    let rhs = (f[m - 1] - g0).rem_euclid(q);
    let g = num_integer::gcd(coef, q);
    if rhs % g == 0 {
        let qg = q / g;
        let x0 = if qg == 1 {
            0
        } else {
            let ci = inv_mod(((coef / g) % qg) as u64, qg as u64).expect("coprime") as i128;
            (rhs / g) % qg * ci % qg
        };
        for t in 0..g {
            c[fc] = x0 + t * qg;
            solve_free(lay, jac, f, q, s, c, m + 1, out);
        }
    }
    c[fc] = 0;
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Orbits of the generators on a finite invariant set of `W0(Z/q)` points.
pub fn count_orbits(n: usize, ring: ZMod, points: &[Vec<u64>], gens: &[GroupElem<ZMod>]) -> Result<u64> {
    let index: HashMap<&Vec<u64>, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut uf = UnionFind::new(points.len());
    for (i, pt) in points.iter().enumerate() {
        let b = SymMatrix::from_rows(ring, n, Layout::new(n).rows(pt, 0))?;
        for g in gens {
            let img = ReducibleMatrix::new(act(g, &b))?.w0_coords();
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::StabilizationFailure("point set is not invariant".into()))?;
            uf.union(i, j);
        }
    }
    let roots: BTreeSet<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
    Ok(roots.len() as u64)
}

/// All lifts of a point over `f mod q` to points over `f mod qp`: the
/// slicing and target entries move freely by multiples of `q`, and each
/// free entry solves a linear congruence.
pub fn lift_level(f: &[i64], p: u64, q: u64, point: &[u64]) -> Vec<Vec<u64>> {
    let n = f.len();
    let lay = Layout::new(n);
    let jac = jacobian_cache(n);
    let (qi, pi) = (q as i128, p as i128);
    let q1 = qi * pi;
    let fq: Vec<i128> = f.iter().map(|c| (*c as i128).rem_euclid(q1)).collect();
    let fixed = lay.fixed_coords();
    let mut out = Vec::new();
    let mut delta = vec![0i128; fixed.len()];
    let mut c: Vec<i128> = point.iter().map(|x| *x as i128).collect();
    loop {
        for (&k, d) in fixed.iter().zip(&delta) {
            c[k] = point[k] as i128 + qi * d;
        }
        let s: Vec<i128> = lay.slicing.iter().map(|&k| c[k]).collect();
        lift_free(&lay, &jac, &fq, qi, pi, &s, point, &mut c, 1, &mut out);
        let Some(j) = (0..delta.len()).find(|&j| delta[j] + 1 < pi) else { return out };
        delta[j] += 1;
        delta[..j].iter_mut().for_each(|x| *x = 0);
    }
}

#[allow(clippy::too_many_arguments)]
fn lift_free(
    lay: &Layout,
    jac: &FreeJacobian,
    f: &[i128],
    q: i128,
    p: i128,
    s: &[i128],
    base: &[u64],
    c: &mut Vec<i128>,
    m: usize,
    out: &mut Vec<Vec<u64>>,
) {
    if m > lay.n {
        out.push(c.iter().map(|x| *x as u64).collect());
        return;
    }
    let q1 = q * p;
    let fc = lay.free[m - 1];
    c[fc] = base[fc] as i128;
    // f_m(x + q t) = f_m(x) + coef q t mod qp.
    let g = inv_mod_q(lay, c, q1)[m - 1];
    let coef = jac.coef_mod(m, s, p);
    let rhs = (f[m - 1] - g).rem_euclid(q1);
    if rhs % q == 0 {
        let r = rhs / q;
        let ts: Vec<i128> = if coef != 0 {
            let ci = inv_mod(coef as u64, p as u64).expect("unit") as i128;
            vec![r * ci % p]
        } else if r == 0 {
            (0..p).collect()
        } else {
            vec![]
        };
        for t in ts {
            c[fc] = base[fc] as i128 + q * t;
            lift_free(lay, jac, f, q, p, s, base, c, m + 1, out);
        }
    }
    c[fc] = base[fc] as i128;
}

/// Whether a point of `W0(Z/p^k)` over `f` lifts to a point over `f`
/// modulo `p^(k + extra)`.
pub fn lifts(f: &[i64], p: u64, k: u32, point: &[u64], extra: u32) -> bool {
    extra == 0 || lift_level(f, p, p.pow(k), point).iter().any(|c| lifts(f, p, k + 1, c, extra - 1))
}

/// Independent check of `c_p(f)`: orbits of the image of `P(Z_p)` in
/// `P(Z/p^k)` on the points over `f mod p^k` that lift `extra` levels.
pub fn orbit_count_union_find(f: &[i64], p: u64, k: u32, extra: u32) -> Result<u64> {
    let n = f.len();
    let ring = ZMod::new(p.pow(k))?;
    let points: Vec<Vec<u64>> = fiber_mod(f, p, k)?.into_iter().filter(|c| lifts(f, p, k, c, extra)).collect();
    count_orbits(n, ring, &points, &generators_mod(n, p, k)?)
}

/// Report of the Jacobian-constant recomputation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianReport {
    pub n: usize,
    pub p: u64,
    pub m: u32,
    pub sigma_count: u64,
    pub group_order: u64,
    pub orbits: u64,
    pub measured: BigRational,
    pub expected: BigRational,
}

/// Closure of the generators mod `q`, as a set of normalized matrices.
pub fn image_group(n: usize, p: u64, m: u32, cap: usize) -> Result<Vec<GroupElem<ZMod>>> {
    let gens = generators_mod(n, p, m)?;
    let ring = ZMod::new(p.pow(m))?;
    let id = GroupElem::identity(ring, n);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([id.matrix().to_vec()]);
    let mut all = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = s.mul(&g);
            if seen.insert(h.matrix().to_vec()) {
                if seen.len() > cap {
                    return Err(Error::InstanceTooLarge(format!("group mod {} exceeds {cap}", p.pow(m))));
                }
                all.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(all)
}

/// Recompute `|J|_p` from point counts. Odd `p`: `#Sigma / #P(F_p)` with
/// `Sigma` the fiber over a nondegenerate `f` mod `p`. `p = 2`: `Sigma` is
/// the set of points mod `q = 2^m` with unit slicing entries and
/// `inv = x^n`, and `|J|_2 = #Sigma / (kappa #P(Z/q))`, `kappa = 2^floor(n/2)`
/// for odd `n` and 1 for even `n`.
pub fn jacobian_verify(n: usize, p: u64, m: u32) -> Result<JacobianReport> {
    let lay = Layout::new(n);
    if p != 2 {
        let ring = ZMod::new(p)?;
        let size = (p as u128).pow(lay.dim() as u32);
        if size > RESIDUE_CAP {
            return Err(Error::InstanceTooLarge(format!("{size} points")));
        }
        let mut f = None;
        for_each_residue(n, p, |c| {
            if f.is_none() {
                let poly = MonicPoly::new(ring, c.to_vec()).expect("n >= 1");
                if ring.is_unit(&poly.disc()) {
                    f = Some(c.iter().map(|x| *x as i128).collect::<Vec<_>>());
                }
            }
        })?;
        let f = f.ok_or_else(|| Error::RingTooSmall(format!("no separable polynomial mod {p}")))?;
        let mut sigma = Vec::new();
        for_each_residue(lay.dim(), p, |c| {
            let ci: Vec<i128> = c.iter().map(|x| *x as i128).collect();
            if inv_mod_q(&lay, &ci, p as i128) == f {
                sigma.push(c.to_vec());
            }
        })?;
        let group = enumerate_parabolic(ring, n)?.len() as u64;
        let orbits = count_orbits(n, ring, &sigma, &generators_mod(n, p, 1)?)?;
        let measured = BigRational::new((sigma.len() as u64).into(), group.into());
        return Ok(JacobianReport {
            n,
            p,
            m: 1,
            sigma_count: sigma.len() as u64,
            group_order: group,
            orbits,
            measured,
            expected: BigRational::one(),
        });
    }
    let q = 2u64.pow(m);
    let ring = ZMod::new(q)?;
    let size = (q as u128).pow(lay.dim() as u32);
    if size > RESIDUE_CAP {
        return Err(Error::InstanceTooLarge(format!("{size} points")));
    }
    let mut sigma = Vec::new();
    for_each_residue(lay.dim(), q, |c| {
        if lay.slicing.iter().all(|&k| c[k] % 2 == 1) {
            let ci: Vec<i128> = c.iter().map(|x| *x as i128).collect();
            if inv_mod_q(&lay, &ci, q as i128).iter().all(|x| *x == 0) {
                sigma.push(c.to_vec());
            }
        }
    })?;
    let group = image_group(n, 2, m, 2_000_000)?.len() as u64;
    let orbits = count_orbits(n, ring, &sigma, &generators_mod(n, 2, m)?)?;
    let kappa = if n % 2 == 1 { 1u64 << (n / 2) } else { 1 };
    let measured = BigRational::new((sigma.len() as u64).into(), (kappa * group).into());
    Ok(JacobianReport {
        n,
        p,
        m,
        sigma_count: sigma.len() as u64,
        group_order: group,
        orbits,
        measured,
        expected: jacobian_local(n, 2),
    })
}

/// How the product over primes above `P_max` is enclosed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// Primes in `(P_max, up_to]` are multiplied in explicitly; beyond that
    /// `sum_{k > up_to} -log(1 - k^-a)` is bounded over all integers.
    Sieved { up_to: u64 },
    /// Only the integer bound, from `P_max` on.
    Crude,
}

fn primes_up_to(x: u64) -> Vec<u64> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<u64>>> = OnceLock::new();
    let m = CACHE.get_or_init(Default::default);
    let mut g = m.lock().expect("prime cache");
    if g.last().is_none_or(|&l| l < x) {
        *g = num_prime::nt_funcs::primes(x.max(1000));
    }
    g.iter().copied().take_while(|&p| p <= x).collect()
}

/// `sum_{k > x} -log(1 - k^-a) <= x^(1-a) / ((a-1)(1 - x^-a))`.
fn integer_tail(x: u64, a: u32) -> f64 {
    let xf = x as f64;
    let b = xf.powf(1.0 - a as f64) / ((a as f64 - 1.0) * (1.0 - xf.powf(-(a as f64))));
    b * (1.0 + 1e-12)
}

/// Enclosure of `prod_p F_p` where `F_p` is given for `p <= P_max` by
/// `factors` (default: the zeta factor) and equals the zeta factor beyond.
pub fn euler_product(n: usize, factors: &BTreeMap<u64, BigRational>, p_max: u64, tail: TailModel) -> Interval {
    let args = zeta_arguments(n);
    if factors.values().any(|v| v.is_zero()) {
        return Interval::exact(0.0);
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut terms = 0u64;
    let mut add = |t: f64| {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += t.abs();
        terms += 1;
    };
    let zeta_log = |p: u64| -> f64 { args.iter().map(|a| -(-(p as f64).powi(-(*a as i32))).ln_1p()).sum() };
    for p in primes_up_to(p_max) {
        let t = match factors.get(&p) {
            Some(v) => crate::exactmath::rational_to_f64(v).ln(),
            None => zeta_log(p),
        };
        add(t);
    }
    let bound_from = match tail {
        TailModel::Sieved { up_to } if up_to > p_max => {
            for p in primes_up_to(up_to).into_iter().filter(|&p| p > p_max) {
                add(zeta_log(p));
            }
            up_to
        }
        _ => p_max.max(1),
    };
    let tail_hi: f64 = args.iter().map(|a| integer_tail(bound_from, *a)).sum();
    let err = 8.0 * f64::EPSILON * (abs_sum + (terms as f64) * sum.abs()) + 1e-300;
    Interval::new(sum - err, sum + err + tail_hi).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_integral_matches_geometric_series() {
        // sum_k p^-k (p^-k - p^-(k+1)) truncated far out.
        for p in [2u64, 3, 5] {
            let mut s = BigRational::zero();
            for k in 0..60 {
                s += ppow(p, -k) * (ppow(p, -k) - ppow(p, -k - 1));
            }
            let exact = monomial_integral(p, 1);
            assert!((exact.clone() - s).abs() < ppow(p, -100));
            assert_eq!(exact, rat(p as i64, p as i64 + 1));
        }
    }

    #[test]
    fn free_jacobian_n3() {
        let j = FreeJacobian::new(3);
        assert_eq!(j.total_exponents(), vec![3]);
        assert_eq!(j.constant().abs(), BigInt::from(2));
    }

    #[test]
    fn free_coefficients_ignore_other_entries() {
        for n in 3..7 {
            let lay = Layout::new(n);
            let jac = FreeJacobian::new(n);
            let mut c: Vec<i128> = (0..lay.dim()).map(|k| (k as i128 * 7) % 5 - 2).collect();
            for &k in &lay.slicing {
                if c[k] == 0 {
                    c[k] = 3;
                }
            }
            let s: Vec<BigInt> = lay.slicing.iter().map(|&k| BigInt::from(c[k])).collect();
            for m in 1..=n {
                let fc = lay.free[m - 1];
                c[fc] = 0;
                let g0 = inv_i128(n, &lay.rows(&c, 0))[m - 1];
                c[fc] = 1;
                let g1 = inv_i128(n, &lay.rows(&c, 0))[m - 1];
                assert_eq!(BigInt::from(g1 - g0), jac.coef_at(m, &s), "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn valuation_vectors_respect_bound() {
        let v = valuation_vectors(&[2, 4], 5);
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![2, 0]]);
    }

    #[test]
    fn rational_reduction() {
        assert_eq!(rational_mod(&rat(1, 2), 9), 5);
        assert_eq!(rational_mod(&rat(-1, 1), 9), 8);
    }
}
