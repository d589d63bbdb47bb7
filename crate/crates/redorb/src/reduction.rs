//! Reduction of `W0` under the parabolic subgroup: the explicit reduction to
//! the section over fields and truncated `Z_p`, canonical representatives of
//! `P(Z)`-orbits, and brute-force orbit oracles.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Integers, Ring, ZMod};
use crate::group::{act, act_w0, diag_elem, unipotent_gen, unipotent_indices, GroupElem, GroupJson};
use crate::rep::{inv, slicing_positions, sweep_steps, w0_positions, ReducibleMatrix, SymJson, SweepStep};

/// Outcome of `reduce_over_field`: `act(g, input) = target`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult<R: Ring> {
    pub g: GroupElem<R>,
    pub target: ReducibleMatrix<R>,
    /// Odd `n` over rings where 2 is not a unit: residues (0 or 1) left at the
    /// middle-row sweep targets, in sweep order.
    pub mod2_pattern: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub g: GroupJson,
    pub target: SymJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod2_pattern: Option<Vec<u8>>,
}

impl<R: Ring> ReductionResult<R> {
    pub fn to_json(&self) -> ReductionJson {
        ReductionJson { g: self.g.to_json(), target: self.target.to_json(), mod2_pattern: self.mod2_pattern.clone() }
    }
}

/// Diagonal element scaling every slicing entry of `b` to 1. With
/// `t_{n+1-i} = c / t_i`, slice `k` picks up the factor `t_k / t_{k+1}`, and
/// for even `n` the center picks up `t_h^2 / c`.
fn torus_normalizer<R: Ring>(b: &ReducibleMatrix<R>) -> Result<GroupElem<R>> {
    let r = b.ring();
    let n = b.n();
    let h = n / 2;
    let s = b.slicing();
    let inv_s = s
        .iter()
        .map(|x| r.inverse(x).ok_or(Error::NonUnitDiscriminant))
        .collect::<Result<Vec<_>>>()?;
    let mut t = vec![r.one(); n];
    let c = if n % 2 == 0 { s[h - 1].clone() } else { r.one() };
    let top = if n % 2 == 0 { h - 1 } else { h };
    for k in (1..=top).rev() {
        t[k - 1] = r.mul(&t[k], &inv_s[k - 1]);
    }
    for i in 1..=h {
        t[n - i] = r.mul(&c, &r.inverse(&t[i - 1]).expect("unit"));
    }
    diag_elem(r, &t)
}

/// How the sweep picks each unipotent parameter from the current target
/// value `x` and the slicing entry `b` of its row.
trait ParamRule<R: Ring> {
    /// The parameter `v`; the target becomes `x - v b`.
    fn choose(&mut self, ring: &R, x: &R::Elem, b: &R::Elem, step: &SweepStep) -> Result<R::Elem>;
}

/// Apply the sweep to `b`, returning the accumulated element and result.
fn sweep<R: Ring, P: ParamRule<R>>(
    b: &ReducibleMatrix<R>,
    rule: &mut P,
) -> Result<(GroupElem<R>, ReducibleMatrix<R>)> {
    let r = b.ring().clone();
    let n = b.n();
    let mut cur = b.clone();
    let mut g = GroupElem::identity(r.clone(), n);
    for st in sweep_steps(n) {
        let x = cur.get(st.target.0, st.target.1).clone();
        if r.is_zero(&x) {
            continue;
        }
        let bs = cur.slicing()[st.slice].clone();
        let v = rule.choose(&r, &x, &bs, &st)?;
        if r.is_zero(&v) {
            continue;
        }
        let u = unipotent_gen(&r, n, st.gen.0, st.gen.1, &v)?;
        let next = act_w0(&u, &cur);
        debug_assert!(r.eq_elem(next.get(st.target.0, st.target.1), &r.sub(&x, &r.mul(&v, &bs))));
        cur = next;
        g = u.mul(&g);
    }
    Ok((g, cur))
}

struct FieldRule;

impl<R: Ring> ParamRule<R> for FieldRule {
    fn choose(&mut self, r: &R, x: &R::Elem, b: &R::Elem, st: &SweepStep) -> Result<R::Elem> {
        let bi = r.inverse(b).ok_or(Error::NonUnitDiscriminant)?;
        if st.middle && !r.is_unit(&r.from_i64(2)) {
            // Only even parameters are available: leave the parity of x.
            let lift = r.to_rational(x).to_integer();
            let bit = u8::from(lift.is_odd());
            let even = r.sub(x, &r.from_i64(bit as i64));
            let v = r.mul(&even, &bi);
            let vl = r.to_rational(&v).to_integer();
            // v is x - bit times an odd unit: its lift is even when the ring is Z/2^k.
            if vl.is_odd() {
                return Err(Error::HalvingError(r.format_elem(&v)));
            }
            return Ok(v);
        }
        Ok(r.mul(x, &bi))
    }
}

/// Reduce `b` to the section: first the torus scales the slicing entries to
/// 1, then the unipotent sweep clears rows `1..n-2`. Over fields (and
/// truncated `Z_p` with `p` odd) the target is `sigma0(inv b)`. For odd `n`
/// where 2 is not a unit the middle-row targets can only be brought to 0 or
/// 1; those residues are returned in `mod2_pattern`.
pub fn reduce_over_field<R: Ring>(b: &ReducibleMatrix<R>) -> Result<ReductionResult<R>> {
    let r = b.ring();
    let f = inv(b.as_sym());
    let d = f.disc();
    if !r.is_unit(&d) {
        return Err(Error::NonUnitDiscriminant);
    }
    let t = torus_normalizer(b)?;
    let scaled = act_w0(&t, b);
    let (u, target) = sweep(&scaled, &mut FieldRule)?;
    let g = u.mul(&t);
    debug_assert_eq!(act_w0(&g, b), target);
    let needs_pattern = b.n() % 2 == 1 && !r.is_unit(&r.from_i64(2));
    let mod2_pattern = needs_pattern.then(|| {
        sweep_steps(b.n())
            .iter()
            .filter(|s| s.middle)
            .map(|s| u8::from(!r.is_zero(target.get(s.target.0, s.target.1))))
            .collect()
    });
    Ok(ReductionResult { g, target, mod2_pattern })
}

/// Reduce an integral matrix over `Z/p^k` and check the answer is the
/// truncation of the one at level `k+1`.
pub fn reduce_padic(b: &ReducibleMatrix<Integers>, p: u64, k: u32) -> Result<ReductionResult<ZMod>> {
    let lvl = |k: u32| -> Result<ReductionResult<ZMod>> {
        let m = p.checked_pow(k).ok_or_else(|| Error::LevelTooDeep { level: k, max: 62 / p.ilog2().max(1) })?;
        let ring = ZMod::new(m)?;
        let bm = ReducibleMatrix::new(b.as_sym().map_to(ring)?)?;
        reduce_over_field(&bm)
    };
    let lo = lvl(k)?;
    let hi = lvl(k + 1)?;
    let ring = ZMod::new(p.pow(k))?;
    let down = ReducibleMatrix::new(hi.target.as_sym().map_to(ring)?)?;
    if down != lo.target || hi.g.map_to(ring)? != lo.g {
        return Err(Error::StabilizationFailure(format!("reduction at level {k} differs from level {}", k + 1)));
    }
    Ok(lo)
}

/// A canonical representative of a `P(Z)`-orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalOrbitRep {
    /// Coordinates on `W0` in the order of `w0_positions`.
    pub coords: Vec<BigInt>,
    /// Slicing entries, all positive.
    pub slicing: Vec<BigInt>,
    pub n: usize,
}

impl CanonicalOrbitRep {
    pub fn matrix(&self) -> ReducibleMatrix<Integers> {
        ReducibleMatrix::from_w0_coords(Integers, self.n, &self.coords).expect("valid coordinates")
    }
}

/// Diagonal `+-1` elements of `G(Z)` (for even `n` including multiplier -1),
/// one per class.
pub fn sign_elements(n: usize) -> Vec<GroupElem<Integers>> {
    let h = n / 2;
    let mut out: Vec<GroupElem<Integers>> = Vec::new();
    let cs: &[i64] = if n % 2 == 0 { &[1, -1] } else { &[1] };
    for &c in cs {
        for mask in 0u32..1 << h {
            let mut t = vec![BigInt::one(); n];
            for i in 0..h {
                if mask >> i & 1 == 1 {
                    t[i] = -BigInt::one();
                }
                t[n - 1 - i] = &t[i] * c;
            }
            if let Ok(g) = diag_elem(&Integers, &t) {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// The sign element making every slicing entry positive.
fn sign_normalizer(b: &ReducibleMatrix<Integers>) -> GroupElem<Integers> {
    let n = b.n();
    let h = n / 2;
    let s = b.slicing();
    let neg = |x: &BigInt| if x.is_negative() { -1i64 } else { 1 };
    let mut t = vec![1i64; n];
    let c = if n % 2 == 0 { neg(&s[h - 1]) } else { 1 };
    let top = if n % 2 == 0 { h - 1 } else { h };
    for k in (1..=top).rev() {
        t[k - 1] = t[k] * neg(&s[k - 1]);
    }
    for i in 1..=h {
        t[n - i] = c * t[i - 1];
    }
    let t: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
    diag_elem(&Integers, &t).expect("sign element")
}

struct IntegerRule;

impl ParamRule<Integers> for IntegerRule {
    fn choose(&mut self, _: &Integers, x: &BigInt, b: &BigInt, st: &SweepStep) -> Result<BigInt> {
        let step = if st.middle { BigInt::from(2) } else { BigInt::one() };
        let d = b * &step;
        Ok(x.div_floor(&d) * step)
    }
}

/// Canonical representative of the `P(Z)`-orbit of `b`, with the element
/// carrying `b` to it. Signs first (all slicing entries positive), then the
/// sweep puts each target entry in `[0, D)`, `D` the slicing entry of its
/// row (doubled for middle-row generators of odd `n`).
pub fn canonical_form_z_with_witness(
    b: &ReducibleMatrix<Integers>,
) -> Result<(CanonicalOrbitRep, GroupElem<Integers>)> {
    let n = b.n();
    for (k, x) in b.slicing().iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroSliceEntry(k + 1));
        }
    }
    if inv(b.as_sym()).disc().is_zero() {
        return Err(Error::DegenerateInput("discriminant is zero".into()));
    }
    let s = sign_normalizer(b);
    let pos = act_w0(&s, b);
    let (u, out) = sweep(&pos, &mut IntegerRule)?;
    let rep = CanonicalOrbitRep { coords: out.w0_coords(), slicing: out.slicing(), n };
    Ok((rep, u.mul(&s)))
}

pub fn canonical_form_z(b: &ReducibleMatrix<Integers>) -> Result<CanonicalOrbitRep> {
    canonical_form_z_with_witness(b).map(|x| x.0)
}

/// Whether `b1` and `b2` lie in the same `P(Z)`-orbit.
pub fn equivalent_z(b1: &ReducibleMatrix<Integers>, b2: &ReducibleMatrix<Integers>) -> Result<bool> {
    if b1.n() != b2.n() {
        return Ok(false);
    }
    Ok(canonical_form_z(b1)? == canonical_form_z(b2)?)
}

/// Whether `b` is its own canonical form.
pub fn is_canonical(b: &ReducibleMatrix<Integers>) -> Result<bool> {
    Ok(canonical_form_z(b)?.coords == b.w0_coords())
}

/// Generators used by the BFS oracle over `Z`: `u_ij(+-1)` (`+-2` in the
/// middle row) and the sign elements.
pub fn integer_generators(n: usize) -> Vec<GroupElem<Integers>> {
    let mut gens = sign_elements(n);
    gens.retain(|g| !g.is_identity());
    for (i, j) in unipotent_indices(n) {
        let a = if crate::group::is_middle_row(n, i) { 2 } else { 1 };
        for v in [a, -a] {
            gens.push(unipotent_gen(&Integers, n, i, j, &BigInt::from(v)).expect("generator"));
        }
    }
    gens
}

/// BFS closure of `b` under `integer_generators`, restricted to matrices
/// with all entries bounded by `entry_bound` in absolute value. Fails with
/// `BoxTooLarge` once more than `cap` points are visited.
pub fn orbit_bfs_oracle(b: &ReducibleMatrix<Integers>, entry_bound: i64, cap: usize) -> Result<BTreeSet<Vec<BigInt>>> {
    if b.slicing().iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroSliceEntry(b.slicing().iter().position(|x| x.is_zero()).unwrap() + 1));
    }
    let bound = BigInt::from(entry_bound);
    let inside = |c: &[BigInt]| c.iter().all(|x| x.abs() <= bound);
    let start = b.w0_coords();
    if !inside(&start) {
        return Err(Error::DegenerateInput("start point outside the box".into()));
    }
    let gens = integer_generators(b.n());
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([b.clone()]);
    while let Some(cur) = queue.pop_front() {
        for g in &gens {
            let next = act_w0(g, &cur);
            let c = next.w0_coords();
            if inside(&c) && seen.insert(c) {
                if seen.len() > cap {
                    return Err(Error::BoxTooLarge { size: seen.len() as u128, cap: cap as u128 });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// All elements of `P(Z/m)` written as torus times a product of root
/// subgroup elements, when the product map is injective (`m` odd prime).
/// Size: `(m-1)^floor(n/2) m^#N`.
pub fn enumerate_parabolic(ring: ZMod, n: usize) -> Result<Vec<GroupElem<ZMod>>> {
    let m = ring.modulus();
    let gens = unipotent_indices(n);
    let units: Vec<u64> = (1..m).filter(|&x| ring.is_unit(&x)).collect();
    let h = n / 2;
    let size = (units.len() as u128).pow(h as u32) * (m as u128).pow(gens.len() as u32);
    if size > 5_000_000 {
        return Err(Error::InstanceTooLarge(format!("#P = {size}")));
    }
    // Odd n varies t_1..t_h; even n fixes t_1 = 1 and varies c, t_2..t_h.
    let mut tori = Vec::new();
    let mut idx = vec![0usize; h];
    loop {
        let mut t = vec![1u64; n];
        let c = if n % 2 == 0 { units[idx[0]] } else { 1 };
        for i in 0..h {
            if n % 2 == 1 || i > 0 {
                t[i] = units[idx[i]];
            }
        }
        for i in 0..h {
            t[n - 1 - i] = ring.mul(&c, &ring.inverse(&t[i]).expect("unit"));
        }
        tori.push(diag_elem(&ring, &t)?);
        let Some(k) = (0..h).find(|&k| idx[k] + 1 < units.len()) else { break };
        idx[k] += 1;
        idx[..k].iter_mut().for_each(|x| *x = 0);
    }
    let mut out = tori;
    for &(i, j) in &gens {
        let us: Vec<GroupElem<ZMod>> = (0..m).map(|v| unipotent_gen(&ring, n, i, j, &v)).collect::<Result<_>>()?;
        out = out.iter().flat_map(|g| us.iter().map(move |u| g.mul(u))).collect();
    }
    Ok(out)
}

/// Elements of `P(F_p)` fixing `b`.
pub fn stabilizer_fp(b: &ReducibleMatrix<ZMod>) -> Result<Vec<GroupElem<ZMod>>> {
    let ring = *b.ring();
    Ok(enumerate_parabolic(ring, b.n())?.into_iter().filter(|g| act(g, b.as_sym()) == *b.as_sym()).collect())
}

/// All points of `W0(Z/m)` with `inv = f`, for small `m` and `n`.
pub fn fiber_points(ring: ZMod, f: &crate::exactmath::MonicPoly<ZMod>) -> Result<Vec<ReducibleMatrix<ZMod>>> {
    let n = f.n();
    let m = ring.modulus();
    let dim = w0_positions(n).len();
    let size = (m as u128).pow(dim as u32);
    if size > 50_000_000 {
        return Err(Error::BoxTooLarge { size, cap: 50_000_000 });
    }
    let mut out = Vec::new();
    let mut coords = vec![0u64; dim];
    loop {
        let b = ReducibleMatrix::from_w0_coords(ring, n, &coords)?;
        if inv(b.as_sym()) == *f {
            out.push(b);
        }
        let mut k = 0;
        while k < dim {
            coords[k] += 1;
            if coords[k] < m {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
        if k == dim {
            break;
        }
    }
    Ok(out)
}

/// Classes of the finite set `points` under the equivalence generated by
/// BFS inside `|entry| <= search_bound`. Points without a valid canonical
/// form are skipped.
pub fn bfs_classes(points: &[ReducibleMatrix<Integers>], search_bound: i64, cap: usize) -> Result<usize> {
    let mut assigned: HashSet<Vec<BigInt>> = HashSet::new();
    let mut classes = 0;
    for b in points {
        let c = b.w0_coords();
        if assigned.contains(&c) {
            continue;
        }
        let orbit = orbit_bfs_oracle(b, search_bound, cap)?;
        classes += 1;
        assigned.extend(orbit);
    }
    Ok(classes)
}

/// Positions of the slicing entries, re-exported for callers that build
/// canonical boxes.
pub fn slicing_coords(n: usize) -> Vec<usize> {
    let pos = w0_positions(n);
    slicing_positions(n).iter().map(|p| pos.iter().position(|q| q == p).expect("slicing in W0")).collect()
}
