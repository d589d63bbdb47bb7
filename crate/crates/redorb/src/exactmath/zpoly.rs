//! Dense integer polynomials over a generic integer type, used for
//! fraction-free determinants of matrices with polynomial entries.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub trait IntCoeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> IntCoeff for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

fn trim<T: IntCoeff>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mul<T: IntCoeff>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = r[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(r)
}

fn sub<T: IntCoeff>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    let len = a.len().max(b.len());
    let mut r = Vec::with_capacity(len);
    let mut ai = a.into_iter();
    let mut bi = b.into_iter();
    for _ in 0..len {
        let x = ai.next().unwrap_or_else(T::zero);
        let y = bi.next().unwrap_or_else(T::zero);
        r.push(x - y);
    }
    trim(r)
}

/// Exact quotient `a / b`; the caller guarantees divisibility in `Z[x]`.
fn div_exact<T: IntCoeff>(a: Vec<T>, b: &[T]) -> Vec<T> {
    if a.is_empty() {
        return a;
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a;
    if r.len() <= db {
        debug_assert!(r.iter().all(|c| c.is_zero()));
        return Vec::new();
    }
    let mut q = vec![T::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone() / lb.clone();
        if !c.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[k + i] = r[k + i].clone() - c.clone() * bc.clone();
            }
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
    trim(q)
}

/// Determinant of a square matrix with entries in `Z[y]` (ascending
/// coefficient vectors) by Bareiss elimination with row pivoting.
pub fn poly_det<T: IntCoeff>(mut m: Vec<Vec<Vec<T>>>) -> Vec<T> {
    let n = m.len();
    if n == 0 {
        return vec![T::one()];
    }
    let mut negate = false;
    let mut prev: Vec<T> = vec![T::one()];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&r| !m[r][k].is_empty()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = sub(mul(&m[k][k], &m[i][j]), mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact(v, &prev);
            }
        }
        prev = std::mem::take(&mut m[k][k]);
    }
    let d = std::mem::take(&mut m[n - 1][n - 1]);
    if negate {
        d.into_iter().map(|c| -c).collect()
    } else {
        d
    }
}

/// Coefficients `[f_1..f_n]` of `(-1)^floor(n/2) det(y*A + B)` for an integer
/// symmetric matrix `B` given row-major, `A` the anti-diagonal of ones.
pub fn anti_pencil_charpoly<T: IntCoeff>(n: usize, b: &[T]) -> Vec<T> {
    let m: Vec<Vec<Vec<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = b[i * n + j].clone();
                    if i + j == n - 1 {
                        trim(vec![c, T::one()])
                    } else {
                        trim(vec![c])
                    }
                })
                .collect()
        })
        .collect();
    let mut d = poly_det(m);
    d.resize(n + 1, T::zero());
    let flip = (n / 2) % 2 == 1;
    let lead = if flip { -d[n].clone() } else { d[n].clone() };
    debug_assert!(lead.is_one(), "invariant polynomial must be monic");
    (1..=n)
        .map(|i| {
            let c = d[n - i].clone();
            if flip {
                -c
            } else {
                c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_monomial() {
        for n in 1..7 {
            let b = vec![0i128; n * n];
            assert_eq!(anti_pencil_charpoly(n, &b), vec![0i128; n]);
        }
    }

    #[test]
    fn n3_closed_form() {
        // B = [[0,a,c],[a,d,e],[c,e,h]]
        let (a, c, d, e, h) = (2i128, -1, 3, 5, 7);
        let b = vec![0, a, c, a, d, e, c, e, h];
        let f = anti_pencil_charpoly(3, &b);
        assert_eq!(f, vec![2 * c + d, c * c + 2 * c * d - 2 * a * e, c * c * d - 2 * a * e * c + a * a * h]);
    }
}
