//! Closed real intervals with outward rounding of every endpoint operation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn widen(lo: f64, hi: f64) -> Interval {
    Interval { lo: lo.next_down(), hi: hi.next_up() }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The exact point `x` (no widening).
    pub fn exact(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// A floating-point approximation of a real number, widened by one ulp each way.
    pub fn around(x: f64) -> Self {
        widen(x, x)
    }

    pub fn with_radius(mid: f64, r: f64) -> Self {
        widen(mid - r, mid + r)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }

    pub fn scale(&self, k: f64) -> Interval {
        self.mul(&Interval::exact(k))
    }

    /// `exp` is monotone; libm is accurate to well under the one-ulp widening
    /// applied on top of a further relative margin.
    pub fn exp(&self) -> Interval {
        let lo = self.lo.exp() * (1.0 - 4.0 * f64::EPSILON);
        let hi = self.hi.exp() * (1.0 + 4.0 * f64::EPSILON);
        widen(lo, hi)
    }

    pub fn powi(&self, k: i32) -> Interval {
        (0..k).fold(Interval::exact(1.0), |acc, _| acc.mul(self))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo, self.hi)
    }
}
