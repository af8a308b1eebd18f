//! Intervals with open or closed endpoints, and finite unions of them.

use alloc::vec::Vec;
use core::fmt;

use crate::bound::Bound;

/// A set `{d | -d ≺ lo, d ≺ hi}`, i.e. both endpoints stored as DBM bounds.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

/// One endpoint of an interval as a reader sees it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Finite { value: i64, open: bool },
    Infinite,
}

impl Interval {
    /// Builds from the bounds `-d ≺ lo` and `d ≺ hi`.
    pub const fn from_bounds(lo: Bound, hi: Bound) -> Interval {
        Interval { lo, hi }
    }

    pub const fn closed(low: i64, high: i64) -> Interval {
        Interval { lo: Bound::le(-low), hi: Bound::le(high) }
    }

    /// `[low, high)`, or `[low, +∞)` when `high` is `None`.
    pub const fn closed_open(low: i64, high: Option<i64>) -> Interval {
        let hi = match high {
            Some(h) => Bound::lt(h),
            None => Bound::INFINITY,
        };
        Interval { lo: Bound::le(-low), hi }
    }

    pub const fn new(low: Endpoint, high: Endpoint) -> Interval {
        let lo = match low {
            Endpoint::Finite { value, open } => Bound::new(-value, open),
            Endpoint::Infinite => Bound::INFINITY,
        };
        let hi = match high {
            Endpoint::Finite { value, open } => Bound::new(value, open),
            Endpoint::Infinite => Bound::INFINITY,
        };
        Interval { lo, hi }
    }

    pub const fn everything() -> Interval {
        Interval { lo: Bound::INFINITY, hi: Bound::INFINITY }
    }

    pub fn empty() -> Interval {
        Interval { lo: Bound::LT_ZERO, hi: Bound::LT_ZERO }
    }

    pub fn lower_bound(&self) -> Bound {
        self.lo
    }

    pub fn upper_bound(&self) -> Bound {
        self.hi
    }

    pub fn low(&self) -> Endpoint {
        match self.lo.value() {
            None => Endpoint::Infinite,
            Some(v) => Endpoint::Finite { value: -v, open: self.lo.is_strict() },
        }
    }

    pub fn high(&self) -> Endpoint {
        match self.hi.value() {
            None => Endpoint::Infinite,
            Some(v) => Endpoint::Finite { value: v, open: self.hi.is_strict() },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.add(self.hi) < Bound::LE_ZERO
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo.admits(-d) && self.hi.admits(d)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (self.lo <= other.lo && self.hi <= other.hi)
    }

    /// Whether the union of two non-empty intervals is itself an interval.
    fn joins(&self, other: &Interval) -> bool {
        let (a, b) = if self.lo >= other.lo { (self, other) } else { (other, self) };
        // `a` starts no later than `b`; the gap between them is `(a.hi, b.lo)`.
        if a.hi.is_infinite() || b.lo.is_infinite() {
            return true;
        }
        a.hi.complement().add(b.lo.complement()) < Bound::LE_ZERO
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        match self.low() {
            Endpoint::Infinite => f.write_str("(-inf")?,
            Endpoint::Finite { value, open } => write!(f, "{}{value}", if open { '(' } else { '[' })?,
        }
        match self.high() {
            Endpoint::Infinite => f.write_str(",inf)"),
            Endpoint::Finite { value, open } => write!(f, ",{value}{}", if open { ')' } else { ']' }),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite union of intervals kept sorted, disjoint and non-adjacent.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn new() -> IntervalSet {
        IntervalSet { parts: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> IntervalSet {
        let mut s = IntervalSet::new();
        s.insert(i);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn insert(&mut self, i: Interval) {
        if i.is_empty() {
            return;
        }
        let mut merged = i;
        // A widened interval may touch parts skipped earlier in the same pass.
        loop {
            let before = self.parts.len();
            self.parts.retain(|p| {
                if p.joins(&merged) {
                    merged = merged.hull(p);
                    false
                } else {
                    true
                }
            });
            if self.parts.len() == before {
                break;
            }
        }
        let pos = self.parts.iter().position(|p| p.lo < merged.lo).unwrap_or(self.parts.len());
        self.parts.insert(pos, merged);
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = self.clone();
        for p in &other.parts {
            out.insert(*p);
        }
        out
    }

    pub fn intersect(&self, i: &Interval) -> IntervalSet {
        let mut out = IntervalSet::new();
        for p in &self.parts {
            out.insert(p.intersect(i));
        }
        out
    }

    pub fn contains(&self, d: i64) -> bool {
        self.parts.iter().any(|p| p.contains(d))
    }

    /// Smallest single interval covering the union, empty if the union is.
    pub fn hull(&self) -> Interval {
        self.parts.iter().fold(Interval::empty(), |acc, p| acc.hull(p))
    }

    /// Set inclusion, checked part by part against the (maximal) parts of `other`.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.parts.iter().all(|p| other.parts.iter().any(|q| p.is_subset_of(q)))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
