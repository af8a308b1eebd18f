//! Difference-bound matrices.
//!
//! Entry `(i, j)` bounds `x_i - x_j`. Clock 0 is the constant zero. Every
//! public operation keeps the matrix canonical (all-pairs shortest paths), so
//! inclusion and projections can be read off entry by entry. Empty zones are
//! normalized to a single representation per dimension.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bound::Bound;
use crate::error::Error;
use crate::interval::Interval;

/// Clock index inside a DBM. Index 0 is the reference clock.
pub type Clock = usize;

/// The atomic constraint `x_i - x_j ≺ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub i: Clock,
    pub j: Clock,
    pub bound: Bound,
}

impl Constraint {
    pub const fn new(i: Clock, j: Clock, bound: Bound) -> Constraint {
        Constraint { i, j, bound }
    }

    /// `x ≤ c` (or `x < c`).
    pub const fn upper(x: Clock, bound: Bound) -> Constraint {
        Constraint { i: x, j: 0, bound }
    }

    /// `x ≥ c`, or `x > c` when `strict`.
    pub const fn lower(x: Clock, c: i64, strict: bool) -> Constraint {
        Constraint { i: 0, j: x, bound: Bound::new(-c, strict) }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dbm {
    dim: usize,
    m: Vec<Bound>,
}

impl Dbm {
    /// All valuations with every clock non-negative.
    pub fn universe(dim: usize) -> Dbm {
        assert!(dim >= 1, "a DBM needs the reference clock");
        let mut m = vec![Bound::INFINITY; dim * dim];
        for k in 0..dim {
            m[k * dim + k] = Bound::LE_ZERO;
            m[k] = Bound::LE_ZERO;
        }
        Dbm { dim, m }
    }

    /// The single valuation with every clock at 0.
    pub fn zero(dim: usize) -> Dbm {
        assert!(dim >= 1, "a DBM needs the reference clock");
        Dbm { dim, m: vec![Bound::LE_ZERO; dim * dim] }
    }

    /// The canonical empty zone.
    pub fn empty(dim: usize) -> Dbm {
        let mut d = Dbm::zero(dim);
        d.m[0] = Bound::LT_ZERO;
        d
    }

    /// Builds a canonical DBM from `universe(dim)` and a list of constraints.
    pub fn from_constraints(dim: usize, cs: &[Constraint]) -> Dbm {
        Dbm::universe(dim).intersect(cs)
    }

    /// Builds from a raw row-major matrix and closes it.
    pub fn from_matrix(dim: usize, m: Vec<Bound>) -> Dbm {
        assert_eq!(m.len(), dim * dim);
        Dbm { dim, m }.close()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: Clock, j: Clock) -> Bound {
        self.m[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: Clock, j: Clock, b: Bound) {
        self.m[i * self.dim + j] = b;
    }

    pub fn is_empty(&self) -> bool {
        self.m[0] < Bound::LE_ZERO
    }

    fn make_empty(&mut self) {
        let dim = self.dim;
        *self = Dbm::empty(dim);
    }

    /// Floyd–Warshall canonicalization; detects emptiness.
    pub fn close(mut self) -> Dbm {
        if self.is_empty() {
            self.make_empty();
            return self;
        }
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.m[i * n + k];
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = ik.add(self.m[k * n + j]);
                    if via < self.m[i * n + j] {
                        self.m[i * n + j] = via;
                    }
                }
            }
            if self.m[k * n + k] < Bound::LE_ZERO {
                self.make_empty();
                return self;
            }
        }
        for i in 0..n {
            if self.m[i * n + i] < Bound::LE_ZERO {
                self.make_empty();
                return self;
            }
        }
        self
    }

    /// Tightens one entry and restores canonical form in O(n²).
    fn tighten(&mut self, i: Clock, j: Clock, b: Bound) {
        if self.is_empty() || b >= self.get(i, j) {
            return;
        }
        if self.get(j, i).add(b) < Bound::LE_ZERO {
            self.make_empty();
            return;
        }
        self.set(i, j, b);
        let n = self.dim;
        for k in 0..n {
            let ki = self.get(k, i);
            if ki.is_infinite() {
                continue;
            }
            let kij = ki.add(b);
            for l in 0..n {
                let via = kij.add(self.get(j, l));
                if via < self.get(k, l) {
                    self.set(k, l, via);
                }
            }
        }
    }

    /// Conjunction with atomic constraints.
    pub fn intersect(mut self, cs: &[Constraint]) -> Dbm {
        for c in cs {
            debug_assert!(c.i < self.dim && c.j < self.dim);
            self.tighten(c.i, c.j, c.bound);
            if self.is_empty() {
                break;
            }
        }
        self
    }

    /// Conjunction with a single constraint.
    pub fn constrain(self, c: Constraint) -> Dbm {
        self.intersect(&[c])
    }

    /// Conjunction with another zone of the same dimension.
    pub fn intersect_zone(mut self, other: &Dbm) -> Dbm {
        assert_eq!(self.dim, other.dim);
        if other.is_empty() {
            self.make_empty();
            return self;
        }
        if self.is_empty() {
            return self;
        }
        let mut changed = false;
        for k in 0..self.m.len() {
            if other.m[k] < self.m[k] {
                self.m[k] = other.m[k];
                changed = true;
            }
        }
        if changed {
            self.close()
        } else {
            self
        }
    }

    /// Whether the two zones share a valuation.
    pub fn intersects(&self, other: &Dbm) -> bool {
        !self.clone().intersect_zone(other).is_empty()
    }

    /// Time successors: `{v + d | v ∈ Z, d ≥ 0}`.
    pub fn up(mut self) -> Dbm {
        if self.is_empty() {
            return self;
        }
        for i in 1..self.dim {
            self.set(i, 0, Bound::INFINITY);
        }
        self
    }

    /// Time predecessors that keep every clock non-negative.
    pub fn down(mut self) -> Dbm {
        if self.is_empty() {
            return self;
        }
        let n = self.dim;
        for j in 1..n {
            let mut b = Bound::LE_ZERO;
            for i in 1..n {
                b = b.min(self.get(i, j));
            }
            self.set(0, j, b);
        }
        self.close()
    }

    /// Sets every clock in `clocks` to 0.
    pub fn reset(mut self, clocks: &[Clock]) -> Result<Dbm, Error> {
        if clocks.contains(&0) {
            return Err(Error::InvalidArgument("the reference clock cannot be reset".into()));
        }
        if self.is_empty() {
            return Ok(self);
        }
        for &x in clocks {
            for j in 0..self.dim {
                let b0j = self.get(0, j);
                let bj0 = self.get(j, 0);
                self.set(x, j, b0j);
                self.set(j, x, bj0);
            }
            self.set(x, x, Bound::LE_ZERO);
        }
        Ok(self)
    }

    /// Removes every constraint on `x` except `x ≥ 0`.
    pub fn free(mut self, x: Clock) -> Result<Dbm, Error> {
        if x == 0 {
            return Err(Error::InvalidArgument("the reference clock cannot be freed".into()));
        }
        if self.is_empty() {
            return Ok(self);
        }
        for j in 0..self.dim {
            if j != x {
                self.set(x, j, Bound::INFINITY);
                let bj0 = self.get(j, 0);
                self.set(j, x, bj0);
            }
        }
        self.set(0, x, Bound::LE_ZERO);
        Ok(self)
    }

    /// Drops every constraint on `x`, including `x ≥ 0`. Used for auxiliary
    /// clocks whose value may be negative; only their differences are read.
    pub fn unbound(mut self, x: Clock) -> Result<Dbm, Error> {
        if x == 0 {
            return Err(Error::InvalidArgument("the reference clock cannot be unbound".into()));
        }
        if self.is_empty() {
            return Ok(self);
        }
        for j in 0..self.dim {
            if j != x {
                self.set(x, j, Bound::INFINITY);
                self.set(j, x, Bound::INFINITY);
            }
        }
        Ok(self)
    }

    /// True iff every valuation of `other` lies in `self`.
    pub fn includes(&self, other: &Dbm) -> bool {
        assert_eq!(self.dim, other.dim);
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        other.m.iter().zip(&self.m).all(|(o, s)| o <= s)
    }

    /// Exact range of `x - y` over the zone.
    pub fn difference_bounds(&self, x: Clock, y: Clock) -> Interval {
        if self.is_empty() {
            return Interval::empty();
        }
        Interval::from_bounds(self.get(y, x), self.get(x, y))
    }

    /// Classic maximal-constant normalization. `max[k]` is the ceiling of clock
    /// `k` (`max[0]` is ignored and treated as 0); a negative ceiling marks a
    /// clock that no guard mentions.
    pub fn extrapolate(mut self, max: &[i64]) -> Dbm {
        assert_eq!(max.len(), self.dim);
        if self.is_empty() {
            return self;
        }
        let n = self.dim;
        let ceil = |k: usize| if k == 0 { 0 } else { max[k] };
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b.is_infinite() {
                    continue;
                }
                if i != 0 && b > Bound::le(ceil(i)) {
                    self.set(i, j, Bound::INFINITY);
                    changed = true;
                } else if j != 0 && b < Bound::lt(-ceil(j)) {
                    self.set(i, j, Bound::lt(-ceil(j)));
                    changed = true;
                }
            }
        }
        if changed {
            self.close()
        } else {
            self
        }
    }

    /// Smallest zone containing both.
    pub fn convex_hull(&self, other: &Dbm) -> Dbm {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let m = self.m.iter().zip(&other.m).map(|(a, b)| *a.max(b)).collect();
        Dbm { dim: self.dim, m }
    }

    /// `self \ other` as a list of pairwise disjoint zones.
    pub fn subtract(&self, other: &Dbm) -> Vec<Dbm> {
        if self.is_empty() {
            return Vec::new();
        }
        if !self.intersects(other) {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = other.get(i, j);
                if i == j || b.is_infinite() || b >= rest.get(i, j) {
                    continue;
                }
                let outside = rest.clone().constrain(Constraint::new(j, i, b.complement()));
                if !outside.is_empty() {
                    out.push(outside);
                }
                rest = rest.constrain(Constraint::new(i, j, b));
                if rest.is_empty() {
                    return out;
                }
            }
        }
        out
    }

    /// Membership of an integer valuation; `v[0]` must be 0.
    pub fn contains_point(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.is_empty() {
            return false;
        }
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j).admits(v[i] - v[j])))
    }

    /// Projection onto the clocks listed in `keep`, which must start with 0.
    pub fn remove_clocks(&self, keep: &[Clock]) -> Dbm {
        if self.is_empty() {
            return Dbm::empty(keep.len());
        }
        let n = keep.len();
        let mut m = Vec::with_capacity(n * n);
        for &i in keep {
            for &j in keep {
                m.push(self.get(i, j));
            }
        }
        Dbm { dim: n, m }
    }

    /// Embeds into a larger dimension: clock `k` of `self` becomes clock
    /// `map[k]` of the result; new clocks are unconstrained, sign included.
    pub fn embed(&self, dim: usize, map: &[Clock]) -> Dbm {
        assert_eq!(map.len(), self.dim);
        if self.is_empty() {
            return Dbm::empty(dim);
        }
        let mut m = vec![Bound::INFINITY; dim * dim];
        for k in 0..dim {
            m[k * dim + k] = Bound::LE_ZERO;
        }
        let mut out = Dbm { dim, m };
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(map[i], map[j], self.get(i, j));
            }
        }
        out.close()
    }
}

impl fmt::Debug for Dbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("Dbm(empty)");
        }
        f.write_str("Dbm{")?;
        let mut first = true;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = self.get(i, j);
                if i == j || b.is_infinite() || (i == 0 && b == Bound::LE_ZERO) {
                    continue;
                }
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "x{i}-x{j}{b:?}")?;
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_in(dim: usize, x: Clock, lo: i64, hi: i64) -> Dbm {
        Dbm::from_constraints(
            dim,
            &[Constraint::lower(x, lo, false), Constraint::upper(x, Bound::le(hi))],
        )
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        let z = Dbm::from_constraints(
            2,
            &[Constraint::upper(1, Bound::le(5)), Constraint::lower(1, 7, false)],
        );
        assert!(z.is_empty());
        assert_eq!(z, Dbm::empty(2));
    }

    #[test]
    fn close_is_idempotent() {
        let z = x_in(3, 1, 2, 6).constrain(Constraint::new(2, 1, Bound::lt(3)));
        assert_eq!(z.clone().close(), z);
    }

    #[test]
    fn up_from_origin() {
        let z = Dbm::zero(2).up();
        assert_eq!(z, Dbm::universe(2));
    }

    #[test]
    fn reset_pins_to_zero() {
        let z = x_in(2, 1, 3, 5).reset(&[1]).unwrap();
        assert_eq!(z, Dbm::zero(2));
        let w = x_in(3, 2, 3, 5);
        assert_eq!(w.clone().reset(&[]).unwrap(), w);
        assert!(Dbm::zero(2).reset(&[0]).is_err());
    }

    #[test]
    fn intersect_scaled_example() {
        let z = Dbm::universe(2).intersect(&[
            Constraint::upper(1, Bound::le(100)),
            Constraint::lower(1, 71, false),
        ]);
        assert_eq!(z.difference_bounds(1, 0), Interval::closed(71, 100));
        assert_eq!(z.clone().intersect(&[]), z);
        assert!(z.constrain(Constraint::lower(1, 101, false)).is_empty());
    }

    #[test]
    fn free_keeps_derived_bounds() {
        // x = 3, y - x ≤ 2, y ≥ 1  ⇒  y ∈ [1, 5] after freeing x.
        let z = Dbm::from_constraints(
            3,
            &[
                Constraint::upper(1, Bound::le(3)),
                Constraint::lower(1, 3, false),
                Constraint::new(2, 1, Bound::le(2)),
                Constraint::lower(2, 1, false),
            ],
        );
        let f = z.free(1).unwrap();
        assert_eq!(f.difference_bounds(2, 0), Interval::closed(1, 5));
        assert_eq!(f.difference_bounds(1, 0), Interval::closed_open(0, None));
        assert_eq!(Dbm::universe(3).free(1).unwrap(), Dbm::universe(3));
        assert!(Dbm::universe(3).free(0).is_err());
    }

    #[test]
    fn inclusion_basics() {
        let small = x_in(2, 1, 2, 3);
        let big = x_in(2, 1, 0, 10);
        assert!(big.includes(&small));
        assert!(!small.includes(&big));
        assert!(small.includes(&small));
        assert!(small.includes(&Dbm::empty(2)));
    }

    #[test]
    fn difference_of_equal_clocks() {
        let z = Dbm::zero(3).up();
        assert_eq!(z.difference_bounds(1, 2), Interval::closed(0, 0));
    }

    #[test]
    fn extrapolation_coarsens_beyond_ceiling() {
        let z = x_in(2, 1, 0, 3);
        assert_eq!(z.clone().extrapolate(&[0, 10]), z);
        let far = Dbm::from_constraints(2, &[Constraint::lower(1, 25, false)]);
        let e = far.clone().extrapolate(&[0, 20]);
        assert_eq!(e.get(0, 1), Bound::lt(-20));
        assert!(e.includes(&far));
    }

    #[test]
    fn subtraction_splits_into_disjoint_parts() {
        let a = x_in(2, 1, 0, 10);
        let b = x_in(2, 1, 3, 5);
        let parts = a.subtract(&b);
        assert_eq!(parts.len(), 2);
        for v in 0..=10 {
            let in_parts = parts.iter().filter(|p| p.contains_point(&[0, v])).count();
            let expect = usize::from(!(3..=5).contains(&v));
            assert_eq!(in_parts, expect, "v = {v}");
        }
        assert!(b.subtract(&a).is_empty());
    }

    #[test]
    fn embedding_and_removal_round_trip() {
        let z = x_in(2, 1, 2, 4);
        let big = z.embed(3, &[0, 2]);
        assert_eq!(big.difference_bounds(2, 0), Interval::closed(2, 4));
        assert_eq!(big.remove_clocks(&[0, 2]), z);
    }
}
