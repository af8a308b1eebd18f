//! Bounds on clock differences.

use core::cmp::Ordering;
use core::fmt;

/// An upper bound `x - y ≺ c` where `≺` is `<` or `≤`, or no bound at all.
///
/// Encoded as `2c + 1` for `≤ c` and `2c` for `< c`, so the derived integer
/// order is the bound order: smaller constants first, strict before weak.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound(i64);

impl Bound {
    /// The absent bound, `< +∞`.
    pub const INFINITY: Bound = Bound(i64::MAX);
    /// `≤ 0`.
    pub const LE_ZERO: Bound = Bound(1);
    /// `< 0`.
    pub const LT_ZERO: Bound = Bound(0);

    /// Weak bound `≤ value`.
    pub const fn le(value: i64) -> Bound {
        Bound(value * 2 + 1)
    }

    /// Strict bound `< value`.
    pub const fn lt(value: i64) -> Bound {
        Bound(value * 2)
    }

    /// Builds a bound from its constant and strictness.
    pub const fn new(value: i64, strict: bool) -> Bound {
        if strict {
            Bound::lt(value)
        } else {
            Bound::le(value)
        }
    }

    pub const fn is_infinite(self) -> bool {
        self.0 == i64::MAX
    }

    /// The constant, or `None` for `+∞`.
    pub const fn value(self) -> Option<i64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0 >> 1)
        }
    }

    /// True for `<`, also for `+∞`.
    pub const fn is_strict(self) -> bool {
        self.0 & 1 == 0
    }

    /// Sum of two bounds; `+∞` absorbs, strictness is inherited from either side.
    #[inline]
    pub fn add(self, other: Bound) -> Bound {
        if self.is_infinite() || other.is_infinite() {
            Bound::INFINITY
        } else {
            Bound(((self.0 & !1) + (other.0 & !1)) | (self.0 & other.0 & 1))
        }
    }

    /// The bound of the complementary constraint read in the other direction:
    /// `¬(x - y ≤ c)` is `y - x < -c` and `¬(x - y < c)` is `y - x ≤ -c`.
    /// Undefined for `+∞`.
    #[inline]
    pub fn complement(self) -> Bound {
        debug_assert!(!self.is_infinite());
        Bound(1 - self.0)
    }

    /// Whether the integer point `d` satisfies `d ≺ c`.
    pub fn admits(self, d: i64) -> bool {
        match self.value() {
            None => true,
            Some(c) => {
                if self.is_strict() {
                    d < c
                } else {
                    d <= c
                }
            }
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => f.write_str("<inf"),
            Some(v) if self.is_strict() => write!(f, "<{v}"),
            Some(v) => write!(f, "<={v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_strict_first() {
        assert!(Bound::lt(3) < Bound::le(3));
        assert!(Bound::le(3) < Bound::lt(4));
        assert!(Bound::le(-7) < Bound::LT_ZERO);
        assert!(Bound::le(1_000_000) < Bound::INFINITY);
    }

    #[test]
    fn addition() {
        assert_eq!(Bound::le(2).add(Bound::le(-5)), Bound::le(-3));
        assert_eq!(Bound::lt(2).add(Bound::le(-5)), Bound::lt(-3));
        assert_eq!(Bound::le(2).add(Bound::lt(-5)), Bound::lt(-3));
        assert_eq!(Bound::lt(-2).add(Bound::lt(-5)), Bound::lt(-7));
        assert_eq!(Bound::INFINITY.add(Bound::le(-5)), Bound::INFINITY);
        assert_eq!(Bound::lt(4).add(Bound::INFINITY), Bound::INFINITY);
    }

    #[test]
    fn accessors_round_trip() {
        for v in -20..20 {
            for s in [true, false] {
                let b = Bound::new(v, s);
                assert_eq!(b.value(), Some(v));
                assert_eq!(b.is_strict(), s);
            }
        }
        assert_eq!(Bound::INFINITY.value(), None);
    }

    #[test]
    fn complement_flips_direction_and_strictness() {
        assert_eq!(Bound::le(4).complement(), Bound::lt(-4));
        assert_eq!(Bound::lt(4).complement(), Bound::le(-4));
        assert_eq!(Bound::le(-3).complement(), Bound::lt(3));
        for d in -6..6 {
            let b = Bound::le(2);
            assert_ne!(b.admits(d), b.complement().admits(-d));
        }
    }
}
