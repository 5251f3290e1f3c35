use std::fmt;

use serde::{Deserialize, Serialize};

/// A range `[lo, hi]` of possible dimensions; `hi = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimInterval {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl Default for DimInterval {
    fn default() -> Self {
        Self::UNKNOWN
    }
}

impl DimInterval {
    pub const UNKNOWN: Self = Self { lo: 0, hi: None };
    pub const ZERO: Self = Self { lo: 0, hi: Some(0) };

    /// Panics if `lo > hi`.
    pub fn new(lo: u64, hi: Option<u64>) -> Self {
        if let Some(h) = hi {
            assert!(lo <= h, "empty interval [{lo}, {h}]");
        }
        Self { lo, hi }
    }

    pub fn exact(n: u64) -> Self {
        Self { lo: n, hi: Some(n) }
    }

    pub fn at_least(n: u64) -> Self {
        Self { lo: n, hi: None }
    }

    pub fn at_most(n: u64) -> Self {
        Self { lo: 0, hi: Some(n) }
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn exact_value(&self) -> Option<u64> {
        self.is_exact().then_some(self.lo)
    }

    pub fn is_zero(&self) -> bool {
        self.hi == Some(0)
    }

    /// Known to be nonzero.
    pub fn is_positive(&self) -> bool {
        self.lo >= 1
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && self.hi.is_none_or(|h| n <= h)
    }

    /// `self ⊆ other`.
    pub fn within(&self, other: &Self) -> bool {
        self.lo >= other.lo
            && match (self.hi, other.hi) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            }
    }

    /// Intersection, or `None` when empty.
    pub fn meet(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (None, h) | (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match hi {
            Some(h) if h < lo => None,
            _ => Some(Self { lo, hi }),
        }
    }

    /// The complement of a one-sided interval, when it is again an interval of naturals.
    pub fn complement(&self) -> Option<Self> {
        match (self.lo, self.hi) {
            (0, Some(h)) => Some(Self::at_least(h + 1)),
            (l, None) if l >= 1 => Some(Self::at_most(l - 1)),
            _ => None,
        }
    }

}

impl fmt::Display for DimInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) if h == self.lo => write!(f, "{h}"),
            Some(h) => write!(f, "[{}, {h}]", self.lo),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meet_and_complement() {
        let a = DimInterval::at_most(2);
        let b = DimInterval::at_least(3);
        assert_eq!(a.meet(&b), None);
        assert_eq!(a.complement(), Some(b));
        assert_eq!(b.complement(), Some(a));
        assert_eq!(DimInterval::exact(1).complement(), None);
        assert_eq!(DimInterval::at_least(1).meet(&DimInterval::at_most(1)), Some(DimInterval::exact(1)));
        assert!(DimInterval::exact(0).within(&DimInterval::at_most(1)));
        assert!(!DimInterval::UNKNOWN.within(&DimInterval::at_most(1)));
    }

    #[test]
    fn display() {
        assert_eq!(DimInterval::exact(3).to_string(), "3");
        assert_eq!(DimInterval::at_most(1).to_string(), "[0, 1]");
        assert_eq!(DimInterval::UNKNOWN.to_string(), "[0, inf)");
    }
}
