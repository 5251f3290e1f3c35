//! Interval-valued line-bundle cohomology on a fake projective plane.
//!
//! The engine saturates a finite set of classes under Riemann-Roch, Serre
//! duality, Kodaira vanishing, superadditivity of sections and injected
//! axioms, recording every narrowing as a step of a [`Derivation`].

mod check;
mod derivation;
mod engine;
mod interval;
pub mod rules;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use check::recheck;
pub use derivation::{AxiomRef, Claim, Derivation, DerivationError, SignedBound, Step};
pub use engine::{infer, infer_with, refute, EngineConfig, EngineError, Inconsistency, Inference, Refutation};
pub use interval::DimInterval;

use crate::picard::{FakePlane, LineBundleClass};

/// `chi(L) = L·(L - K)/2 + 1 - q + p_g`, which on a fake plane is `1 + k(k - 3)/2` for `L ≡ kL1`.
pub fn chi(l: &LineBundleClass) -> i64 {
    let k = l.degree;
    let k_deg = 3;
    k * (k - k_deg) / 2 + 1 - FakePlane::Q + FakePlane::PG
}

/// Intersection pairing on the rank-one lattice with `L1^2 = 1`.
pub fn intersection(l: &LineBundleClass, m: &LineBundleClass) -> i64 {
    l.degree * m.degree
}

/// A statement `h^index(class) ∈ interval`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub class: LineBundleClass,
    pub index: u8,
    pub interval: DimInterval,
}

impl Fact {
    pub fn new(class: LineBundleClass, index: u8, interval: DimInterval) -> Self {
        assert!(index <= 2, "surfaces have cohomology in degrees 0..=2");
        Self { class, index, interval }
    }

    /// The negation of a one-sided fact, when it is again a fact.
    pub fn negation(&self) -> Option<Fact> {
        self.interval.complement().map(|i| Fact::new(self.class.clone(), self.index, i))
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = format!("h{}{}", self.index, self.class);
        match (self.interval.lo, self.interval.hi) {
            (lo, Some(hi)) if lo == hi => write!(f, "{h} = {lo}"),
            (0, Some(hi)) => write!(f, "{h} <= {hi}"),
            (lo, None) => write!(f, "{h} >= {lo}"),
            (lo, Some(hi)) => write!(f, "{lo} <= {h} <= {hi}"),
        }
    }
}

/// Dimensions known for one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub h: [DimInterval; 3],
    pub chi: i64,
}

impl Entry {
    pub fn exact(&self) -> Option<[u64; 3]> {
        Some([self.h[0].exact_value()?, self.h[1].exact_value()?, self.h[2].exact_value()?])
    }

    /// Some choice of values in the intervals satisfies `h0 - h1 + h2 = chi`.
    pub fn chi_consistent(&self) -> bool {
        let lo = self.h[0].lo as i128 - self.h[1].hi.map_or(i128::MAX / 4, |v| v as i128) + self.h[2].lo as i128;
        let hi = self.h[0].hi.map_or(i128::MAX / 4, |v| v as i128) - self.h[1].lo as i128
            + self.h[2].hi.map_or(i128::MAX / 4, |v| v as i128);
        lo <= self.chi as i128 && self.chi as i128 <= hi
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CohomologyTable {
    entries: BTreeMap<LineBundleClass, Entry>,
}

impl CohomologyTable {
    pub(crate) fn insert(&mut self, class: LineBundleClass, entry: Entry) {
        self.entries.insert(class, entry);
    }

    pub fn get(&self, class: &LineBundleClass) -> Option<&Entry> {
        self.entries.get(class)
    }

    pub fn h(&self, class: &LineBundleClass, index: u8) -> Option<DimInterval> {
        self.entries.get(class).map(|e| e.h[index as usize])
    }

    pub fn exact(&self, class: &LineBundleClass) -> Option<[u64; 3]> {
        self.entries.get(class)?.exact()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LineBundleClass, &Entry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every informative interval as a fact; feeding these back into the engine is a no-op.
    pub fn to_facts(&self) -> Vec<Fact> {
        self.entries
            .iter()
            .flat_map(|(c, e)| {
                (0u8..3).filter(move |&i| e.h[i as usize] != DimInterval::UNKNOWN).map(move |i| {
                    Fact::new(c.clone(), i, e.h[i as usize])
                })
            })
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (c, e) in &self.entries {
            out.push_str(&format!("{c:<16} h0={:<10} h1={:<10} h2={:<10} chi={}\n", e.h[0].to_string(), e.h[1].to_string(), e.h[2].to_string(), e.chi));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(k: i64) -> LineBundleClass {
        FakePlane::keum(4).unwrap().untwisted(k)
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(&class(4)), 3);
        assert_eq!(chi(&class(0)), 1);
        assert_eq!(chi(&class(6)), 10);
        assert_eq!(chi(&class(-1)), 3);
        // Serre symmetry chi(L) = chi(K - L)
        for k in -10..10 {
            assert_eq!(chi(&class(k)), chi(&class(3 - k)));
        }
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection(&class(3), &class(2)), 6);
        assert_eq!(intersection(&class(1), &class(1)), 1);
        assert_eq!(intersection(&class(0), &class(5)), 0);
    }

    #[test]
    fn fact_display_and_negation() {
        let f = Fact::new(class(2), 0, DimInterval::at_least(3));
        assert_eq!(f.to_string(), "h0(2;0,0,0,0) >= 3");
        assert_eq!(f.negation().unwrap().to_string(), "h0(2;0,0,0,0) <= 2");
    }
}
