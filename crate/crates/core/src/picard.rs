//! Exact model of the Picard group `Pic(X) = Z·L1 ⊕ Tor` of a fake projective plane.
//!
//! A line-bundle class is a degree (the coefficient of the ample generator `L1`)
//! together with an element of the torsion subgroup, which is `H1(X; Z)`.
//! Torsion groups are products of cyclic groups with explicitly given orders;
//! no normalization to invariant factors is attempted.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("torsion element {element:?} does not belong to group with orders {orders:?}")]
    ForeignElement { element: Vec<u32>, orders: Vec<u32> },
    #[error("cyclic factor orders must be at least 2, got {0:?}")]
    BadOrder(Vec<u32>),
    #[error("G21 plane must have torsion (Z/2)^3, (Z/2)^4 or (Z/2)^6, got orders {0:?}")]
    NotKeumTorsion(Vec<u32>),
    #[error("G21 plane must use the basis with K = 3·O(1), got canonical torsion {0:?}")]
    KeumCanonicalTorsion(Vec<u32>),
    #[error("unknown plane id `{0}`")]
    UnknownPlane(String),
}

/// A finite abelian group `Z/n1 × ... × Z/nr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorsionGroup {
    orders: Vec<u32>,
}

/// An element of a [`TorsionGroup`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorsionElement {
    coords: Vec<u32>,
}

impl TorsionElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TorsionGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self, PicardError> {
        if orders.iter().any(|&n| n < 2) {
            return Err(PicardError::BadOrder(orders));
        }
        Ok(Self { orders })
    }

    pub fn trivial() -> Self {
        Self { orders: Vec::new() }
    }

    /// `(Z/2)^rank`.
    pub fn elementary_two(rank: usize) -> Self {
        Self { orders: vec![2; rank] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().map(|&n| u64::from(n)).product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &n| lcm(acc, u64::from(n)))
    }

    pub fn is_elementary_two(&self) -> bool {
        self.orders.iter().all(|&n| n == 2)
    }

    pub fn zero(&self) -> TorsionElement {
        TorsionElement { coords: vec![0; self.orders.len()] }
    }

    /// Builds an element, reducing every coordinate modulo its factor order.
    pub fn element(&self, coords: &[i64]) -> Result<TorsionElement, PicardError> {
        if coords.len() != self.orders.len() {
            return Err(PicardError::ForeignElement {
                element: coords.iter().map(|&c| c as u32).collect(),
                orders: self.orders.clone(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| c.rem_euclid(i64::from(n)) as u32)
            .collect();
        Ok(TorsionElement { coords })
    }

    pub fn contains(&self, t: &TorsionElement) -> bool {
        t.coords.len() == self.orders.len() && t.coords.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    fn check(&self, t: &TorsionElement) -> Result<(), PicardError> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(PicardError::ForeignElement { element: t.coords.clone(), orders: self.orders.clone() })
        }
    }

    pub fn add(&self, a: &TorsionElement, b: &TorsionElement) -> Result<TorsionElement, PicardError> {
        self.check(a)?;
        self.check(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(TorsionElement { coords })
    }

    pub fn neg(&self, a: &TorsionElement) -> Result<TorsionElement, PicardError> {
        self.scale(-1, a)
    }

    pub fn scale(&self, k: i64, a: &TorsionElement) -> Result<TorsionElement, PicardError> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| {
                let n = i64::from(n);
                (k.rem_euclid(n) * i64::from(x)).rem_euclid(n) as u32
            })
            .collect();
        Ok(TorsionElement { coords })
    }

    /// Order of `a` in the group.
    pub fn order_of(&self, a: &TorsionElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| u64::from(n) / gcd(u64::from(n), u64::from(x)))
            .fold(1, lcm)
    }

    /// All elements in lexicographic order of coordinates; the zero element comes first.
    pub fn elements(&self) -> Vec<TorsionElement> {
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut cur = vec![0u32; self.orders.len()];
        loop {
            out.push(TorsionElement { coords: cur.clone() });
            // odometer with the last coordinate running fastest
            let mut i = self.orders.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let mut i = 0;
        let mut parts = Vec::new();
        while i < self.orders.len() {
            let n = self.orders[i];
            let mut j = i;
            while j < self.orders.len() && self.orders[j] == n {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{n}"));
            } else {
                parts.push(format!("(Z/{n})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" x "))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A class in `Pic(X)`: `degree·L1 + torsion`.
///
/// Ordering is lexicographic in `(degree, torsion)`, which is the order the
/// inference engine visits classes in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LineBundleClass {
    pub degree: i64,
    #[serde(rename = "torsion_coords")]
    pub torsion: TorsionElement,
}

impl LineBundleClass {
    pub fn new(degree: i64, torsion: TorsionElement) -> Self {
        Self { degree, torsion }
    }

    pub fn numerically_equivalent(&self, other: &Self) -> bool {
        self.degree == other.degree
    }

    /// Picard rank one with `L1` ample: a class is ample exactly when its degree is positive.
    pub fn is_ample(&self) -> bool {
        self.degree >= 1
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.degree, self.torsion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AutLabel {
    G21,
    Other,
    Trivial,
}

impl AutLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "G21" | "g21" => Some(Self::G21),
            "other" => Some(Self::Other),
            "trivial" => Some(Self::Trivial),
            _ => None,
        }
    }
}

impl fmt::Display for AutLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::G21 => "G21",
            Self::Other => "other",
            Self::Trivial => "trivial",
        })
    }
}

/// A fake projective plane: `K^2 = 9`, `c2 = 3`, `p_g = q = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FakePlane {
    id: String,
    torsion: TorsionGroup,
    aut: AutLabel,
    canonical: LineBundleClass,
}

impl FakePlane {
    pub const K2: i64 = 9;
    pub const C2: i64 = 3;
    pub const PG: i64 = 0;
    pub const Q: i64 = 0;

    pub fn new(
        id: impl Into<String>,
        torsion: TorsionGroup,
        aut: AutLabel,
        canonical_torsion: TorsionElement,
    ) -> Result<Self, PicardError> {
        torsion.check(&canonical_torsion)?;
        if aut == AutLabel::G21 {
            if !(torsion.is_elementary_two() && matches!(torsion.rank(), 3 | 4 | 6)) {
                return Err(PicardError::NotKeumTorsion(torsion.orders.clone()));
            }
            if !canonical_torsion.is_zero() {
                return Err(PicardError::KeumCanonicalTorsion(canonical_torsion.coords));
            }
        }
        Ok(Self { id: id.into(), torsion, aut, canonical: LineBundleClass::new(3, canonical_torsion) })
    }

    /// One of Keum's planes with `H1 = (Z/2)^rank`, in the basis where `K = 3·O(1)`.
    pub fn keum(rank: usize) -> Result<Self, PicardError> {
        let g = TorsionGroup::elementary_two(rank);
        let zero = g.zero();
        Self::new(format!("b{rank}"), g, AutLabel::G21, zero)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn torsion_group(&self) -> &TorsionGroup {
        &self.torsion
    }

    pub fn aut(&self) -> AutLabel {
        self.aut
    }

    pub fn is_keum(&self) -> bool {
        self.aut == AutLabel::G21
    }

    pub fn canonical(&self) -> &LineBundleClass {
        &self.canonical
    }

    pub fn class(&self, degree: i64, coords: &[i64]) -> Result<LineBundleClass, PicardError> {
        Ok(LineBundleClass::new(degree, self.torsion.element(coords)?))
    }

    /// `degree·L1` with zero torsion part.
    pub fn untwisted(&self, degree: i64) -> LineBundleClass {
        LineBundleClass::new(degree, self.torsion.zero())
    }

    pub fn add(&self, l: &LineBundleClass, m: &LineBundleClass) -> Result<LineBundleClass, PicardError> {
        Ok(LineBundleClass::new(l.degree + m.degree, self.torsion.add(&l.torsion, &m.torsion)?))
    }

    pub fn sub(&self, l: &LineBundleClass, m: &LineBundleClass) -> Result<LineBundleClass, PicardError> {
        let neg = self.scale(-1, m)?;
        self.add(l, &neg)
    }

    pub fn scale(&self, n: i64, l: &LineBundleClass) -> Result<LineBundleClass, PicardError> {
        Ok(LineBundleClass::new(n * l.degree, self.torsion.scale(n, &l.torsion)?))
    }

    /// `K - L`, the Serre-dual class.
    pub fn serre_dual(&self, l: &LineBundleClass) -> Result<LineBundleClass, PicardError> {
        self.sub(&self.canonical, l)
    }

    pub fn enumerate_torsion(&self) -> Vec<TorsionElement> {
        self.torsion.elements()
    }

    /// All classes of degree `degree`, one per torsion element.
    pub fn classes_of_degree(&self, degree: i64) -> Vec<LineBundleClass> {
        self.torsion.elements().into_iter().map(|t| LineBundleClass::new(degree, t)).collect()
    }

    /// The degree-one classes; equivalently the ample generators, or the classes `L` with `3L ≡ K`.
    pub fn numerical_cubic_roots(&self) -> Vec<LineBundleClass> {
        self.classes_of_degree(1)
    }
}

/// The shipped planes: Keum's `b3`, `b4`, `b6` and a configurable `generic` plane.
#[derive(Debug, Clone)]
pub struct PlaneRegistry {
    planes: Vec<FakePlane>,
}

impl Default for PlaneRegistry {
    fn default() -> Self {
        let mut planes: Vec<FakePlane> =
            [3, 4, 6].into_iter().map(|r| FakePlane::keum(r).expect("Keum ranks are valid")).collect();
        let g = TorsionGroup::new(vec![2, 4]).expect("valid orders");
        let zero = g.zero();
        planes.push(FakePlane::new("generic", g, AutLabel::Trivial, zero).expect("valid plane"));
        Self { planes }
    }
}

impl PlaneRegistry {
    pub fn get(&self, id: &str) -> Result<&FakePlane, PicardError> {
        self.planes.iter().find(|p| p.id == id).ok_or_else(|| PicardError::UnknownPlane(id.to_string()))
    }

    pub fn planes(&self) -> &[FakePlane] {
        &self.planes
    }

    pub fn keum_planes(&self) -> impl Iterator<Item = &FakePlane> {
        self.planes.iter().filter(|p| p.is_keum())
    }

    /// Inserts or replaces a plane by id.
    pub fn insert(&mut self, plane: FakePlane) {
        match self.planes.iter_mut().find(|p| p.id == plane.id) {
            Some(slot) => *slot = plane,
            None => self.planes.push(plane),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b4() -> FakePlane {
        FakePlane::keum(4).unwrap()
    }

    #[test]
    fn exponent_two_cancellation() {
        let p = b4();
        let l = p.class(1, &[1, 0, 1, 0]).unwrap();
        assert_eq!(p.add(&l, &l).unwrap(), p.untwisted(2));
        assert_eq!(p.add(&p.untwisted(3), &p.untwisted(0)).unwrap(), p.untwisted(3));
    }

    #[test]
    fn add_matches_componentwise_mod_two_on_all_pairs() {
        let p = b4();
        let els = p.enumerate_torsion();
        for a in &els {
            for b in &els {
                let l = LineBundleClass::new(1, a.clone());
                let m = LineBundleClass::new(2, b.clone());
                let sum = p.add(&l, &m).unwrap();
                let expect: Vec<u32> = a.coords().iter().zip(b.coords()).map(|(x, y)| x ^ y).collect();
                assert_eq!(sum.degree, 3);
                assert_eq!(sum.torsion.coords(), expect.as_slice());
            }
        }
    }

    #[test]
    fn scale_examples() {
        let p = b4();
        let l = p.class(1, &[0, 1, 1, 0]).unwrap();
        assert_eq!(p.scale(2, &l).unwrap(), p.untwisted(2));
        assert_eq!(p.scale(3, &p.untwisted(1)).unwrap(), *p.canonical());
        assert_eq!(p.scale(0, &l).unwrap(), p.untwisted(0));
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let p = b4();
        let foreign = LineBundleClass::new(1, TorsionGroup::elementary_two(3).zero());
        assert!(matches!(p.add(&p.untwisted(1), &foreign), Err(PicardError::ForeignElement { .. })));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(b4().enumerate_torsion().len(), 16);
        assert!(b4().enumerate_torsion()[0].is_zero());
        assert_eq!(TorsionGroup::trivial().elements().len(), 1);
        assert_eq!(TorsionGroup::elementary_two(3).elements().len(), 8);
        let g = TorsionGroup::new(vec![2, 4, 3]).unwrap();
        assert_eq!(g.elements().len() as u64, g.size());
        assert_eq!(g.exponent(), 12);
    }

    #[test]
    fn cubic_roots() {
        let p = b4();
        let roots = p.numerical_cubic_roots();
        assert_eq!(roots.len(), 16);
        for r in &roots {
            assert_eq!(p.scale(3, r).unwrap().degree, 3);
        }
        let trivial = FakePlane::new("t", TorsionGroup::trivial(), AutLabel::Trivial, TorsionGroup::trivial().zero())
            .unwrap();
        assert_eq!(trivial.numerical_cubic_roots(), vec![LineBundleClass::new(1, TorsionGroup::trivial().zero())]);
    }

    #[test]
    fn keum_invariants_enforced() {
        let g = TorsionGroup::elementary_two(5);
        let z = g.zero();
        assert!(matches!(FakePlane::new("x", g, AutLabel::G21, z), Err(PicardError::NotKeumTorsion(_))));
        let g = TorsionGroup::elementary_two(4);
        let t = g.element(&[1, 0, 0, 0]).unwrap();
        assert!(matches!(FakePlane::new("x", g, AutLabel::G21, t), Err(PicardError::KeumCanonicalTorsion(_))));
    }

    #[test]
    fn group_axioms_exhaustive_for_rank_six() {
        let g = TorsionGroup::elementary_two(6);
        let els = g.elements();
        let z = g.zero();
        for a in &els {
            assert_eq!(g.add(a, &z).unwrap(), *a);
            assert_eq!(g.add(a, &g.neg(a).unwrap()).unwrap(), z);
            assert_eq!(g.scale(2, a).unwrap(), z);
            for b in &els {
                assert_eq!(g.add(a, b).unwrap(), g.add(b, a).unwrap());
            }
        }
    }

    fn group_and_elements() -> impl Strategy<Value = (TorsionGroup, Vec<Vec<i64>>)> {
        prop::collection::vec(2u32..9, 0..4).prop_flat_map(|orders| {
            let n = orders.len();
            (
                Just(TorsionGroup::new(orders).unwrap()),
                prop::collection::vec(prop::collection::vec(-20i64..20, n), 3),
            )
        })
    }

    proptest! {
        #[test]
        fn add_is_associative_and_commutative((g, raw) in group_and_elements(), d in prop::collection::vec(-6i64..6, 3)) {
            let plane = FakePlane::new("p", g.clone(), AutLabel::Other, g.zero()).unwrap();
            let c: Vec<LineBundleClass> = raw.iter().zip(&d)
                .map(|(r, &k)| plane.class(k, r).unwrap()).collect();
            let ab = plane.add(&c[0], &c[1]).unwrap();
            prop_assert_eq!(&ab, &plane.add(&c[1], &c[0]).unwrap());
            let lhs = plane.add(&ab, &c[2]).unwrap();
            let rhs = plane.add(&c[0], &plane.add(&c[1], &c[2]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let inv = plane.scale(-1, &c[0]).unwrap();
            prop_assert_eq!(plane.add(&c[0], &inv).unwrap(), plane.untwisted(0));
            prop_assert_eq!(plane.sub(&ab, &c[1]).unwrap(), c[0].clone());
        }

        #[test]
        fn linear_equality_implies_numerical((g, raw) in group_and_elements(), k in -6i64..6) {
            let a = LineBundleClass::new(k, g.element(&raw[0]).unwrap());
            let b = LineBundleClass::new(k, g.element(&raw[1]).unwrap());
            prop_assert!(a.numerically_equivalent(&b));
            if a == b { prop_assert!(a.numerically_equivalent(&b)); }
            let c = LineBundleClass::new(k + 1, g.element(&raw[0]).unwrap());
            prop_assert!(!a.numerically_equivalent(&c));
        }
    }
}
