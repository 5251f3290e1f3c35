//! Externally cited results that the derivations take as given.
//!
//! Every axiom carries a citation; every report lists the axioms it consumed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::{DimInterval, Fact};
use crate::picard::{FakePlane, LineBundleClass, TorsionElement};

pub const A1: &str = "A1";
pub const A2: &str = "A2";
pub const A3: &str = "A3";
pub const A4: &str = "A4";
pub const A5: &str = "A5";
pub const A_KRA: &str = "A-kra";
pub const A_MINIFOLD: &str = "A-minifold";
pub const A_HODGE: &str = "A-hodge";
pub const A_VAN: &str = "A-van";
/// Optional: no effective divisor numerically equivalent to `L1`. Never on by default.
pub const A_NO_L1: &str = "A-noL1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxiomStatement {
    Facts { facts: Vec<Fact> },
    /// A unique `G21`-equivariant `O(1)` with `K = 3·O(1)`; fixes the basis of `Pic`.
    EquivariantCubicRoot,
    FixedLocusDimension { order: u32, dim: u32 },
    QuotientSingularPoints { order: u32, count: u64 },
    NoTotallyGeodesicCurves,
    /// Smooth curves of genus below `below` with an automorphism of order `order` have genus in `genera`.
    NormalizationGenera { order: u64, below: u64, genera: Vec<u64> },
    OnlyMinifoldIsP2,
    HodgeDimension { total: u64 },
}

impl fmt::Display for AxiomStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Facts { facts } => {
                let parts: Vec<String> = facts.iter().map(Fact::to_string).collect();
                write!(f, "{}", parts.join("; "))
            }
            Self::EquivariantCubicRoot => write!(f, "unique G21-equivariant O(1) with K = 3 O(1)"),
            Self::FixedLocusDimension { order, dim } => {
                write!(f, "fixed locus of a Z/{order} action on X has dimension {dim}")
            }
            Self::QuotientSingularPoints { order, count } => {
                write!(f, "X/(Z/{order}) has exactly {count} singular points")
            }
            Self::NoTotallyGeodesicCurves => write!(f, "X contains no immersed totally geodesic curve"),
            Self::NormalizationGenera { order, below, genera } => write!(
                f,
                "a smooth curve of genus < {below} with an automorphism of order {order} has genus in {genera:?}"
            ),
            Self::OnlyMinifoldIsP2 => write!(f, "the only 2-minifold is P^2"),
            Self::HodgeDimension { total } => write!(f, "total Hodge dimension of X is {total}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub id: String,
    pub citation: String,
    pub statement: AxiomStatement,
}

impl Axiom {
    pub fn new(id: impl Into<String>, citation: impl Into<String>, statement: AxiomStatement) -> Self {
        let citation = citation.into();
        assert!(!citation.trim().is_empty(), "axiom citations must be nonempty");
        Self { id: id.into(), citation, statement }
    }

    pub fn facts(&self) -> &[Fact] {
        match &self.statement {
            AxiomStatement::Facts { facts } => facts,
            _ => &[],
        }
    }

    pub fn from_facts(id: impl Into<String>, citation: impl Into<String>, facts: Vec<Fact>) -> Self {
        Self::new(id, citation, AxiomStatement::Facts { facts })
    }
}

/// `h0(2·O(1)) = 0` on a Keum plane.
pub fn a1(plane: &FakePlane) -> Axiom {
    Axiom::from_facts(
        A1,
        "Galkin-Katzarkov-Mellit-Shinder, Thm. 1.3: H^0(X, 2 O(1)) = 0 for the G21-equivariant cubic root O(1)",
        vec![Fact::new(plane.untwisted(2), 0, DimInterval::ZERO)],
    )
}

/// `h0(2·O(1) + T) = 0` for the listed torsion twists, as established by the vanishing replay.
pub fn a_van(twists: &[TorsionElement]) -> Axiom {
    let facts =
        twists.iter().map(|t| Fact::new(LineBundleClass::new(2, t.clone()), 0, DimInterval::ZERO)).collect();
    Axiom::from_facts(
        A_VAN,
        "vanishing for Z/7-equivariant 2 O(1) + T, established by the prop-vanishing replay",
        facts,
    )
}

pub fn a_no_l1(plane: &FakePlane) -> Axiom {
    let facts = plane.classes_of_degree(1).into_iter().map(|c| Fact::new(c, 0, DimInterval::ZERO)).collect();
    Axiom::from_facts(A_NO_L1, "conjectural: no effective divisor numerically equivalent to L1 (optional flag)", facts)
}

/// The axioms available by default for `plane`. `A1` and `A2` are only registered on Keum planes.
pub fn standard_axioms(plane: &FakePlane) -> Vec<Axiom> {
    let mut out = Vec::new();
    if plane.is_keum() {
        out.push(a1(plane));
        out.push(Axiom::new(
            A2,
            "Galkin-Katzarkov-Mellit-Shinder, Lemma 2.2: there is a unique G21-equivariant O(1) with K = 3 O(1)",
            AxiomStatement::EquivariantCubicRoot,
        ));
    }
    out.push(Axiom::new(
        A3,
        "Keum, Prop. 2.4 and Thm. 1.1: the fixed point set of a Z/7 action on a fake projective plane is zero-dimensional",
        AxiomStatement::FixedLocusDimension { order: 7, dim: 0 },
    ));
    out.push(Axiom::new(
        A4,
        "Keum, Thm. 1.1: the quotient X/(Z/7) has exactly 3 singular points",
        AxiomStatement::QuotientSingularPoints { order: 7, count: 3 },
    ));
    out.push(Axiom::new(
        A5,
        "Prasad-Yeung and Cartwright-Steger (arithmetic ball quotient of the second type) with Moller-Toledo p. 901: no immersed totally geodesic curves",
        AxiomStatement::NoTotallyGeodesicCurves,
    ));
    out.push(Axiom::new(
        A_KRA,
        "[Kra] Prop. V.2.14: genus exclusion for curves of genus below 6 with an automorphism of order 7",
        AxiomStatement::NormalizationGenera { order: 7, below: 6, genera: vec![3] },
    ));
    out.push(Axiom::new(
        A_MINIFOLD,
        "Galkin et al., minifold classification Thm. 1.1: the only 2-minifold is P^2",
        AxiomStatement::OnlyMinifoldIsP2,
    ));
    out.push(Axiom::new(
        A_HODGE,
        "p_g = q = 0 and c2 = 3: X has the Hodge diamond of P^2, total Hodge dimension 3",
        AxiomStatement::HodgeDimension { total: 3 },
    ));
    out
}

/// A set of axioms with first-use ordering, looked up by id.
#[derive(Debug, Clone, Default)]
pub struct AxiomSet {
    axioms: Vec<Axiom>,
}

impl AxiomSet {
    pub fn new(axioms: Vec<Axiom>) -> Self {
        let mut set = Self::default();
        for a in axioms {
            set.insert(a);
        }
        set
    }

    /// Inserts, replacing any axiom with the same id.
    pub fn insert(&mut self, axiom: Axiom) {
        match self.axioms.iter_mut().find(|a| a.id == axiom.id) {
            Some(slot) => *slot = axiom,
            None => self.axioms.push(axiom),
        }
    }

    pub fn remove(&mut self, id: &str) -> Option<Axiom> {
        let pos = self.axioms.iter().position(|a| a.id == id)?;
        Some(self.axioms.remove(pos))
    }

    pub fn get(&self, id: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    /// Axioms that carry cohomological facts.
    pub fn fact_axioms(&self) -> Vec<Axiom> {
        self.axioms.iter().filter(|a| !a.facts().is_empty()).cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}
