//! Ext bookkeeping for collections of line bundles.
//!
//! `Ext^k(O(A), O(B)) = H^k(B - A)`, so every question here reduces to the
//! cohomology engine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{a_van, Axiom, AxiomStatement, A_HODGE, A_MINIFOLD};
use crate::cohomology::{infer, CohomologyTable, Derivation, DimInterval, EngineError, Inference};
use crate::group_action::{guaranteed_fixed_nontrivial, LinearAction};
use crate::picard::{FakePlane, LineBundleClass, PicardError, TorsionElement};

pub const R_EXT: &str = "ext";
pub const R_EXCEPTIONAL: &str = "exceptional";
pub const R_SOD: &str = "sod";
pub const EXT_CITATION: &str = "Ext^k(O(A), O(B)) = H^k(B - A), [Har] Prop. III.6.7";

#[derive(Debug, Error)]
pub enum DerivedError {
    #[error("insufficient facts: cohomology of {} is not determined", fmt_classes(.missing))]
    Insufficient { missing: Vec<LineBundleClass> },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("collection is not known to be exceptional")]
    NotExceptional,
    #[error("`{0}` is not a G21 plane")]
    NotKeum(String),
    #[error("axiom `{0}` is required but was not supplied")]
    MissingAxiom(&'static str),
    #[error("cubic roots have degree 1, got {0}")]
    NotCubicRoot(i64),
}

fn fmt_classes(v: &[LineBundleClass]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionReport {
    pub objects: Vec<LineBundleClass>,
    /// `None` when some forbidden-direction Ext is undetermined.
    pub exceptional: Option<bool>,
    /// `"i,j"` → `dim Ext^•(E_i, E_j)`, for every pair that is determined.
    pub ext_tables: BTreeMap<String, [u64; 3]>,
    pub full: bool,
    pub phantom_orthogonal: bool,
    pub blocking: Vec<LineBundleClass>,
    pub conditions: Vec<String>,
    pub derivation: Derivation,
}

fn exact_triple(table: &CohomologyTable, c: &LineBundleClass) -> Option<[u64; 3]> {
    table.exact(c)
}

/// `dim Ext^k(O(A), O(B))` for `k = 0, 1, 2`.
pub fn ext_dims(
    plane: &FakePlane,
    a: &LineBundleClass,
    b: &LineBundleClass,
    table: &CohomologyTable,
) -> Result<[u64; 3], DerivedError> {
    let diff = plane.sub(b, a)?;
    exact_triple(table, &diff).ok_or(DerivedError::Insufficient { missing: vec![diff] })
}

/// Checks `Ext^•(E_j, E_i) = 0` for `j > i`, running the engine on all differences.
pub fn is_exceptional(
    plane: &FakePlane,
    objects: &[LineBundleClass],
    axioms: &[Axiom],
) -> Result<CollectionReport, DerivedError> {
    let mut targets = Vec::new();
    for a in objects {
        for b in objects {
            targets.push(plane.sub(b, a)?);
        }
    }
    let inf = infer(plane, axioms, &targets)?;
    is_exceptional_from(plane, objects, &inf)
}

pub fn is_exceptional_from(
    plane: &FakePlane,
    objects: &[LineBundleClass],
    inf: &Inference,
) -> Result<CollectionReport, DerivedError> {
    let mut d = inf.derivation.clone();
    let mut ext_tables = BTreeMap::new();
    let mut blocking = Vec::new();
    let mut nonzero = Vec::new();
    let mut ext_steps = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            let diff = plane.sub(b, a)?;
            let forbidden = i > j;
            let srcs: Vec<usize> = (0..3).filter_map(|k| inf.source(&diff, k)).collect();
            match ext_dims(plane, a, b, &inf.table) {
                Ok(t) => {
                    ext_tables.insert(format!("{i},{j}"), t);
                    let id = d.note(
                        R_EXT,
                        srcs,
                        format!("Ext^*(E{i}, E{j}) = h^*{diff} = ({}, {}, {}) by {EXT_CITATION}", t[0], t[1], t[2]),
                    );
                    if forbidden || i == j {
                        ext_steps.push(id);
                    }
                    if forbidden && t != [0, 0, 0] {
                        nonzero.push(format!("{i},{j}"));
                    }
                }
                Err(_) if forbidden => {
                    if !blocking.contains(&diff) {
                        blocking.push(diff);
                    }
                }
                Err(_) => {}
            }
        }
    }
    let exceptional = if !nonzero.is_empty() {
        Some(false)
    } else if blocking.is_empty() {
        Some(true)
    } else {
        None
    };
    let text = match exceptional {
        Some(true) => "all Ext^*(E_j, E_i) with j > i vanish and End(E_i) = C: the collection is exceptional".to_string(),
        Some(false) => format!("nonzero Ext in the forbidden direction at {}: not exceptional", nonzero.join(" ")),
        None => format!("exceptionality undetermined: cohomology of {} unknown", fmt_classes(&blocking)),
    };
    d.note(R_EXCEPTIONAL, ext_steps, text);
    Ok(CollectionReport {
        objects: objects.to_vec(),
        exceptional,
        ext_tables,
        full: false,
        phantom_orthogonal: false,
        blocking,
        conditions: Vec::new(),
        derivation: d,
    })
}

/// The induced triple `(O, -L', -2L')`.
pub fn cubic_root_triple(plane: &FakePlane, lp: &LineBundleClass) -> Result<Vec<LineBundleClass>, DerivedError> {
    Ok(vec![plane.untwisted(0), plane.scale(-1, lp)?, plane.scale(-2, lp)?])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicRootCheck {
    pub root: LineBundleClass,
    /// `h0(2L')`, `h2(L')`, `h2(2L')`.
    pub requirements: [DimInterval; 3],
    pub holds: Option<bool>,
    pub collection: CollectionReport,
}

impl CubicRootCheck {
    pub fn agrees(&self) -> bool {
        self.holds == self.collection.exceptional
    }
}

/// `(O, -L', -2L')` is exceptional iff `h0(2L')`, `h2(L')` and `h2(2L')` vanish.
pub fn cubic_root_criterion(
    plane: &FakePlane,
    lp: &LineBundleClass,
    axioms: &[Axiom],
) -> Result<CubicRootCheck, DerivedError> {
    if lp.degree != 1 {
        return Err(DerivedError::NotCubicRoot(lp.degree));
    }
    let two = plane.scale(2, lp)?;
    let triple = cubic_root_triple(plane, lp)?;
    let mut targets = vec![lp.clone(), two.clone()];
    for a in &triple {
        for b in &triple {
            targets.push(plane.sub(b, a)?);
        }
    }
    let inf = infer(plane, axioms, &targets)?;
    let requirements = [inf.h(&two, 0), inf.h(lp, 2), inf.h(&two, 2)];
    let holds = if requirements.iter().all(DimInterval::is_zero) {
        Some(true)
    } else if requirements.iter().any(DimInterval::is_positive) {
        Some(false)
    } else {
        None
    };
    let collection = is_exceptional_from(plane, &triple, &inf)?;
    Ok(CubicRootCheck { root: lp.clone(), requirements, holds, collection })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub candidates: usize,
    pub reports: Vec<CollectionReport>,
    pub label: String,
}

impl SearchResult {
    pub fn exceptional(&self) -> impl Iterator<Item = &CollectionReport> {
        self.reports.iter().filter(|r| r.exceptional == Some(true))
    }
}

/// Collections `(O, -O(1) - T, -2 O(1))` for nontrivial `T` fixed by `action`.
///
/// A-van is granted for `T` only when `action` has order 7 and fixes `T`; under the
/// identity every `T` is a candidate but nothing is granted.
pub fn search_nonstandard(
    plane: &FakePlane,
    action: &LinearAction,
    axioms: &[Axiom],
) -> Result<SearchResult, DerivedError> {
    if !plane.is_keum() {
        return Err(DerivedError::NotKeum(plane.id().to_string()));
    }
    let equivariant = action.order() == 7;
    let o1 = plane.untwisted(1);
    let mut reports = Vec::new();
    for t in action.fixed_nontrivial() {
        let twisted = plane.add(&o1, &LineBundleClass::new(0, t.clone()))?;
        let objects = vec![plane.untwisted(0), plane.scale(-1, &twisted)?, plane.scale(-2, &o1)?];
        let mut ax = axioms.to_vec();
        let mut conditions = Vec::new();
        if equivariant {
            ax.push(a_van(std::slice::from_ref(&t)));
        } else {
            conditions.push(format!("A-van for T = {t} requires equivariance evidence"));
        }
        let mut report = is_exceptional(plane, &objects, &ax)?;
        report.conditions = conditions;
        reports.push(report);
    }
    let rank = plane.torsion_group().rank() as u32;
    let label = if !equivariant {
        format!("{} candidates, all conditional on A-van; requires equivariance evidence", reports.len())
    } else if reports.is_empty() {
        "none found under the representative action; undetermined by counting".to_string()
    } else if plane.torsion_group().is_elementary_two() && guaranteed_fixed_nontrivial(rank) {
        format!("{} found; existence is action-independent by counting", reports.len())
    } else {
        format!("{} found under the representative action", reports.len())
    };
    Ok(SearchResult { candidates: plane.torsion_group().size() as usize - 1, reports, label })
}

/// Not full (only `P^2` is a minifold), and the orthogonal `A` has `HH_• = 0` when the length equals the Hodge total.
pub fn phantom_and_sod(report: &CollectionReport, axioms: &[Axiom]) -> Result<CollectionReport, DerivedError> {
    if report.exceptional != Some(true) {
        return Err(DerivedError::NotExceptional);
    }
    let minifold = axioms.iter().find(|a| a.id == A_MINIFOLD).ok_or(DerivedError::MissingAxiom(A_MINIFOLD))?;
    let hodge = axioms.iter().find(|a| a.id == A_HODGE).ok_or(DerivedError::MissingAxiom(A_HODGE))?;
    let AxiomStatement::HodgeDimension { total } = hodge.statement else {
        return Err(DerivedError::MissingAxiom(A_HODGE));
    };
    let mut out = report.clone();
    let d = &mut out.derivation;
    let verdict = d.last_id().expect("exceptionality step");
    let n = report.objects.len() as u64;
    let not_full = d.push_axiom(minifold, vec![verdict], crate::cohomology::Claim::text("X is not P^2, so the collection is not full"));
    let names: Vec<String> = (0..n).map(|i| format!("E{i}")).collect();
    let sod = d.note(R_SOD, vec![verdict, not_full], format!("D^b(X) = <{}, A> with A nonzero", names.join(", ")));
    let hh = d.push_axiom(hodge, vec![], crate::cohomology::Claim::text(format!("sum of Hodge numbers of X is {total}")));
    out.full = false;
    out.phantom_orthogonal = n == total;
    let text = if out.phantom_orthogonal {
        format!("HH_* is additive and each E_i contributes 1: dim HH_*(A) = {total} - {n} = 0, A is a phantom")
    } else {
        format!("dim HH_*(A) = {total} - {n} = {}, A is not a phantom", total.saturating_sub(n))
    };
    out.derivation.note(R_SOD, vec![sod, hh], text);
    Ok(out)
}

/// The fixed element used when several exist: the lexicographically smallest.
pub fn representative_fixed(action: &LinearAction) -> Option<TorsionElement> {
    action.fixed_nontrivial().into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{a1, standard_axioms};
    use crate::cohomology::recheck;
    use crate::group_action::make_order7_action;

    #[test]
    fn ext_diagonal_and_pairs() {
        let p = FakePlane::keum(4).unwrap();
        let a = p.untwisted(0);
        let m2 = p.untwisted(-2);
        let inf = infer(&p, &[a1(&p)], &[p.untwisted(2), m2.clone(), p.untwisted(0)]).unwrap();
        assert_eq!(ext_dims(&p, &a, &a, &inf.table).unwrap(), [1, 0, 0]);
        assert_eq!(ext_dims(&p, &m2, &a, &inf.table).unwrap(), [0, 0, 0]);
        // h^*(-2) = (0, 0, 6)
        assert_eq!(ext_dims(&p, &a, &m2, &inf.table).unwrap(), [0, 0, 6]);
        let t = p.class(1, &[1, 0, 0, 0]).unwrap();
        let minus = p.scale(-1, &t).unwrap();
        let inf = infer(&p, &[a1(&p), a_van(&[t.torsion.clone()])], &[t.clone()]).unwrap();
        assert_eq!(ext_dims(&p, &minus, &a, &inf.table).unwrap(), [0, 0, 0]);
        let bare = infer(&p, &[], &[t.clone()]).unwrap();
        assert!(matches!(ext_dims(&p, &minus, &a, &bare.table), Err(DerivedError::Insufficient { .. })));
    }

    #[test]
    fn standard_collection_is_exceptional() {
        for rank in [3, 4, 6] {
            let p = FakePlane::keum(rank).unwrap();
            let objs = cubic_root_triple(&p, &p.untwisted(1)).unwrap();
            let r = is_exceptional(&p, &objs, &[a1(&p)]).unwrap();
            assert_eq!(r.exceptional, Some(true), "b{rank}");
            assert_eq!(r.ext_tables["1,1"], [1, 0, 0]);
            assert_eq!(r.ext_tables["1,0"], [0, 0, 0]);
            recheck(&p, &r.derivation).unwrap();
        }
    }

    #[test]
    fn repeated_object_is_not_exceptional() {
        let p = FakePlane::keum(4).unwrap();
        let objs = vec![p.untwisted(0), p.untwisted(-1), p.untwisted(-1)];
        let r = is_exceptional(&p, &objs, &[a1(&p)]).unwrap();
        assert_eq!(r.exceptional, Some(false));
        assert_eq!(r.ext_tables["2,1"], [1, 0, 0]);
    }

    #[test]
    fn swapping_a_pair_breaks_exceptionality() {
        let p = FakePlane::keum(4).unwrap();
        let objs = vec![p.untwisted(-1), p.untwisted(0), p.untwisted(-2)];
        let r = is_exceptional(&p, &objs, &[a1(&p)]).unwrap();
        assert_eq!(r.exceptional, Some(false));
        assert_eq!(r.ext_tables["1,0"], [0, 0, 3]);
    }

    #[test]
    fn without_a1_it_is_undetermined() {
        let p = FakePlane::keum(3).unwrap();
        let objs = cubic_root_triple(&p, &p.untwisted(1)).unwrap();
        let r = is_exceptional(&p, &objs, &[]).unwrap();
        assert_eq!(r.exceptional, None);
        assert!(!r.blocking.is_empty());
    }

    #[test]
    fn criterion_matches_collection_on_all_roots() {
        for rank in [3, 4, 6] {
            let p = FakePlane::keum(rank).unwrap();
            for axioms in [vec![], vec![a1(&p)]] {
                for root in p.classes_of_degree(1) {
                    let c = cubic_root_criterion(&p, &root, &axioms).unwrap();
                    assert!(c.agrees(), "b{rank} {root}: {:?} vs {:?}", c.holds, c.collection.exceptional);
                }
            }
        }
        let p = FakePlane::keum(4).unwrap();
        assert_eq!(cubic_root_criterion(&p, &p.untwisted(1), &[a1(&p)]).unwrap().holds, Some(true));
        assert!(matches!(cubic_root_criterion(&p, &p.untwisted(2), &[]), Err(DerivedError::NotCubicRoot(2))));
    }

    #[test]
    fn nonstandard_search() {
        let b4 = FakePlane::keum(4).unwrap();
        let a4 = make_order7_action(4).unwrap();
        let res = search_nonstandard(&b4, &a4, &[a1(&b4)]).unwrap();
        assert_eq!(res.reports.len(), 1);
        assert_eq!(res.exceptional().count(), 1);
        let fixed = representative_fixed(&a4).unwrap();
        let twisted = b4.add(&b4.untwisted(1), &LineBundleClass::new(0, fixed)).unwrap();
        assert_eq!(res.reports[0].objects[1], b4.scale(-1, &twisted).unwrap());
        assert!(res.reports[0].derivation.uses_axiom("A-van"));

        let b3 = FakePlane::keum(3).unwrap();
        let res = search_nonstandard(&b3, &make_order7_action(3).unwrap(), &[a1(&b3)]).unwrap();
        assert!(res.reports.is_empty());
        assert!(res.label.contains("none found under the representative action"));

        let id = LinearAction::identity(b4.torsion_group().clone());
        let res = search_nonstandard(&b4, &id, &[a1(&b4)]).unwrap();
        assert_eq!(res.reports.len(), 15);
        assert!(res.reports.iter().all(|r| r.exceptional.is_none() && !r.conditions.is_empty()));
    }

    #[test]
    fn phantom_bookkeeping() {
        let p = FakePlane::keum(4).unwrap();
        let ax = standard_axioms(&p);
        let objs = cubic_root_triple(&p, &p.untwisted(1)).unwrap();
        let r = is_exceptional(&p, &objs, &[a1(&p)]).unwrap();
        let s = phantom_and_sod(&r, &ax).unwrap();
        assert!(s.phantom_orthogonal);
        assert!(!s.full);
        assert!(s.derivation.uses_axiom(A_MINIFOLD));

        let pair = is_exceptional(&p, &objs[..2], &[a1(&p)]).unwrap();
        assert_eq!(pair.exceptional, Some(true));
        let s = phantom_and_sod(&pair, &ax).unwrap();
        assert!(!s.phantom_orthogonal && !s.full);

        let bad = is_exceptional(&p, &[p.untwisted(0), p.untwisted(0)], &[]).unwrap();
        assert!(matches!(phantom_and_sod(&bad, &ax), Err(DerivedError::NotExceptional)));
        assert!(matches!(phantom_and_sod(&r, &[]), Err(DerivedError::MissingAxiom(_))));
    }
}
