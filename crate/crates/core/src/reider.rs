//! The bicanonical map `|2K|` of a fake projective plane.
//!
//! Only two consequences of Reider's theorem for `K + L` with `L = K` are
//! used: base points need a curve with `C^2 ∈ {0, -1}`, and failure to separate
//! needs a curve `C ≡ L1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::axioms::Axiom;
use crate::cohomology::{infer, CohomologyTable, Derivation, DimInterval, EngineError, Inference};
use crate::curve::{arithmetic_genus, curve_chi};
use crate::picard::{FakePlane, LineBundleClass, TorsionElement};

pub const REIDER_CITATION: &str = "Reider's theorem, see [Bar] p. 176";
pub const R_REIDER_BPF: &str = "reider-bpf";
pub const R_REIDER_SEP: &str = "reider-sep";
pub const R_BICANONICAL: &str = "bicanonical";
pub const R_CURVE_RR: &str = "curve-riemann-roch";
pub const R_CATANESE: &str = "catanese";

/// Ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BicanonicalLevel {
    Morphism,
    BirationalIsoOutsideFiniteSet,
    ConditionalEmbedding,
    Embedding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BicanonicalStatus {
    pub level: BicanonicalLevel,
    pub obstruction_classes: Vec<LineBundleClass>,
    pub curve_count_bound: u64,
    pub derivation: Derivation,
}

/// No effective `kL1` has `C^2 ∈ {0, -1}`, since `C^2 = k^2 >= 1`.
pub fn base_point_free_check(plane: &FakePlane) -> (bool, Derivation) {
    let mut d = Derivation::new();
    let min = (1..=3).map(|k| plane.untwisted(k)).map(|c| c.degree * c.degree).min().unwrap_or(1);
    d.note(
        R_REIDER_BPF,
        vec![],
        format!(
            "Pic has rank one with L1^2 = 1, effective curves are kL1 with k >= 1, so C^2 = k^2; minimal C^2 over k >= 1 is {min}, never 0 or -1; |2K| is base-point free ({REIDER_CITATION})"
        ),
    );
    (min >= 1, d)
}

/// Degree-1 classes whose `h0` is not known to vanish; each could carry a curve `C ≡ L1`.
pub fn separation_obstructions(plane: &FakePlane, facts: &CohomologyTable) -> Vec<LineBundleClass> {
    plane
        .classes_of_degree(1)
        .into_iter()
        .filter(|c| !facts.h(c, 0).is_some_and(|i| i.is_zero()))
        .collect()
}

/// Runs the engine on the degree-1 classes and `2K`, then classifies.
pub fn bicanonical_status(plane: &FakePlane, axioms: &[Axiom]) -> Result<BicanonicalStatus, EngineError> {
    let two_k = plane.scale(2, plane.canonical())?;
    let mut targets = plane.classes_of_degree(1);
    targets.push(two_k);
    let inf = infer(plane, axioms, &targets)?;
    Ok(bicanonical_status_from(plane, &inf))
}

pub fn bicanonical_status_from(plane: &FakePlane, inf: &Inference) -> BicanonicalStatus {
    let mut d = inf.derivation.clone();
    let two_k = plane.scale(2, plane.canonical()).expect("canonical class lies in the plane");
    let h0_2k = inf.h(&two_k, 0);
    let h0_2k_src: Vec<usize> = inf.source(&two_k, 0).into_iter().collect();
    d.note(
        R_BICANONICAL,
        h0_2k_src,
        format!("h0(2K) = {h0_2k} = 1 + K^2, so |2K| maps to P^9"),
    );
    let (_, bpf) = base_point_free_check(plane);
    let bpf_id = d.append(&bpf);

    let obstructions = separation_obstructions(plane, &inf.table);
    let inputs: Vec<usize> =
        plane.classes_of_degree(1).iter().filter_map(|c| inf.source(c, 0)).collect();
    let sep_id = if obstructions.is_empty() {
        d.note(
            R_REIDER_SEP,
            inputs,
            format!("h0(1;T) = 0 for all {} torsion twists: no curve C ≡ L1, so |2K| separates points and tangents ({REIDER_CITATION})", plane.torsion_group().size()),
        )
    } else {
        let list: Vec<String> = obstructions.iter().map(|c| c.to_string()).collect();
        d.note(
            R_REIDER_SEP,
            inputs,
            format!(
                "h0 not known to vanish on {}: each may carry one curve C ≡ L1 where separation can fail ({REIDER_CITATION})",
                list.join(" ")
            ),
        )
    };
    let level = if obstructions.is_empty() {
        BicanonicalLevel::Embedding
    } else {
        BicanonicalLevel::BirationalIsoOutsideFiniteSet
    };
    let bound = plane.torsion_group().size();
    d.note(
        R_BICANONICAL,
        vec![bpf_id, sep_id],
        match level {
            BicanonicalLevel::Embedding => "the bicanonical map is an embedding".to_string(),
            _ => format!(
                "the bicanonical map is a birational morphism, an isomorphism onto its image outside at most {bound} curves"
            ),
        },
    );
    BicanonicalStatus { level, obstruction_classes: obstructions, curve_count_bound: bound, derivation: d }
}

/// What is known about a possible curve `C ≡ L1` in a given class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFacts {
    pub effective: Option<bool>,
    pub h0_oc2c: DimInterval,
    pub h1_oc2c: DimInterval,
}

impl Default for CurveFacts {
    fn default() -> Self {
        Self { effective: None, h0_oc2c: DimInterval::UNKNOWN, h1_oc2c: DimInterval::UNKNOWN }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CataneseReport {
    /// `Some(true)` embedding, `Some(false)` not, `None` when curve data is missing.
    pub embedding: Option<bool>,
    pub level: BicanonicalLevel,
    pub violating: Vec<LineBundleClass>,
    pub undetermined: Vec<LineBundleClass>,
    pub derivation: Derivation,
}

/// The embedding criterion: no effective `C` with `C^2 = 1` and `h0(O_C(2C)) = h1(O_C(2C)) = 1`.
///
/// Candidates with `h0(1;T) = 0` in `table` are cleared without curve data.
pub fn catanese_criterion(
    plane: &FakePlane,
    table: Option<&CohomologyTable>,
    curves: &BTreeMap<TorsionElement, CurveFacts>,
) -> CataneseReport {
    let mut d = Derivation::new();
    let g = arithmetic_genus(1).expect("k = 1 is effective");
    let chi = curve_chi(2, g);
    let rr = d.note(
        R_CURVE_RR,
        vec![],
        format!("C ≡ L1 has p_a = {g} and deg O_C(2C) = 2C^2 = 2, so chi = {chi} and h0(O_C(2C)) = h1(O_C(2C))"),
    );
    let mut violating = Vec::new();
    let mut undetermined = Vec::new();
    let mut checks = vec![rr];
    for class in plane.classes_of_degree(1) {
        let data = curves.get(&class.torsion).cloned().unwrap_or_default();
        let no_sections = table.and_then(|t| t.h(&class, 0)).is_some_and(|i| i.is_zero());
        // h0 = h1 when chi = 0, so both intervals bound the same number
        let common = data.h0_oc2c.meet(&data.h1_oc2c);
        let verdict = if no_sections || data.effective == Some(false) {
            format!("{class}: no effective curve")
        } else if common.is_none_or(|m| !m.contains(1)) {
            format!("{class}: h0(O_C(2C)) = h1(O_C(2C)) = 1 is excluded")
        } else if data.effective == Some(true) && common == Some(DimInterval::exact(1)) {
            violating.push(class.clone());
            format!("{class}: effective C with h0(O_C(2C)) = h1(O_C(2C)) = 1, the bicanonical map is not an embedding")
        } else {
            undetermined.push(class.clone());
            format!("{class}: undetermined (effective {:?}, h0 in {}, h1 in {})", data.effective, data.h0_oc2c, data.h1_oc2c)
        };
        checks.push(d.note(R_CATANESE, vec![rr], verdict));
    }
    let (embedding, level) = if !violating.is_empty() {
        (Some(false), BicanonicalLevel::BirationalIsoOutsideFiniteSet)
    } else if !undetermined.is_empty() {
        (None, BicanonicalLevel::ConditionalEmbedding)
    } else {
        (Some(true), BicanonicalLevel::Embedding)
    };
    d.note(
        R_CATANESE,
        checks,
        match embedding {
            Some(true) => "no candidate curve meets the condition: embedding".to_string(),
            Some(false) => "a candidate curve meets the condition: not an embedding".to_string(),
            None => format!("embedding conditional on curve data for {} classes", undetermined.len()),
        },
    );
    CataneseReport { embedding, level, violating, undetermined, derivation: d }
}
