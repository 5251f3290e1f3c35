use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use super::derivation::{Claim, Derivation, SignedBound};
use super::rules::{self, R_CHI, R_HYPOTHESIS, R_KODAIRA, R_MULT, R_MULT_CONTRA, R_NEG, R_PLANE, R_REFUTATION, R_RIEMANN_ROCH, R_SERRE};
use super::{chi, CohomologyTable, DimInterval, Entry, Fact};
use crate::axioms::Axiom;
use crate::picard::{FakePlane, LineBundleClass, PicardError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Degrees admitted when closing the target set; the window is also reflected under `L -> K - L`.
    pub degree_window: (i64, i64),
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { degree_window: (-6, 6) }
    }
}

/// Two facts about one slot that cannot both hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub class: LineBundleClass,
    pub index: u8,
    pub prior: DimInterval,
    pub derived: SignedBound,
    pub rule: String,
    /// The claims of the steps that met at the clash.
    pub clashing: Vec<Claim>,
    /// Everything derived up to and including the clash step.
    pub derivation: Derivation,
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}{} is {} but {} derives {}", self.index, self.class, self.prior, self.rule, self.derived)?;
        let parts: Vec<String> = self.clashing.iter().map(Claim::to_string).collect();
        if !parts.is_empty() {
            write!(f, " (from: {})", parts.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("contradiction: {0}")]
    Inconsistent(Box<Inconsistency>),
    #[error("axioms are inconsistent without the hypothesis: {0}")]
    AxiomsInconsistent(Box<Inconsistency>),
    #[error("{0} is not refutable at current rule strength")]
    NotRefutable(Fact),
}

/// Result of a saturation: the table, the derivation, and which step last fixed each slot.
#[derive(Debug, Clone)]
pub struct Inference {
    pub table: CohomologyTable,
    pub derivation: Derivation,
    sources: HashMap<(LineBundleClass, u8), usize>,
}

impl Inference {
    /// Id of the step whose claim is the current value of `h^index(class)`.
    pub fn source(&self, class: &LineBundleClass, index: u8) -> Option<usize> {
        self.sources.get(&(class.clone(), index)).copied()
    }

    pub fn h(&self, class: &LineBundleClass, index: u8) -> DimInterval {
        self.table.h(class, index).unwrap_or(DimInterval::UNKNOWN)
    }
}

/// A successful refutation; the last step of `derivation` states `negation` when it exists.
#[derive(Debug, Clone)]
pub struct Refutation {
    pub hypothesis: Fact,
    pub negation: Option<Fact>,
    pub clash: Inconsistency,
    pub derivation: Derivation,
}

struct State<'p> {
    plane: &'p FakePlane,
    classes: Vec<LineBundleClass>,
    h: Vec<[DimInterval; 3]>,
    src: Vec<[Option<usize>; 3]>,
    chi_src: Vec<Option<usize>>,
    duals: Vec<Option<usize>>,
    /// `(i, j, k)` with `i <= j` and `classes[i] + classes[j] = classes[k]`.
    pairs: Vec<(usize, usize, usize)>,
    deriv: Derivation,
}

fn closure(plane: &FakePlane, seed: Vec<LineBundleClass>, cfg: &EngineConfig) -> Result<Vec<LineBundleClass>, PicardError> {
    let k = plane.canonical().degree;
    let (wlo, whi) = cfg.degree_window;
    let lo = wlo.min(k - whi);
    let hi = whi.max(k - wlo);
    let in_window = |c: &LineBundleClass| (lo..=hi).contains(&c.degree);
    let mut seen: std::collections::BTreeSet<LineBundleClass> = seed.iter().cloned().collect();
    let mut queue: VecDeque<LineBundleClass> = seed.into();
    while let Some(c) = queue.pop_front() {
        for next in [plane.serre_dual(&c)?, plane.scale(2, &c)?] {
            if in_window(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

impl<'p> State<'p> {
    fn new(plane: &'p FakePlane, classes: Vec<LineBundleClass>) -> Result<Self, PicardError> {
        let n = classes.len();
        let index: HashMap<&LineBundleClass, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut duals = Vec::with_capacity(n);
        for c in &classes {
            duals.push(index.get(&plane.serre_dual(c)?).copied());
        }
        let zero = plane.untwisted(0);
        let mut pairs = Vec::new();
        for i in 0..n {
            if classes[i] == zero {
                continue;
            }
            for j in i..n {
                if classes[j] == zero {
                    continue;
                }
                if let Some(&k) = index.get(&plane.add(&classes[i], &classes[j])?) {
                    pairs.push((i, j, k));
                }
            }
        }
        Ok(Self {
            plane,
            h: vec![[DimInterval::UNKNOWN; 3]; n],
            src: vec![[None; 3]; n],
            chi_src: vec![None; n],
            duals,
            pairs,
            classes,
            deriv: Derivation::new(),
        })
    }

    fn position(&self, c: &LineBundleClass) -> usize {
        self.classes.binary_search(c).expect("class is in the closure")
    }

    fn claim(&self, id: usize) -> &Claim {
        &self.deriv.step(id).output
    }

    /// Meets slot `(ci, idx)` with `derived`, recording a step when the interval shrinks.
    fn narrow(
        &mut self,
        ci: usize,
        idx: usize,
        rule: &str,
        premises: Vec<usize>,
        derived: SignedBound,
        cite: Option<&Axiom>,
    ) -> Result<bool, Box<Inconsistency>> {
        let prior = self.h[ci][idx];
        let mut inputs = premises;
        if let Some(p) = self.src[ci][idx] {
            inputs.push(p);
        }
        let class = self.classes[ci].clone();
        match derived.meet(prior) {
            Some(new) if new == prior => Ok(false),
            Some(new) => {
                let claim = Claim::dim(class, idx as u8, new);
                let id = match cite {
                    Some(ax) => self.deriv.push_axiom(ax, inputs, claim),
                    None => self.deriv.push(rule, inputs, claim),
                };
                self.h[ci][idx] = new;
                self.src[ci][idx] = Some(id);
                Ok(true)
            }
            None => {
                let clashing: Vec<Claim> = inputs.iter().map(|&i| self.claim(i).clone()).collect();
                let claim = Claim::Clash { class: class.clone(), index: idx as u8, prior, derived };
                match cite {
                    Some(ax) => self.deriv.push_axiom(ax, inputs, claim),
                    None => self.deriv.push(rule, inputs, claim),
                };
                Err(Box::new(Inconsistency {
                    class,
                    index: idx as u8,
                    prior,
                    derived,
                    rule: rule.to_string(),
                    clashing,
                    derivation: self.deriv.clone(),
                }))
            }
        }
    }

    /// Applies an engine propagator through [`rules::derive`].
    fn apply(&mut self, ci: usize, idx: usize, rule: &str, premises: Vec<usize>) -> Result<bool, Box<Inconsistency>> {
        let derived = {
            let claims: Vec<&Claim> = premises.iter().map(|&i| self.claim(i)).collect();
            rules::derive(self.plane, rule, &self.classes[ci], idx as u8, &claims)
                .unwrap_or_else(|e| panic!("engine produced an unjustified {rule} step: {e}"))
        };
        self.narrow(ci, idx, rule, premises, derived, None)
    }

    fn inject(&mut self, fact: &Fact, rule: &str, cite: Option<&Axiom>) -> Result<Option<usize>, Box<Inconsistency>> {
        let ci = self.position(&fact.class);
        let changed = self.narrow(ci, fact.index as usize, rule, Vec::new(), SignedBound::from_interval(fact.interval), cite)?;
        Ok(changed.then(|| self.src[ci][fact.index as usize]).flatten())
    }

    fn pass(&mut self) -> Result<bool, Box<Inconsistency>> {
        let n = self.classes.len();
        let mut changed = false;

        for ci in 0..n {
            for idx in 0..3u8 {
                if let Some(v) = rules::plane_invariant(self.plane, &self.classes[ci], idx) {
                    if self.h[ci][idx as usize] != v {
                        changed |= self.apply(ci, idx as usize, R_PLANE, Vec::new())?;
                    }
                }
            }
        }

        for ci in 0..n {
            if rules::neg_vanishes(&self.classes[ci]) && !self.h[ci][0].is_zero() {
                changed |= self.apply(ci, 0, R_NEG, Vec::new())?;
            }
        }

        for ci in 0..n {
            for idx in 0..3 {
                changed |= self.chi_step(ci, idx)?;
            }
        }

        for ci in 0..n {
            let Some(dj) = self.duals[ci] else { continue };
            for idx in 0..3 {
                if let Some(s) = self.src[dj][2 - idx] {
                    if self.h[dj][2 - idx] != self.h[ci][idx] {
                        changed |= self.apply(ci, idx, R_SERRE, vec![s])?;
                    }
                }
            }
        }

        for ci in 0..n {
            if rules::kodaira_vanishes(self.plane, &self.classes[ci]) {
                for idx in 1..3 {
                    if !self.h[ci][idx].is_zero() {
                        changed |= self.apply(ci, idx, R_KODAIRA, Vec::new())?;
                    }
                }
            }
        }

        for p in 0..self.pairs.len() {
            let (i, j, k) = self.pairs[p];
            changed |= self.mult_step(i, j, k)?;
        }
        Ok(changed)
    }

    fn chi_step(&mut self, ci: usize, idx: usize) -> Result<bool, Box<Inconsistency>> {
        let others: Vec<usize> = (0..3).filter(|&i| i != idx).filter_map(|i| self.src[ci][i]).collect();
        if others.is_empty() {
            return Ok(false);
        }
        let chi_claim = Claim::Chi { class: self.classes[ci].clone(), value: chi(&self.classes[ci]) };
        let derived = {
            let mut claims: Vec<&Claim> = vec![&chi_claim];
            claims.extend(others.iter().map(|&i| self.claim(i)));
            rules::derive(self.plane, R_CHI, &self.classes[ci], idx as u8, &claims).expect("R-chi premises are well formed")
        };
        match derived.meet(self.h[ci][idx]) {
            Some(new) if new == self.h[ci][idx] => return Ok(false),
            _ => {}
        }
        let chi_id = match self.chi_src[ci] {
            Some(id) => id,
            None => {
                let id = self.deriv.push(R_RIEMANN_ROCH, Vec::new(), chi_claim);
                self.chi_src[ci] = Some(id);
                id
            }
        };
        let mut premises = vec![chi_id];
        premises.extend(others);
        self.apply(ci, idx, R_CHI, premises)
    }

    fn mult_step(&mut self, i: usize, j: usize, k: usize) -> Result<bool, Box<Inconsistency>> {
        let mut changed = false;
        let (a, b) = (self.h[i][0], self.h[j][0]);
        if a.lo >= 1 && b.lo >= 1 {
            let lo = a.lo + b.lo - 1;
            if self.h[k][0].lo < lo {
                let mut premises = vec![self.src[i][0].expect("effective slot has a source")];
                if i != j {
                    premises.push(self.src[j][0].expect("effective slot has a source"));
                }
                changed |= self.apply(k, 0, R_MULT, premises)?;
            }
        }
        let Some(m) = self.h[k][0].hi else { return Ok(changed) };
        let sum_src = self.src[k][0].expect("bounded slot has a source");
        if i == j {
            if self.h[i][0].hi.is_none_or(|h| h > (m + 1) / 2) {
                changed |= self.apply(i, 0, R_MULT_CONTRA, vec![sum_src])?;
            }
            return Ok(changed);
        }
        for (x, y) in [(i, j), (j, i)] {
            let lo_y = self.h[y][0].lo;
            if lo_y >= 1 {
                let bound = (m + 1).saturating_sub(lo_y);
                if self.h[x][0].hi.is_none_or(|h| h > bound) {
                    let cof = self.src[y][0].expect("effective slot has a source");
                    changed |= self.apply(x, 0, R_MULT_CONTRA, vec![sum_src, cof])?;
                }
            }
        }
        Ok(changed)
    }

    fn finish(self) -> Inference {
        let mut table = CohomologyTable::default();
        let mut sources = HashMap::new();
        for (ci, c) in self.classes.iter().enumerate() {
            table.insert(c.clone(), Entry { h: self.h[ci], chi: chi(c) });
            for idx in 0..3 {
                if let Some(s) = self.src[ci][idx] {
                    sources.insert((c.clone(), idx as u8), s);
                }
            }
        }
        Inference { table, derivation: self.deriv, sources }
    }
}

fn run(
    plane: &FakePlane,
    axioms: &[Axiom],
    hypothesis: Option<&Fact>,
    targets: &[LineBundleClass],
    cfg: &EngineConfig,
) -> Result<(Inference, Option<usize>), EngineError> {
    let mut seed: Vec<LineBundleClass> = targets.to_vec();
    seed.extend(axioms.iter().flat_map(|a| a.facts().iter().map(|f| f.class.clone())));
    seed.extend(hypothesis.map(|f| f.class.clone()));
    for c in &seed {
        // validates torsion membership
        plane.add(c, &plane.untwisted(0))?;
    }
    let classes = closure(plane, seed, cfg)?;
    let mut st = State::new(plane, classes)?;
    let wrap = |e: Box<Inconsistency>| EngineError::Inconsistent(e);

    for ax in axioms {
        for f in ax.facts() {
            st.inject(f, rules::R_AXIOM, Some(ax)).map_err(wrap)?;
        }
    }
    let hyp_id = match hypothesis {
        Some(f) => st.inject(f, R_HYPOTHESIS, None).map_err(wrap)?,
        None => None,
    };
    while st.pass().map_err(wrap)? {}
    Ok((st.finish(), hyp_id))
}

/// Saturates the closure of `targets` under the rule set with the default degree window.
pub fn infer(plane: &FakePlane, axioms: &[Axiom], targets: &[LineBundleClass]) -> Result<Inference, EngineError> {
    infer_with(plane, axioms, targets, &EngineConfig::default())
}

pub fn infer_with(
    plane: &FakePlane,
    axioms: &[Axiom],
    targets: &[LineBundleClass],
    cfg: &EngineConfig,
) -> Result<Inference, EngineError> {
    run(plane, axioms, None, targets, cfg).map(|(inf, _)| inf)
}

/// Adds `hypothesis` to the axioms and succeeds iff the saturation reaches a contradiction.
pub fn refute(plane: &FakePlane, axioms: &[Axiom], hypothesis: &Fact) -> Result<Refutation, EngineError> {
    let cfg = EngineConfig::default();
    let targets = [hypothesis.class.clone()];
    match run(plane, axioms, None, &targets, &cfg) {
        Err(EngineError::Inconsistent(inc)) => return Err(EngineError::AxiomsInconsistent(inc)),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    match run(plane, axioms, Some(hypothesis), &targets, &cfg) {
        Ok(_) => Err(EngineError::NotRefutable(hypothesis.clone())),
        Err(EngineError::Inconsistent(inc)) => {
            let mut derivation = inc.derivation.clone();
            let clash_id = derivation.last_id().expect("a clash step was recorded");
            let hyp_id = derivation.find(|s| s.rule == R_HYPOTHESIS);
            let negation = hypothesis.negation();
            let inputs: Vec<usize> = hyp_id.into_iter().chain([clash_id]).collect();
            match &negation {
                Some(n) => derivation.push(R_REFUTATION, inputs, Claim::dim(n.class.clone(), n.index, n.interval)),
                None => derivation.note(R_REFUTATION, inputs, format!("not ({hypothesis})")),
            };
            Ok(Refutation { hypothesis: hypothesis.clone(), negation, clash: *inc, derivation })
        }
        Err(e) => Err(e),
    }
}
