use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::DimInterval;
use crate::axioms::Axiom;
use crate::picard::LineBundleClass;

/// A signed bound produced by a rule before it is met with the current interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedBound {
    pub lo: i64,
    pub hi: Option<i64>,
}

impl SignedBound {
    pub fn exact(n: i64) -> Self {
        Self { lo: n, hi: Some(n) }
    }

    pub fn from_interval(i: DimInterval) -> Self {
        Self { lo: i.lo as i64, hi: i.hi.map(|h| h as i64) }
    }

    /// Intersects with `prior`; `None` when the result is empty.
    pub fn meet(&self, prior: DimInterval) -> Option<DimInterval> {
        let lo = prior.lo.max(self.lo.max(0) as u64);
        let hi = match (prior.hi, self.hi) {
            (p, None) => p,
            (_, Some(h)) if h < 0 => return None,
            (None, Some(h)) => Some(h as u64),
            (Some(p), Some(h)) => Some(p.min(h as u64)),
        };
        match hi {
            Some(h) if h < lo => None,
            _ => Some(DimInterval { lo, hi }),
        }
    }
}

impl fmt::Display for SignedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) if h == self.lo => write!(f, "{h}"),
            Some(h) => write!(f, "[{}, {h}]", self.lo),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

/// The conclusion of a derivation step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `chi(class) = value`.
    Chi { class: LineBundleClass, value: i64 },
    /// `h^index(class)` lies in `interval`.
    Dim { class: LineBundleClass, index: u8, interval: DimInterval },
    /// The bound `derived` is incompatible with the known `prior`.
    Clash { class: LineBundleClass, index: u8, prior: DimInterval, derived: SignedBound },
    Statement { text: String },
}

impl Claim {
    pub fn dim(class: LineBundleClass, index: u8, interval: DimInterval) -> Self {
        Self::Dim { class, index, interval }
    }

    pub fn text(text: impl Into<String>) -> Self {
        Self::Statement { text: text.into() }
    }

    /// The `(class, index)` slot a dimension claim speaks about.
    pub fn slot(&self) -> Option<(&LineBundleClass, u8)> {
        match self {
            Self::Dim { class, index, .. } | Self::Clash { class, index, .. } => Some((class, *index)),
            _ => None,
        }
    }

    pub fn is_clash(&self) -> bool {
        matches!(self, Self::Clash { .. })
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Chi { class, value } => write!(f, "chi{class} = {value}"),
            Self::Dim { class, index, interval } => write!(f, "h{index}{class} = {interval}"),
            Self::Clash { class, index, prior, derived } => {
                write!(f, "contradiction: h{index}{class} = {prior} but derived {derived}")
            }
            Self::Statement { text } => f.write_str(text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub inputs: Vec<usize>,
    pub output: Claim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cite: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomRef {
    pub id: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("step {step} refers to input {input}, which is not an earlier step")]
    ForwardReference { step: usize, input: usize },
    #[error("step {step} cites axiom `{axiom}` which is not listed")]
    UnlistedAxiom { step: usize, axiom: String },
    #[error("step {step} ({rule}) does not follow from its inputs: {reason}")]
    Unjustified { step: usize, rule: String, reason: String },
}

/// An ordered DAG of rule applications. Every step's inputs are earlier steps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub steps: Vec<Step>,
    pub axioms: Vec<AxiomRef>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step(&self, id: usize) -> &Step {
        &self.steps[id]
    }

    pub fn last_id(&self) -> Option<usize> {
        self.steps.len().checked_sub(1)
    }

    pub fn push(&mut self, rule: impl Into<String>, inputs: Vec<usize>, output: Claim) -> usize {
        let id = self.steps.len();
        debug_assert!(inputs.iter().all(|&i| i < id));
        self.steps.push(Step { rule: rule.into(), inputs, output, cite: None });
        id
    }

    /// Pushes a step justified by `axiom`, recording the axiom as consumed.
    pub fn push_axiom(&mut self, axiom: &Axiom, inputs: Vec<usize>, output: Claim) -> usize {
        self.cite(axiom);
        let id = self.push("R-axiom", inputs, output);
        self.steps[id].cite = Some(axiom.id.clone());
        id
    }

    pub fn note(&mut self, rule: impl Into<String>, inputs: Vec<usize>, text: impl Into<String>) -> usize {
        self.push(rule, inputs, Claim::text(text))
    }

    /// Records `axiom` as consumed without a dedicated step.
    pub fn cite(&mut self, axiom: &Axiom) {
        if !self.axioms.iter().any(|a| a.id == axiom.id) {
            self.axioms.push(AxiomRef { id: axiom.id.clone(), citation: axiom.citation.clone() });
        }
    }

    pub fn uses_axiom(&self, id: &str) -> bool {
        self.axioms.iter().any(|a| a.id == id)
    }

    /// Appends `other`, shifting its step ids; returns the offset applied.
    pub fn append(&mut self, other: &Derivation) -> usize {
        let offset = self.steps.len();
        for s in &other.steps {
            let mut s = s.clone();
            for i in &mut s.inputs {
                *i += offset;
            }
            self.steps.push(s);
        }
        for a in &other.axioms {
            if !self.axioms.iter().any(|b| b.id == a.id) {
                self.axioms.push(a.clone());
            }
        }
        offset
    }

    pub fn find(&self, pred: impl Fn(&Step) -> bool) -> Option<usize> {
        self.steps.iter().position(pred)
    }

    /// Acyclicity (inputs strictly earlier) and that every cited axiom is listed.
    pub fn check_structure(&self) -> Result<(), DerivationError> {
        for (id, s) in self.steps.iter().enumerate() {
            if let Some(&input) = s.inputs.iter().find(|&&i| i >= id) {
                return Err(DerivationError::ForwardReference { step: id, input });
            }
            if let Some(c) = &s.cite {
                if !self.uses_axiom(c) {
                    return Err(DerivationError::UnlistedAxiom { step: id, axiom: c.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (id, s) in self.steps.iter().enumerate() {
            let inputs: Vec<String> = s.inputs.iter().map(|i| format!("#{i}")).collect();
            let cite = s.cite.as_ref().map(|c| format!(" [{c}]")).unwrap_or_default();
            out.push_str(&format!("#{id:<4} {:<22} {:<18} {}{cite}\n", s.rule, inputs.join(","), s.output));
        }
        out
    }
}
