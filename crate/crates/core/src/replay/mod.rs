//! Named end-to-end derivations over cited axioms, and their reports.

mod scripts;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{standard_axioms, AxiomSet, A1, A3, A4, A5, A_HODGE, A_KRA, A_MINIFOLD};
use crate::cohomology::{recheck, AxiomRef, Derivation, DerivationError, EngineError, Inconsistency, Step};
use crate::derived::{CollectionReport, DerivedError};
use crate::group_action::{ActionError, LinearAction};
use crate::picard::{FakePlane, PicardError, PlaneRegistry, TorsionElement};
use crate::reider::CurveFacts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proved,
    Refuted,
    Conditional,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScriptInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub g21_only: bool,
    pub axioms: &'static [&'static str],
    pub expected: Verdict,
}

const VANISHING_AXIOMS: &[&str] = &[A1, A3, A4, A5, A_KRA];
const SOD_AXIOMS: &[&str] = &[A1, A3, A4, A5, A_KRA, A_MINIFOLD, A_HODGE];

static SCRIPTS: [ScriptInfo; 11] = [
    ScriptInfo { id: "lemma-L4", statement: "h0(L) = 3 for every L ≡ 4L1", g21_only: false, axioms: &[], expected: Verdict::Proved },
    ScriptInfo { id: "lemma-L2", statement: "h0(L) <= 2 for every L ≡ 2L1", g21_only: false, axioms: &[], expected: Verdict::Proved },
    ScriptInfo { id: "lemma-L1", statement: "h0(L) <= 1 for every L ≡ L1", g21_only: false, axioms: &[], expected: Verdict::Proved },
    ScriptInfo {
        id: "lemma-curves",
        statement: "at most |H1| curves are numerically equivalent to L1",
        g21_only: false,
        axioms: &[],
        expected: Verdict::Proved,
    },
    ScriptInfo {
        id: "thm-birat",
        statement: "|2K| is a birational morphism, an isomorphism outside finitely many points",
        g21_only: false,
        axioms: &[],
        expected: Verdict::Proved,
    },
    ScriptInfo { id: "thm-keum", statement: "|2K| is an embedding", g21_only: true, axioms: &[A1], expected: Verdict::Proved },
    ScriptInfo {
        id: "prop-catanese",
        statement: "|2K| embeds iff no effective C with C^2 = 1 and h0(O_C(2C)) = h1(O_C(2C)) = 1",
        g21_only: false,
        axioms: &[],
        expected: Verdict::Proved,
    },
    ScriptInfo {
        id: "prop-vanishing",
        statement: "h0(2 O(1) + T) = 0 for every Z/7-fixed torsion T",
        g21_only: true,
        axioms: VANISHING_AXIOMS,
        expected: Verdict::Proved,
    },
    ScriptInfo {
        id: "thm-eccezionale",
        statement: "(O, -O(1) - T, -2 O(1)) is exceptional for a nontrivial Z/7-fixed T",
        g21_only: true,
        axioms: VANISHING_AXIOMS,
        expected: Verdict::Proved,
    },
    ScriptInfo {
        id: "cor-orthogonal",
        statement: "D^b(X) = <E0, E1, E2, A> with A nonzero",
        g21_only: true,
        axioms: SOD_AXIOMS,
        expected: Verdict::Proved,
    },
    ScriptInfo {
        id: "remark-phantom",
        statement: "the orthogonal A has HH_*(A) = 0",
        g21_only: true,
        axioms: SOD_AXIOMS,
        expected: Verdict::Proved,
    },
];

pub fn list_results() -> &'static [ScriptInfo] {
    &SCRIPTS
}

pub fn script(id: &str) -> Option<&'static ScriptInfo> {
    SCRIPTS.iter().find(|s| s.id == id)
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("unknown result `{0}`")]
    UnknownResult(String),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("{result} does not apply to plane {plane}: {reason}")]
    Incompatible { result: String, plane: String, reason: String },
    #[error("inconsistent axioms: {0}")]
    Inconsistent(Box<Inconsistency>),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{0}")]
    Internal(String),
}

impl From<EngineError> for ReplayError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Inconsistent(i) | EngineError::AxiomsInconsistent(i) => Self::Inconsistent(i),
            EngineError::Picard(p) => Self::Picard(p),
            other => Self::Internal(other.to_string()),
        }
    }
}

impl From<DerivedError> for ReplayError {
    fn from(e: DerivedError) -> Self {
        match e {
            DerivedError::Engine(e) => e.into(),
            DerivedError::Picard(p) => Self::Picard(p),
            other => Self::Internal(other.to_string()),
        }
    }
}

impl ReplayError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Inconsistent(_) => 2,
            Self::UnknownResult(_) | Self::Picard(_) | Self::Incompatible { .. } => 3,
            Self::Action(_) | Self::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReplayOptions {
    /// Replaces the standard axioms of the plane.
    pub axioms: Option<AxiomSet>,
    pub curves: BTreeMap<TorsionElement, CurveFacts>,
    /// Defaults to the representative order-7 action on G21 planes.
    pub action: Option<LinearAction>,
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub result_id: String,
    pub plane: String,
    pub verdict: Verdict,
    pub axioms: Vec<AxiomRef>,
    pub steps: Vec<Step>,
    pub collections: Vec<CollectionReport>,
    pub findings: Vec<String>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn derivation(&self) -> Derivation {
        Derivation { steps: self.steps.clone(), axioms: self.axioms.clone() }
    }

    /// 0 when the verdict is the expected one, 4 when conditional.
    pub fn exit_code(&self) -> i32 {
        let expected = script(&self.result_id).map(|s| s.expected);
        match self.verdict {
            Verdict::Conditional => 4,
            v if Some(v) == expected => 0,
            _ => 1,
        }
    }
}

pub fn replay(result_id: &str, plane: &FakePlane, opts: &ReplayOptions) -> Result<Report, ReplayError> {
    let info = script(result_id).ok_or_else(|| ReplayError::UnknownResult(result_id.to_string()))?;
    if info.g21_only && !plane.is_keum() {
        return Err(ReplayError::Incompatible {
            result: result_id.to_string(),
            plane: plane.id().to_string(),
            reason: format!("requires Aut = G21, plane has Aut = {}", plane.aut()),
        });
    }
    let start = Instant::now();
    let axioms = opts.axioms.clone().unwrap_or_else(|| AxiomSet::new(standard_axioms(plane)));
    let mut ctx = scripts::Ctx::new(plane, &axioms, opts);
    let verdict = scripts::run(info.id, &mut ctx)?;
    let elapsed_ms = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let d = ctx.derivation;
    Ok(Report {
        result_id: info.id.to_string(),
        plane: plane.id().to_string(),
        verdict,
        axioms: d.axioms,
        steps: d.steps,
        collections: ctx.collections,
        findings: ctx.findings,
        elapsed_ms,
    })
}

pub fn export_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn export_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("result:  {}\nplane:   {}\nverdict: {}\n", report.result_id, report.plane, report.verdict));
    if report.elapsed_ms > 0 {
        out.push_str(&format!("elapsed: {} ms\n", report.elapsed_ms));
    }
    if !report.findings.is_empty() {
        out.push_str("\nfindings:\n");
        for f in &report.findings {
            out.push_str(&format!("  - {f}\n"));
        }
    }
    out.push_str("\naxioms:\n");
    if report.axioms.is_empty() {
        out.push_str("  (none, built-in rules only)\n");
    }
    for a in &report.axioms {
        out.push_str(&format!("  {:<11} {}\n", a.id, a.citation));
    }
    out.push_str(&format!("\nderivation ({} steps):\n", report.steps.len()));
    out.push_str(&report.derivation().render_text());
    if !report.collections.is_empty() {
        out.push_str("\ncollections:\n");
        for (i, c) in report.collections.iter().enumerate() {
            out.push_str(&format!("  [{i}] {}\n", render_collection(c)));
        }
    }
    out
}

pub fn render_collection(c: &CollectionReport) -> String {
    let objs: Vec<String> = c.objects.iter().map(|o| o.to_string()).collect();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let exc = c.exceptional.map_or("unknown", yn);
    let mut s = format!(
        "<{}> exceptional={exc} full={} phantom_orthogonal={}",
        objs.join(", "),
        yn(c.full),
        yn(c.phantom_orthogonal)
    );
    for cond in &c.conditions {
        s.push_str(&format!(" [{cond}]"));
    }
    s
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("report does not parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error("derivation does not check: {0}")]
    Derivation(#[from] DerivationError),
    #[error("re-execution gives {got}, report claims {claimed}")]
    VerdictMismatch { claimed: Verdict, got: Verdict },
    #[error("re-execution gives a different derivation (first difference at step {0})")]
    StepMismatch(usize),
}

/// Rechecks the serialized derivation step by step, then re-executes the script and compares.
pub fn verify(json: &str, registry: &PlaneRegistry, opts: &ReplayOptions) -> Result<Report, VerifyError> {
    let report: Report = serde_json::from_str(json)?;
    let plane = registry.get(&report.plane).map_err(ReplayError::from)?;
    recheck(plane, &report.derivation())?;
    let again = replay(&report.result_id, plane, opts)?;
    if again.verdict != report.verdict {
        return Err(VerifyError::VerdictMismatch { claimed: report.verdict, got: again.verdict });
    }
    if again.steps != report.steps {
        let i = again.steps.iter().zip(&report.steps).take_while(|(a, b)| a == b).count();
        return Err(VerifyError::StepMismatch(i));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_eleven_scripts() {
        assert_eq!(list_results().len(), 11);
        let mut ids: Vec<_> = list_results().iter().map(|s| s.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 11);
    }

    #[test]
    fn json_is_byte_stable() {
        let p = FakePlane::keum(4).unwrap();
        let a = export_json(&replay("lemma-L4", &p, &ReplayOptions::default()).unwrap());
        let b = export_json(&replay("lemma-L4", &p, &ReplayOptions::default()).unwrap());
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in ["result_id", "plane", "verdict", "axioms", "steps", "collections", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn unknown_and_incompatible() {
        let reg = PlaneRegistry::default();
        let generic = reg.get("generic").unwrap();
        let e = replay("thm-keum", generic, &ReplayOptions::default()).unwrap_err();
        assert!(matches!(e, ReplayError::Incompatible { .. }));
        assert_eq!(e.exit_code(), 3);
        assert_eq!(replay("lemma-L9", generic, &ReplayOptions::default()).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn verify_round_trip_and_tamper() {
        let reg = PlaneRegistry::default();
        let p = reg.get("b4").unwrap();
        let opts = ReplayOptions::default();
        let json = export_json(&replay("lemma-L2", p, &opts).unwrap());
        verify(&json, &reg, &opts).unwrap();
        let tampered = json.replacen("\"verdict\": \"Proved\"", "\"verdict\": \"Conditional\"", 1);
        assert!(matches!(verify(&tampered, &reg, &opts), Err(VerifyError::VerdictMismatch { .. })));
    }
}
