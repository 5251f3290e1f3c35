use super::derivation::{Claim, Derivation, DerivationError, SignedBound};
use super::rules::{self, R_AXIOM, R_HYPOTHESIS, R_REFUTATION, R_RIEMANN_ROCH};
use super::{chi, DimInterval};
use crate::picard::FakePlane;

/// Re-verifies a derivation: structure, and every engine step against its inputs.
///
/// Script-level steps (free-text statements) are checked structurally only.
pub fn recheck(plane: &FakePlane, d: &Derivation) -> Result<(), DerivationError> {
    d.check_structure()?;
    for (id, step) in d.steps.iter().enumerate() {
        let fail = |reason: String| DerivationError::Unjustified { step: id, rule: step.rule.clone(), reason };
        match step.rule.as_str() {
            R_AXIOM => {
                if step.cite.is_none() {
                    return Err(fail("axiom step without a citation".into()));
                }
            }
            R_HYPOTHESIS => {}
            R_RIEMANN_ROCH => match &step.output {
                Claim::Chi { class, value } if *value == chi(class) => {}
                other => return Err(fail(format!("{other} is not the Riemann-Roch value"))),
            },
            R_REFUTATION => {
                let hyp = step.inputs.iter().map(|&i| d.step(i)).find(|s| s.rule == R_HYPOTHESIS);
                let clash = step.inputs.iter().any(|&i| d.step(i).output.is_clash());
                if !clash {
                    return Err(fail("refutation without a contradiction".into()));
                }
                if let (Some(h), Claim::Dim { class, index, interval }) = (hyp, &step.output) {
                    match &h.output {
                        Claim::Dim { class: c, index: i, interval: hi }
                            if c == class && i == index && hi.complement() == Some(*interval) => {}
                        _ => return Err(fail("conclusion is not the negated hypothesis".into())),
                    }
                }
            }
            rule if rules::ENGINE_RULES.contains(&rule) => {
                let Some((class, index)) = step.output.slot() else {
                    return Err(fail("engine steps must bound a slot".into()));
                };
                let mut prior = DimInterval::UNKNOWN;
                let mut premises = Vec::new();
                for &i in &step.inputs {
                    let c = &d.step(i).output;
                    match (c.slot(), c) {
                        (Some((pc, pi)), Claim::Dim { interval, .. }) if pc == class && pi == index => prior = *interval,
                        _ => premises.push(c),
                    }
                }
                let derived: SignedBound = rules::derive(plane, rule, class, index, &premises).map_err(fail)?;
                match (&step.output, derived.meet(prior)) {
                    (Claim::Dim { interval, .. }, Some(m)) if m == *interval => {}
                    (Claim::Clash { prior: p, derived: dd, .. }, None) if *p == prior && *dd == derived => {}
                    (out, got) => {
                        return Err(fail(format!(
                            "recomputed {} but step claims {out}",
                            got.map_or("a contradiction".to_string(), |g| g.to_string())
                        )))
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}
