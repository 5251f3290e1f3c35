//! The propagators of the inference engine.
//!
//! Each rule is a pure function from premise claims to a bound on one slot
//! `h^i(L)`. The engine and the derivation checker both go through [`derive`],
//! so a serialized derivation can be re-verified step by step.

use super::derivation::{Claim, SignedBound};
use super::{chi, DimInterval};
use crate::picard::{FakePlane, LineBundleClass};

pub const R_AXIOM: &str = "R-axiom";
pub const R_HYPOTHESIS: &str = "hypothesis";
pub const R_PLANE: &str = "R-plane";
pub const R_RIEMANN_ROCH: &str = "riemann-roch";
pub const R_NEG: &str = "R-neg";
pub const R_CHI: &str = "R-chi";
pub const R_SERRE: &str = "R-serre";
pub const R_KODAIRA: &str = "R-kodaira";
pub const R_MULT: &str = "R-mult";
pub const R_MULT_CONTRA: &str = "R-mult-contra";
pub const R_REFUTATION: &str = "refutation";

/// Rules whose steps [`derive`] can recompute.
pub const ENGINE_RULES: [&str; 8] = [R_PLANE, R_RIEMANN_ROCH, R_NEG, R_CHI, R_SERRE, R_KODAIRA, R_MULT, R_MULT_CONTRA];

/// Definitional values: `h0(O) = 1`, `h1(O) = q = 0`, `h0(K) = p_g = 0`.
pub fn plane_invariant(plane: &FakePlane, class: &LineBundleClass, index: u8) -> Option<DimInterval> {
    let trivial = plane.untwisted(0);
    match index {
        0 if *class == trivial => Some(DimInterval::exact(1)),
        1 if *class == trivial => Some(DimInterval::exact(FakePlane::Q as u64)),
        0 if class == plane.canonical() => Some(DimInterval::exact(FakePlane::PG as u64)),
        _ => None,
    }
}

/// Negative degree, or degree zero with a nontrivial torsion part: no sections.
pub fn neg_vanishes(class: &LineBundleClass) -> bool {
    class.degree < 0 || (class.degree == 0 && !class.torsion.is_zero())
}

/// `L - K` ample forces `h1(L) = h2(L) = 0`.
pub fn kodaira_vanishes(plane: &FakePlane, class: &LineBundleClass) -> bool {
    class.degree - plane.canonical().degree >= 1
}

fn dim(c: &Claim) -> Option<(&LineBundleClass, u8, DimInterval)> {
    match c {
        Claim::Dim { class, index, interval } => Some((class, *index, *interval)),
        _ => None,
    }
}

fn sum(plane: &FakePlane, a: &LineBundleClass, b: &LineBundleClass) -> Result<LineBundleClass, String> {
    plane.add(a, b).map_err(|e| e.to_string())
}

/// Recomputes the bound that `rule` yields for slot `(class, index)` from `premises`.
///
/// `premises` must exclude the slot's own prior value.
pub fn derive(
    plane: &FakePlane,
    rule: &str,
    class: &LineBundleClass,
    index: u8,
    premises: &[&Claim],
) -> Result<SignedBound, String> {
    match rule {
        R_PLANE => plane_invariant(plane, class, index)
            .map(SignedBound::from_interval)
            .ok_or_else(|| format!("h{index}{class} is not a definitional invariant")),
        R_NEG => {
            if index == 0 && neg_vanishes(class) {
                Ok(SignedBound::exact(0))
            } else {
                Err(format!("R-neg does not apply to h{index}{class}"))
            }
        }
        R_KODAIRA => {
            if (index == 1 || index == 2) && kodaira_vanishes(plane, class) {
                Ok(SignedBound::exact(0))
            } else {
                Err(format!("R-kodaira does not apply to h{index}{class}"))
            }
        }
        R_SERRE => {
            let dual = plane.serre_dual(class).map_err(|e| e.to_string())?;
            match premises {
                [p] => match dim(p) {
                    Some((c, i, iv)) if *c == dual && i == 2 - index => Ok(SignedBound::from_interval(iv)),
                    _ => Err(format!("R-serre premise must be h{}{dual}", 2 - index)),
                },
                _ => Err("R-serre takes exactly one premise".into()),
            }
        }
        R_CHI => derive_chi(class, index, premises),
        R_MULT => derive_mult(plane, class, index, premises),
        R_MULT_CONTRA => derive_mult_contra(plane, class, index, premises),
        other => Err(format!("`{other}` is not an engine propagator")),
    }
}

fn derive_chi(class: &LineBundleClass, index: u8, premises: &[&Claim]) -> Result<SignedBound, String> {
    let mut chi_val = None;
    let mut h = [DimInterval::UNKNOWN; 3];
    for p in premises {
        match p {
            Claim::Chi { class: c, value } if c == class => chi_val = Some(*value),
            Claim::Dim { class: c, index: i, interval } if c == class && *i != index && *i <= 2 => {
                h[*i as usize] = *interval
            }
            other => return Err(format!("unexpected R-chi premise {other}")),
        }
    }
    let chi_val = chi_val.ok_or("R-chi needs the Euler characteristic")?;
    if chi_val != chi(class) {
        return Err(format!("Euler characteristic premise {chi_val} is wrong for {class}"));
    }
    let lo = |i: usize| h[i].lo as i64;
    let hi = |i: usize| h[i].hi.map(|v| v as i64);
    // h0 - h1 + h2 = chi
    let bound = match index {
        0 => SignedBound {
            lo: hi(2).map_or(0, |h2| chi_val + lo(1) - h2),
            hi: hi(1).map(|h1| chi_val + h1 - lo(2)),
        },
        1 => SignedBound {
            lo: lo(0) + lo(2) - chi_val,
            hi: hi(0).zip(hi(2)).map(|(a, b)| a + b - chi_val),
        },
        2 => SignedBound {
            lo: hi(0).map_or(0, |h0| chi_val - h0 + lo(1)),
            hi: hi(1).map(|h1| chi_val - lo(0) + h1),
        },
        _ => return Err(format!("no index {index}")),
    };
    Ok(bound)
}

fn derive_mult(
    plane: &FakePlane,
    class: &LineBundleClass,
    index: u8,
    premises: &[&Claim],
) -> Result<SignedBound, String> {
    if index != 0 {
        return Err("R-mult bounds h0 only".into());
    }
    let (a, b) = match premises {
        [p] => {
            let a = dim(p).ok_or("R-mult premise must be a dimension")?;
            (a, a)
        }
        [p, q] => (dim(p).ok_or("bad premise")?, dim(q).ok_or("bad premise")?),
        _ => return Err("R-mult takes one or two premises".into()),
    };
    if a.1 != 0 || b.1 != 0 {
        return Err("R-mult premises must be h0".into());
    }
    if sum(plane, a.0, b.0)? != *class {
        return Err(format!("{} + {} is not {class}", a.0, b.0));
    }
    if a.2.lo < 1 || b.2.lo < 1 {
        return Err("R-mult needs both factors effective".into());
    }
    Ok(SignedBound { lo: (a.2.lo + b.2.lo) as i64 - 1, hi: None })
}

fn derive_mult_contra(
    plane: &FakePlane,
    class: &LineBundleClass,
    index: u8,
    premises: &[&Claim],
) -> Result<SignedBound, String> {
    if index != 0 {
        return Err("R-mult-contra bounds h0 only".into());
    }
    match premises {
        [p] => {
            let (s, i, iv) = dim(p).ok_or("bad premise")?;
            if i != 0 || sum(plane, class, class)? != *s {
                return Err(format!("premise must be h0 of 2{class}"));
            }
            let m = iv.hi.ok_or("premise has no upper bound")? as i64;
            // a >= 1 implies 2a - 1 <= m
            Ok(SignedBound { lo: 0, hi: Some((m + 1) / 2) })
        }
        [p, q] => {
            let p = dim(p).ok_or("bad premise")?;
            let q = dim(q).ok_or("bad premise")?;
            for (s, other) in [(p, q), (q, p)] {
                if s.1 == 0 && other.1 == 0 && sum(plane, class, other.0)? == *s.0 {
                    let m = s.2.hi.ok_or("premise has no upper bound")? as i64;
                    if other.2.lo < 1 {
                        return Err("cofactor must be effective".into());
                    }
                    // a >= 1 implies a + b - 1 <= m
                    return Ok(SignedBound { lo: 0, hi: Some((m + 1 - other.2.lo as i64).max(0)) });
                }
            }
            Err(format!("premises do not decompose a sum involving {class}"))
        }
        _ => Err("R-mult-contra takes one or two premises".into()),
    }
}
