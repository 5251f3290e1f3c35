//! Plain-text plane configs and axiom override files.
//!
//! Plane config:
//!
//! ```text
//! id = p1
//! h1_orders = 2,4
//! aut = trivial
//! canonical_torsion = 0,0
//!
//! [curve 0,1]
//! effective = true
//! h0_OC2C = 1
//! h1_OC2C = unknown
//! ```
//!
//! Axiom file, one entry per line, `#` starts a comment:
//!
//! ```text
//! A1 = off
//! A-noL1 = on
//! extra = h0(1;0,0) >= 1 ; hand computation
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::axioms::{a_no_l1, Axiom, AxiomSet, A_NO_L1};
use crate::cohomology::{DimInterval, Fact};
use crate::picard::{AutLabel, FakePlane, LineBundleClass, PicardError, TorsionElement, TorsionGroup};
use crate::reider::CurveFacts;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, msg: msg.into() }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn int_list(s: &str) -> Option<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// `n`, `unknown`, `>= n`, `<= n` or `[a, b]`.
pub fn parse_interval(s: &str) -> Option<DimInterval> {
    let s = s.trim();
    if s == "unknown" {
        return Some(DimInterval::UNKNOWN);
    }
    if let Some(r) = s.strip_prefix(">=") {
        return r.trim().parse().ok().map(DimInterval::at_least);
    }
    if let Some(r) = s.strip_prefix("<=") {
        return r.trim().parse().ok().map(DimInterval::at_most);
    }
    if let Some(r) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (a, b) = r.split_once(',')?;
        let lo = a.trim().parse().ok()?;
        let b = b.trim();
        let hi = if b == "inf" { None } else { Some(b.parse().ok()?) };
        return (hi.is_none_or(|h| h >= lo)).then(|| DimInterval::new(lo, hi));
    }
    s.parse().ok().map(DimInterval::exact)
}

/// `(k;t1,...,tr)` or `(k)` on a plane with trivial torsion.
pub fn parse_class(plane: &FakePlane, s: &str) -> Option<LineBundleClass> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (deg, tors) = inner.split_once(';').unwrap_or((inner, ""));
    let degree = deg.trim().parse().ok()?;
    let coords = int_list(tors)?;
    if coords.is_empty() {
        return Some(plane.untwisted(degree));
    }
    plane.class(degree, &coords).ok()
}

/// `h<i>(<class>) <op> <n>` with `op` one of `=`, `>=`, `<=`.
pub fn parse_fact(plane: &FakePlane, s: &str) -> Option<Fact> {
    let s = s.trim();
    let rest = s.strip_prefix('h')?;
    let index: u8 = rest.get(..1)?.parse().ok()?;
    if index > 2 {
        return None;
    }
    let close = rest.find(')')?;
    let class = parse_class(plane, &rest[1..=close])?;
    let tail = rest[close + 1..].trim();
    let interval = if let Some(v) = tail.strip_prefix(">=") {
        DimInterval::at_least(v.trim().parse().ok()?)
    } else if let Some(v) = tail.strip_prefix("<=") {
        DimInterval::at_most(v.trim().parse().ok()?)
    } else {
        parse_interval(tail.strip_prefix('=')?)?
    };
    Some(Fact::new(class, index, interval))
}

#[derive(Debug, Clone)]
pub struct PlaneConfig {
    pub plane: FakePlane,
    pub curves: BTreeMap<TorsionElement, CurveFacts>,
}

pub fn parse_plane_config(text: &str) -> Result<PlaneConfig, ConfigError> {
    let mut top: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut sections: Vec<(usize, String, Vec<(usize, String, String)>)> = Vec::new();
    for (n, l) in lines(text) {
        if let Some(h) = l.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
            let coords = h.trim().strip_prefix("curve").ok_or_else(|| syntax(n, format!("unknown section [{h}]")))?;
            sections.push((n, coords.trim().to_string(), Vec::new()));
            continue;
        }
        let (k, v) = l.split_once('=').ok_or_else(|| syntax(n, "expected `key = value`"))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        match sections.last_mut() {
            Some((_, _, body)) => body.push((n, k, v)),
            None => {
                top.insert(k, (n, v));
            }
        }
    }
    let get = |k: &'static str| top.get(k).ok_or(ConfigError::Missing(k));
    let id = get("id")?.1.clone();
    let (n, orders) = get("h1_orders")?;
    let orders = int_list(orders).ok_or_else(|| syntax(*n, "h1_orders must be a comma-separated list"))?;
    let group = TorsionGroup::new(orders.into_iter().map(|o| o as u32).collect())?;
    let aut = match top.get("aut") {
        Some((n, a)) => AutLabel::parse(a).ok_or_else(|| syntax(*n, format!("unknown automorphism group `{a}`")))?,
        None => AutLabel::Trivial,
    };
    let canonical = match top.get("canonical_torsion") {
        Some((n, c)) => {
            let c = int_list(c).ok_or_else(|| syntax(*n, "canonical_torsion must be a comma-separated list"))?;
            group.element(&c)?
        }
        None => group.zero(),
    };
    let plane = FakePlane::new(id, group, aut, canonical)?;

    let mut curves = BTreeMap::new();
    for (n, coords, body) in sections {
        let c = int_list(&coords).ok_or_else(|| syntax(n, "curve section needs torsion coordinates"))?;
        let t = plane.torsion_group().element(&c)?;
        let mut facts = CurveFacts::default();
        for (n, k, v) in body {
            match k.as_str() {
                "effective" => {
                    facts.effective = match v.as_str() {
                        "true" => Some(true),
                        "false" => Some(false),
                        "unknown" => None,
                        _ => return Err(syntax(n, "effective must be true, false or unknown")),
                    }
                }
                "h0_OC2C" => facts.h0_oc2c = parse_interval(&v).ok_or_else(|| syntax(n, "bad dimension"))?,
                "h1_OC2C" => facts.h1_oc2c = parse_interval(&v).ok_or_else(|| syntax(n, "bad dimension"))?,
                _ => return Err(syntax(n, format!("unknown curve key `{k}`"))),
            }
        }
        curves.insert(t, facts);
    }
    Ok(PlaneConfig { plane, curves })
}

/// Applies an axiom file to `base`: `off` removes, `on` enables an optional axiom, facts add or extend.
pub fn apply_axiom_file(plane: &FakePlane, base: AxiomSet, text: &str) -> Result<AxiomSet, ConfigError> {
    let mut set = base;
    let mut added: BTreeMap<String, (String, Vec<Fact>)> = BTreeMap::new();
    for (n, l) in lines(text) {
        let (id, rest) = l.split_once('=').ok_or_else(|| syntax(n, "expected `id = value`"))?;
        let id = id.trim();
        let body_start = rest.rfind(')').map_or(0, |i| i + 1);
        let (value, citation) = match rest[body_start..].find(';') {
            Some(i) => (rest[..body_start + i].trim(), Some(rest[body_start + i + 1..].trim().to_string())),
            None => (rest.trim(), None),
        };
        match value {
            "off" => {
                set.remove(id);
            }
            "on" => {
                if set.get(id).is_some() {
                    continue;
                }
                match id {
                    A_NO_L1 => set.insert(a_no_l1(plane)),
                    _ => return Err(syntax(n, format!("`{id}` is not an optional axiom; give a fact instead"))),
                }
            }
            fact => {
                let f = parse_fact(plane, fact).ok_or_else(|| syntax(n, format!("cannot parse fact `{fact}`")))?;
                let entry = added
                    .entry(id.to_string())
                    .or_insert_with(|| (format!("axiom file, line {n}"), Vec::new()));
                if let Some(c) = citation.filter(|c| !c.is_empty()) {
                    entry.0 = c;
                }
                entry.1.push(f);
            }
        }
    }
    for (id, (citation, facts)) in added {
        set.insert(Axiom::from_facts(id, citation, facts));
    }
    Ok(set)
}
