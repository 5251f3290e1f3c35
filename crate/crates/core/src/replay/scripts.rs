use crate::axioms::{Axiom, AxiomSet, AxiomStatement, A1, A3, A4, A5, A_KRA, A_MINIFOLD, A_VAN};
use crate::cohomology::{infer, intersection, refute, Claim, Derivation, DimInterval, Fact, Inference};
use crate::curve::{
    admissible_normalization_genera, arithmetic_genus, hurwitz_solutions, toledo_check, Toledo,
    HYPERBOLIC_GENUS_CITATION,
};
use crate::derived::{phantom_and_sod, search_nonstandard, CollectionReport};
use crate::group_action::{guaranteed_fixed_nontrivial, make_order7_action, LinearAction};
use crate::picard::{FakePlane, LineBundleClass, TorsionElement};
use crate::reider::{bicanonical_status_from, catanese_criterion, BicanonicalLevel};

use super::{ReplayError, ReplayOptions, Verdict};

pub const R_GAP: &str = "gap";
pub const R_CONCLUSION: &str = "conclusion";
pub const R_FIXED_POINT: &str = "fixed-point-p1";
pub const R_CASES: &str = "case-analysis";
pub const FIXED_POINT_CITATION: &str = "a group of odd prime order acting on P^0 or P^1 fixes a point";

pub(super) struct Ctx<'a> {
    pub plane: &'a FakePlane,
    pub axioms: &'a AxiomSet,
    pub opts: &'a ReplayOptions,
    pub derivation: Derivation,
    pub findings: Vec<String>,
    pub collections: Vec<CollectionReport>,
    gaps: Vec<String>,
}

impl<'a> Ctx<'a> {
    pub fn new(plane: &'a FakePlane, axioms: &'a AxiomSet, opts: &'a ReplayOptions) -> Self {
        Self {
            plane,
            axioms,
            opts,
            derivation: Derivation::new(),
            findings: Vec::new(),
            collections: Vec::new(),
            gaps: Vec::new(),
        }
    }

    fn require(&mut self, id: &str, purpose: &str) -> Option<Axiom> {
        let found = self.axioms.get(id).cloned();
        if found.is_none() {
            let text = format!("axiom {id} is not available, needed for {purpose}");
            self.derivation.note(R_GAP, vec![], text.clone());
            self.gaps.push(text);
        }
        found
    }

    fn gap(&mut self, inputs: Vec<usize>, text: String) -> usize {
        self.gaps.push(text.clone());
        self.derivation.note(R_GAP, inputs, text)
    }

    /// Every fact-valued axiom in the active set.
    fn fact_axioms(&self) -> Vec<Axiom> {
        self.axioms.iter().filter(|a| matches!(a.statement, AxiomStatement::Facts { .. })).cloned().collect()
    }

    fn absorb(&mut self, inf: &Inference) -> usize {
        self.derivation.append(&inf.derivation)
    }

    fn source(&self, inf: &Inference, offset: usize, class: &LineBundleClass, index: u8) -> Option<usize> {
        inf.source(class, index).map(|s| s + offset)
    }

    fn conclude(&mut self, inputs: Vec<usize>, proved: bool, text: String) -> Verdict {
        if proved && self.gaps.is_empty() {
            self.derivation.note(R_CONCLUSION, inputs, text);
            Verdict::Proved
        } else {
            let gaps = self.gaps.join("; ");
            let msg = if gaps.is_empty() { text } else { format!("conditional: {gaps}") };
            self.derivation.note(R_CONCLUSION, inputs, msg.clone());
            self.findings.push(msg);
            Verdict::Conditional
        }
    }

    fn action(&self) -> Result<LinearAction, ReplayError> {
        match &self.opts.action {
            Some(a) => Ok(a.clone()),
            None => Ok(make_order7_action(self.plane.torsion_group().rank())?),
        }
    }
}

pub(super) fn run(id: &str, ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    match id {
        "lemma-L4" => lemma_l4(ctx),
        "lemma-L2" => bound_by_refutation(ctx, 2, 3),
        "lemma-L1" => bound_by_refutation(ctx, 1, 2),
        "lemma-curves" => lemma_curves(ctx),
        "thm-birat" => thm_birat(ctx),
        "thm-keum" => thm_keum(ctx),
        "prop-catanese" => prop_catanese(ctx),
        "prop-vanishing" => prop_vanishing(ctx).map(|(v, _)| v),
        "thm-eccezionale" => thm_eccezionale(ctx),
        "cor-orthogonal" => sod(ctx, false),
        "remark-phantom" => sod(ctx, true),
        other => Err(ReplayError::UnknownResult(other.to_string())),
    }
}

fn lemma_l4(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    let classes = ctx.plane.classes_of_degree(4);
    let inf = infer(ctx.plane, &[], &classes)?;
    let off = ctx.absorb(&inf);
    let srcs: Vec<usize> = classes.iter().filter_map(|c| ctx.source(&inf, off, c, 0)).collect();
    let all = classes.iter().all(|c| inf.h(c, 0) == DimInterval::exact(3));
    ctx.findings.push(format!("h0(L) = {} for all {} classes L ≡ 4L1", inf.h(&classes[0], 0), classes.len()));
    Ok(ctx.conclude(srcs, all, "every L ≡ 4L1 has h0(L) = 3".into()))
}

/// Refutes `h0(L) >= bad` for every `L ≡ degree·L1`.
fn bound_by_refutation(ctx: &mut Ctx, degree: i64, bad: u64) -> Result<Verdict, ReplayError> {
    let mut outs = Vec::new();
    let mut all = true;
    for c in ctx.plane.classes_of_degree(degree) {
        let hyp = Fact::new(c.clone(), 0, DimInterval::at_least(bad));
        match refute(ctx.plane, &[], &hyp) {
            Ok(r) => {
                let off = ctx.derivation.append(&r.derivation);
                outs.push(off + r.derivation.len() - 1);
            }
            Err(crate::cohomology::EngineError::NotRefutable(_)) => {
                all = false;
                let id = ctx.gap(vec![], format!("{hyp} is not refutable at current rule strength"));
                outs.push(id);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let n = outs.len();
    ctx.findings.push(format!("h0(L) <= {} for all {n} classes L ≡ {degree}L1", bad - 1));
    if degree == 1 {
        ctx.findings.push("h0(L) ∈ {0, 1}; whether an effective L1 exists is undetermined".into());
    }
    Ok(ctx.conclude(outs, all, format!("every L ≡ {degree}L1 has h0(L) <= {}", bad - 1)))
}

fn lemma_curves(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    let v = bound_by_refutation(ctx, 1, 2)?;
    let n = ctx.plane.torsion_group().size();
    let last = ctx.derivation.last_id().expect("refutations recorded");
    ctx.derivation.note(
        "curve-count",
        vec![last],
        format!("a curve C ≡ L1 is a divisor in |L1 + T|; h0 <= 1 gives at most one per T, so at most {n} curves ≡ L1"),
    );
    ctx.findings.push(format!("at most {n} curves numerically equivalent to L1"));
    Ok(v)
}

fn bicanonical_inference(ctx: &mut Ctx, axioms: &[Axiom]) -> Result<Inference, ReplayError> {
    let mut targets = ctx.plane.classes_of_degree(1);
    targets.push(ctx.plane.scale(2, ctx.plane.canonical())?);
    Ok(infer(ctx.plane, axioms, &targets)?)
}

fn thm_birat(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    let inf = bicanonical_inference(ctx, &[])?;
    let status = bicanonical_status_from(ctx.plane, &inf);
    ctx.derivation.append(&status.derivation);
    let last = ctx.derivation.last_id().expect("status recorded");
    ctx.findings.push(format!("level {:?}, at most {} obstruction curves", status.level, status.curve_count_bound));
    let ok = status.level >= BicanonicalLevel::BirationalIsoOutsideFiniteSet;
    Ok(ctx.conclude(vec![last], ok, "the bicanonical map is birational and an isomorphism outside a finite set".into()))
}

fn thm_keum(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    ctx.require(A1, "the vanishing h0(2 O(1)) = 0");
    let inf = bicanonical_inference(ctx, &ctx.fact_axioms())?;
    let status = bicanonical_status_from(ctx.plane, &inf);
    ctx.derivation.append(&status.derivation);
    let last = ctx.derivation.last_id().expect("status recorded");
    ctx.findings.push(format!("level {:?}", status.level));
    if status.level == BicanonicalLevel::Embedding {
        return Ok(ctx.conclude(vec![last], true, "the bicanonical map is an embedding".into()));
    }
    let effective: Vec<_> = status.obstruction_classes.iter().filter(|c| inf.h(c, 0).is_positive()).collect();
    if !effective.is_empty() {
        let list: Vec<String> = effective.iter().map(|c| c.to_string()).collect();
        let text = format!("curves ≡ L1 exist in {}: not an embedding", list.join(" "));
        ctx.derivation.note(R_CONCLUSION, vec![last], text.clone());
        ctx.findings.push(text);
        return Ok(Verdict::Refuted);
    }
    let list: Vec<String> = status.obstruction_classes.iter().map(|c| c.to_string()).collect();
    ctx.gap(vec![last], format!("h0 undetermined on {}", list.join(" ")));
    Ok(ctx.conclude(vec![last], false, String::new()))
}

fn prop_catanese(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    let inf = infer(ctx.plane, &ctx.fact_axioms(), &ctx.plane.classes_of_degree(1))?;
    ctx.absorb(&inf);
    let rep = catanese_criterion(ctx.plane, Some(&inf.table), &ctx.opts.curves);
    ctx.derivation.append(&rep.derivation);
    let last = ctx.derivation.last_id().expect("criterion recorded");
    match rep.embedding {
        Some(e) => {
            ctx.findings.push(format!("criterion decides: {}", if e { "embedding" } else { "not an embedding" }));
            Ok(ctx.conclude(vec![last], true, "the embedding criterion is decided by the curve data".into()))
        }
        None => {
            let list: Vec<String> = rep.undetermined.iter().map(|c| c.to_string()).collect();
            ctx.gap(vec![last], format!("curve data missing for {}", list.join(" ")));
            Ok(ctx.conclude(vec![last], false, String::new()))
        }
    }
}

/// The vanishing argument for each nontrivial `T` fixed by the action. Returns the twists proven.
fn prop_vanishing(ctx: &mut Ctx) -> Result<(Verdict, Vec<TorsionElement>), ReplayError> {
    let action = ctx.action()?;
    let a1 = ctx.require(A1, "irreducibility of invariant curves");
    let a3 = ctx.require(A3, "excluding pointwise-fixed curves");
    let a4 = ctx.require(A4, "the smooth case");
    let a5 = ctx.require(A5, "the singular case");
    let kra = ctx.require(A_KRA, "the normalization genus");
    let plane = ctx.plane;
    let rank = plane.torsion_group().rank();
    let fixed = action.fixed_nontrivial();
    let act = ctx.derivation.note(
        "action",
        vec![],
        format!(
            "Z/7 acts on H1 = {} by a matrix of order {}; fixed nontrivial T: {}",
            plane.torsion_group(),
            action.order(),
            if fixed.is_empty() { "none".to_string() } else { fixed.iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" ") }
        ),
    );
    if action.order() != 7 {
        ctx.gap(vec![act], "the supplied action is not of order 7; equivariance of 2 O(1) + T needs evidence".into());
        return Ok((ctx.conclude(vec![act], false, String::new()), Vec::new()));
    }
    if fixed.is_empty() {
        let label = if guaranteed_fixed_nontrivial(rank as u32) {
            "no nontrivial T is fixed".to_string()
        } else {
            "no nontrivial T is fixed by the representative action; undetermined by counting".to_string()
        };
        ctx.findings.push(label.clone());
        return Ok((ctx.conclude(vec![act], true, format!("vacuous: {label}")), Vec::new()));
    }

    // degree-1 classes carry no sections, from A1
    let deg1 = plane.classes_of_degree(1);
    let irreducible_inputs = match &a1 {
        Some(a1) => {
            let inf = infer(plane, std::slice::from_ref(a1), &deg1)?;
            let off = ctx.absorb(&inf);
            if deg1.iter().all(|c| inf.h(c, 0).is_zero()) {
                Some(deg1.iter().filter_map(|c| ctx.source(&inf, off, c, 0)).collect::<Vec<_>>())
            } else {
                None
            }
        }
        None => None,
    };

    let mut proven = Vec::new();
    let mut closed_ids = Vec::new();
    let k_dot_c = intersection(plane.canonical(), &plane.untwisted(2));
    let p_a = arithmetic_genus(2).expect("k = 2");
    for t in &fixed {
        let class = plane.add(&plane.untwisted(2), &LineBundleClass::new(0, t.clone()))?;
        let l2 = refute(plane, &[], &Fact::new(class.clone(), 0, DimInterval::at_least(3)))?;
        let off = ctx.derivation.append(&l2.derivation);
        let bound = off + l2.derivation.len() - 1;
        let hyp = ctx.derivation.push("hypothesis", vec![], Claim::dim(class.clone(), 0, DimInterval::at_least(1)));
        let eq = ctx.derivation.note(
            "equivariance",
            vec![act],
            format!("T = ({t}) is Z/7-fixed and O(1) is the equivariant cubic root, so {class} is Z/7-equivariant"),
        );
        let curve = ctx.derivation.note(
            R_FIXED_POINT,
            vec![hyp, bound, eq],
            format!("Z/7 acts on P(H0{class}) of dimension <= 1; {FIXED_POINT_CITATION}: a Z/7-invariant curve C ∈ |{class}|"),
        );
        let mut case_inputs = vec![curve];
        match &a3 {
            Some(a) => {
                case_inputs.push(ctx.derivation.push_axiom(a, vec![curve], Claim::text("the Z/7 fixed locus is finite, so C is not pointwise fixed and Z/7 acts nontrivially on C")));
            }
            None => continue,
        }
        match &irreducible_inputs {
            Some(srcs) => {
                let mut inputs = vec![curve];
                inputs.extend(srcs);
                case_inputs.push(ctx.derivation.note(
                    "irreducible",
                    inputs,
                    "C ≡ 2L1 would split into curves ≡ L1, but every degree-1 class has h0 = 0: C is irreducible",
                ));
            }
            None => {
                ctx.gap(vec![curve], "irreducibility of C needs h0 = 0 on all degree-1 classes".into());
                continue;
            }
        }
        let pa = ctx.derivation.note("adjunction", vec![curve], format!("p_a(C) = {p_a} and K·C = {k_dot_c}"));

        // smooth case
        let sols = hurwitz_solutions(7, p_a as u64).expect("7 is prime");
        let smooth = match &a4 {
            Some(a) => {
                let fixed_on_x = match a.statement {
                    AxiomStatement::QuotientSingularPoints { count, .. } => count,
                    _ => 0,
                };
                let ax = ctx.derivation.push_axiom(
                    a,
                    vec![],
                    Claim::text(format!("X/(Z/7) has exactly {fixed_on_x} singular points, so Z/7 has {fixed_on_x} fixed points on X")),
                );
                let rs: Vec<String> = sols.iter().map(|s| format!("(g' = {}, r = {})", s.quotient_genus, s.fixed_points)).collect();
                let closes = sols.iter().all(|s| s.fixed_points > fixed_on_x);
                let text = format!(
                    "if C is smooth, Riemann-Hurwitz for Z/7 on genus {p_a} gives {}; {}",
                    if rs.is_empty() { "no solution".to_string() } else { rs.join(", ") },
                    if closes { format!("more than {fixed_on_x} fixed points on X, contradiction") } else { "no contradiction".to_string() }
                );
                let id = ctx.derivation.note("riemann-hurwitz", vec![pa, ax], text);
                closes.then_some(id)
            }
            None => None,
        };

        // singular case
        let singular = match &a5 {
            Some(a5) => {
                let lower = ctx.derivation.note("hyperbolic", vec![], format!("normalization genus >= 2: {HYPERBOLIC_GENUS_CITATION}"));
                let genera = admissible_normalization_genera(7, p_a as u64, kra.as_ref()).expect("7 is prime");
                let mut gin = vec![pa, lower];
                if let Some(kra) = &kra {
                    gin.push(ctx.derivation.push_axiom(kra, vec![pa], Claim::text(kra.statement.to_string())));
                }
                let gs: Vec<String> = genera.iter().map(u64::to_string).collect();
                let gid = ctx.derivation.note(
                    "normalization",
                    gin,
                    format!("if C is singular its normalization has genus in {{{}}}", gs.join(", ")),
                );
                let geo = ctx.derivation.push_axiom(a5, vec![], Claim::text("no immersed totally geodesic curves on X"));
                let mut closes = true;
                let mut ids = vec![gid, geo];
                for g in &genera {
                    let verdict = toledo_check(k_dot_c, *g as i64).expect("g >= 2");
                    let text = match verdict {
                        Toledo::EqualityGeodesic => {
                            format!("genus {g}: K·C = {k_dot_c} = 3(g - 1), C is totally geodesic, contradiction")
                        }
                        Toledo::Violation => format!("genus {g}: K·C = {k_dot_c} > 3(g - 1) violates the Toledo bound"),
                        Toledo::Strict => {
                            closes = false;
                            format!("genus {g}: K·C = {k_dot_c} < 3(g - 1), no contradiction")
                        }
                    };
                    ids.push(ctx.derivation.note("toledo", vec![gid, geo], text));
                }
                let id = ctx.derivation.note("toledo", ids, if closes { "every singular case is contradictory" } else { "a singular case remains open" });
                closes.then_some(id)
            }
            None => None,
        };

        match (smooth, singular) {
            (Some(s), Some(g)) => {
                case_inputs.extend([hyp, s, g]);
                let id = ctx.derivation.push(R_CASES, case_inputs, Claim::dim(class.clone(), 0, DimInterval::ZERO));
                closed_ids.push(id);
                proven.push(t.clone());
            }
            (s, g) => {
                let mut open = Vec::new();
                if s.is_none() {
                    open.push("smooth");
                }
                if g.is_none() {
                    open.push("singular");
                }
                ctx.gap(vec![hyp], format!("{class}: the {} case is not closed", open.join(" and ")));
            }
        }
    }
    if !proven.is_empty() {
        let ts: Vec<String> = proven.iter().map(|t| format!("({t})")).collect();
        ctx.findings.push(format!("{A_VAN} established for T = {}", ts.join(" ")));
    }
    let all = proven.len() == fixed.len();
    let v = ctx.conclude(closed_ids, all, "h0(2 O(1) + T) = 0 for every Z/7-fixed nontrivial T".into());
    Ok((v, proven))
}

fn thm_eccezionale(ctx: &mut Ctx) -> Result<Verdict, ReplayError> {
    let (v, found) = eccezionale_collections(ctx)?;
    if v != Verdict::Proved {
        return Ok(v);
    }
    let last = ctx.derivation.last_id().expect("search recorded");
    Ok(ctx.conclude(vec![last], !found.is_empty(), format!("{} nonstandard exceptional collection(s)", found.len())))
}

/// Runs the vanishing argument, then the search; returns indices into `ctx.collections` of exceptional ones.
fn eccezionale_collections(ctx: &mut Ctx) -> Result<(Verdict, Vec<usize>), ReplayError> {
    let (v, proven) = prop_vanishing(ctx)?;
    let vanishing_end = ctx.derivation.last_id().expect("vanishing recorded");
    if v != Verdict::Proved {
        return Ok((v, Vec::new()));
    }
    let action = ctx.action()?;
    let a1: Vec<Axiom> = ctx.axioms.get(A1).cloned().into_iter().collect();
    let res = search_nonstandard(ctx.plane, &action, &a1)?;
    let mut found = Vec::new();
    for r in res.reports {
        let t_ok = proven.iter().any(|t| {
            let twisted = ctx.plane.add(&ctx.plane.untwisted(1), &LineBundleClass::new(0, t.clone())).ok();
            twisted.and_then(|tw| ctx.plane.scale(-1, &tw).ok()).as_ref() == Some(&r.objects[1])
        });
        let off = ctx.derivation.append(&r.derivation);
        let id = off + r.derivation.len() - 1;
        ctx.derivation.note(
            "collection",
            vec![vanishing_end, id],
            format!("{}", super::render_collection(&r)),
        );
        if r.exceptional == Some(true) && t_ok {
            found.push(ctx.collections.len());
        }
        ctx.collections.push(r);
    }
    ctx.findings.push(res.label.clone());
    if found.is_empty() {
        ctx.gap(vec![vanishing_end], res.label);
    }
    Ok((Verdict::Proved, found))
}

fn sod(ctx: &mut Ctx, phantom: bool) -> Result<Verdict, ReplayError> {
    let (v, found) = eccezionale_collections(ctx)?;
    let minifold = ctx.require(A_MINIFOLD, "non-fullness");
    let hodge = ctx.require(crate::axioms::A_HODGE, "Hochschild homology counting");
    if v != Verdict::Proved || found.is_empty() || minifold.is_none() || hodge.is_none() {
        let last = ctx.derivation.last_id().unwrap_or(0);
        return Ok(ctx.conclude(vec![last], false, String::new()));
    }
    let axioms: Vec<Axiom> = [minifold, hodge].into_iter().flatten().collect();
    let mut outs = Vec::new();
    let mut ok = true;
    for i in found {
        let done = phantom_and_sod(&ctx.collections[i], &axioms)?;
        let off = ctx.derivation.append(&done.derivation);
        outs.push(off + done.derivation.len() - 1);
        ok &= !done.full && (!phantom || done.phantom_orthogonal);
        ctx.collections[i] = done;
    }
    let text = if phantom {
        "the orthogonal of the collection is a phantom: HH_*(A) = 0".to_string()
    } else {
        "D^b(X) = <E0, E1, E2, A> with A nonzero".to_string()
    };
    ctx.findings.push(text.clone());
    Ok(ctx.conclude(outs, ok, text))
}
