use fpp_core::axioms::{a1, Axiom};
use fpp_core::cohomology::{chi, infer, DimInterval};
use fpp_core::picard::{AutLabel, FakePlane, LineBundleClass, TorsionGroup};
use proptest::prelude::*;

fn rank_one() -> FakePlane {
    let g = TorsionGroup::trivial();
    let zero = g.zero();
    FakePlane::new("rank-one", g, AutLabel::Trivial, zero).unwrap()
}

/// Hand table from chi, negativity, duality and vanishing alone.
fn hand(k: i64) -> [DimInterval; 3] {
    let e = |n: i64| DimInterval::exact(n as u64);
    match k {
        k if k < 0 => [e(0), e(0), e(chi_of(k))],
        0 => [e(1), e(0), e(0)],
        3 => [e(0), e(0), e(1)],
        k if k >= 4 => [e(chi_of(k)), e(0), e(0)],
        _ => [DimInterval::UNKNOWN; 3],
    }
}

fn chi_of(k: i64) -> i64 {
    1 + k * (k - 3) / 2
}

#[test]
fn rank_one_matches_hand_table() {
    let p = rank_one();
    let targets: Vec<LineBundleClass> = (-6..=6).map(|k| p.untwisted(k)).collect();
    let inf = infer(&p, &[], &targets).unwrap();
    for c in &targets {
        assert_eq!(chi(c), chi_of(c.degree));
        let want = hand(c.degree);
        if want[0] != DimInterval::UNKNOWN {
            for i in 0..3u8 {
                assert_eq!(inf.h(c, i), want[i as usize], "h{i}{c}");
            }
        }
    }
    for k in [1, 2] {
        let c = p.untwisted(k);
        assert_eq!(inf.h(&c, 0).lo, 0);
        assert!(!inf.h(&c, 0).is_exact(), "h0(L{k}) should stay open without axioms");
        assert_eq!(inf.h(&c, 0), inf.h(&p.untwisted(3 - k), 2));
    }
}

fn saturated(p: &FakePlane) -> fpp_core::cohomology::Inference {
    let targets: Vec<LineBundleClass> = (-6..=9).flat_map(|k| p.classes_of_degree(k)).collect();
    infer(p, &[a1(p)], &targets).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fewer_facts_never_narrow(mask in proptest::collection::vec(any::<bool>(), 256)) {
        let p = FakePlane::keum(3).unwrap();
        let full = saturated(&p);
        let facts = full.table.to_facts();
        let kept: Vec<_> = facts.iter().zip(mask.iter().cycle()).filter(|(_, &m)| m).map(|(f, _)| f.clone()).collect();
        let part = infer(&p, &[Axiom::from_facts("subset", "test", kept)], &[]).unwrap();
        for (c, _) in full.table.iter() {
            for i in 0..3u8 {
                prop_assert!(full.h(c, i).within(&part.h(c, i)), "h{i}{c}: {} vs {}", full.h(c, i), part.h(c, i));
            }
        }
    }

    #[test]
    fn reinference_is_idempotent(rank in prop::sample::select(vec![3usize, 4])) {
        let p = FakePlane::keum(rank).unwrap();
        let first = saturated(&p);
        let again = infer(&p, &[Axiom::from_facts("table", "test", first.table.to_facts())], &[]).unwrap();
        for (c, _) in first.table.iter() {
            for i in 0..3u8 {
                prop_assert_eq!(first.h(c, i), again.h(c, i));
            }
        }
    }

    #[test]
    fn serre_and_chi(k in -6i64..=9, t in 0usize..8) {
        let p = FakePlane::keum(3).unwrap();
        let inf = saturated(&p);
        let c = p.classes_of_degree(k)[t].clone();
        let d = p.serre_dual(&c).unwrap();
        prop_assert_eq!(chi(&c), chi(&d));
        for i in 0..3u8 {
            prop_assert_eq!(inf.h(&c, i), inf.h(&d, 2 - i));
        }
        let e = inf.table.get(&c).unwrap();
        prop_assert!(e.chi_consistent());
        if let Some([h0, h1, h2]) = e.exact() {
            prop_assert_eq!(h0 as i64 - h1 as i64 + h2 as i64, chi(&c));
        }
    }
}
