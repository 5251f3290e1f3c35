//! Arithmetic of curves on a fake projective plane.

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{Axiom, AxiomStatement};

/// Curves of geometric genus 0 or 1 do not exist on a ball quotient.
pub const HYPERBOLIC_GENUS_CITATION: &str = "ball quotients contain no rational or elliptic curves (Kobayashi hyperbolicity)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("curve classes kL1 need k >= 1, got {0}")]
    NotEffective(i64),
    #[error("the Toledo bound is stated for normalizations of genus >= 2, got {0}")]
    NotHyperbolic(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub k: i64,
    pub p_a: i64,
}

impl CurveClass {
    pub fn new(k: i64) -> Result<Self, CurveError> {
        Ok(Self { k, p_a: arithmetic_genus(k)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HurwitzSolution {
    pub quotient_genus: u64,
    pub fixed_points: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Toledo {
    Strict,
    EqualityGeodesic,
    Violation,
}

/// Adjunction with `K ≡ 3L1`: `2p_a - 2 = C·(C + K) = k^2 + 3k`.
pub fn arithmetic_genus(k: i64) -> Result<i64, CurveError> {
    if k < 1 {
        return Err(CurveError::NotEffective(k));
    }
    Ok((k * k + 3 * k + 2) / 2)
}

/// Euler characteristic of a degree-`d` line bundle on a genus-`g` curve.
pub fn curve_chi(d: i64, g: i64) -> i64 {
    d + 1 - g
}

/// Degree of `K_C - D`.
pub fn curve_serre_dual(d: i64, g: i64) -> i64 {
    2 * g - 2 - d
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// All `(g', r)` with `2g - 2 = p(2g' - 2) + (p - 1)r`.
pub fn hurwitz_solutions(p: u64, g: u64) -> Result<Vec<HurwitzSolution>, CurveError> {
    if !is_prime(p) {
        return Err(CurveError::NotPrime(p));
    }
    let (p, g) = (p as i64, g as i64);
    let lhs = 2 * g - 2;
    let max_gq = (lhs + 2 * p) / (2 * p);
    let mut out = Vec::new();
    for gq in 0..=max_gq.max(0) {
        let rest = lhs - p * (2 * gq - 2);
        if rest >= 0 && rest % (p - 1) == 0 {
            out.push(HurwitzSolution { quotient_genus: gq as u64, fixed_points: (rest / (p - 1)) as u64 });
        }
    }
    Ok(out)
}

/// Genera `2 <= g < g_upper` carrying an order-`p` automorphism, narrowed by `kra` when it speaks about `(p, g_upper)`.
pub fn admissible_normalization_genera(p: u64, g_upper: u64, kra: Option<&Axiom>) -> Result<Vec<u64>, CurveError> {
    let mut out = Vec::new();
    for g in 2..g_upper {
        if !hurwitz_solutions(p, g)?.is_empty() {
            out.push(g);
        }
    }
    if let Some(AxiomStatement::NormalizationGenera { order, below, genera }) = kra.map(|a| &a.statement) {
        if *order == p && *below == g_upper {
            out.retain(|g| genera.contains(g));
        }
    }
    Ok(out)
}

/// `K·C <= 3(g - 1)` for the normalization, with equality exactly for totally geodesic curves.
pub fn toledo_check(k_dot_c: i64, g_norm: i64) -> Result<Toledo, CurveError> {
    if g_norm < 2 {
        return Err(CurveError::NotHyperbolic(g_norm));
    }
    let bound = 3 * (g_norm - 1);
    Ok(match k_dot_c.cmp(&bound) {
        std::cmp::Ordering::Less => Toledo::Strict,
        std::cmp::Ordering::Equal => Toledo::EqualityGeodesic,
        std::cmp::Ordering::Greater => Toledo::Violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::standard_axioms;
    use crate::picard::FakePlane;
    use proptest::prelude::*;

    fn brute_hurwitz(p: i64, g: i64) -> Vec<(u64, u64)> {
        let mut v = Vec::new();
        for gq in 0..=g {
            for r in 0..=(2 * g + 2) {
                if 2 * g - 2 == p * (2 * gq - 2) + (p - 1) * r {
                    v.push((gq as u64, r as u64));
                }
            }
        }
        v
    }

    #[test]
    fn genus_values() {
        assert_eq!(arithmetic_genus(2), Ok(6));
        assert_eq!(arithmetic_genus(1), Ok(3));
        assert_eq!(arithmetic_genus(3), Ok(10));
        assert_eq!(arithmetic_genus(0), Err(CurveError::NotEffective(0)));
        assert_eq!(CurveClass::new(2).unwrap().p_a, 6);
    }

    #[test]
    fn riemann_roch_and_duality() {
        assert_eq!(curve_chi(2, 3), 0);
        assert_eq!(curve_chi(0, 0), 1);
        assert_eq!(curve_chi(8, 5), 4);
        assert_eq!(curve_serre_dual(2, 3), 2);
        assert_eq!(curve_serre_dual(0, 4), 6);
        assert_eq!(curve_serre_dual(6, 4), 0);
    }

    #[test]
    fn hurwitz_examples() {
        let sol = |g| hurwitz_solutions(7, g).unwrap();
        assert_eq!(sol(6), vec![HurwitzSolution { quotient_genus: 0, fixed_points: 4 }]);
        assert_eq!(sol(3), vec![HurwitzSolution { quotient_genus: 0, fixed_points: 3 }]);
        assert!(sol(2).is_empty());
        assert_eq!(sol(4), vec![HurwitzSolution { quotient_genus: 1, fixed_points: 1 }]);
        assert_eq!(hurwitz_solutions(6, 3), Err(CurveError::NotPrime(6)));
    }

    #[test]
    fn hurwitz_matches_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for g in 0..40u64 {
                let got: Vec<_> =
                    hurwitz_solutions(p, g).unwrap().iter().map(|s| (s.quotient_genus, s.fixed_points)).collect();
                assert_eq!(got, brute_hurwitz(p as i64, g as i64), "p={p} g={g}");
            }
        }
    }

    #[test]
    fn normalization_genera() {
        let plane = FakePlane::keum(4).unwrap();
        let kra = standard_axioms(&plane).into_iter().find(|a| a.id == crate::axioms::A_KRA).unwrap();
        assert_eq!(admissible_normalization_genera(7, 6, None).unwrap(), vec![3, 4]);
        assert_eq!(admissible_normalization_genera(7, 6, Some(&kra)).unwrap(), vec![3]);
        assert!(admissible_normalization_genera(7, 3, None).unwrap().is_empty());
        // an axiom about a different bound does not apply
        assert_eq!(admissible_normalization_genera(7, 5, Some(&kra)).unwrap(), vec![3, 4]);
    }

    #[test]
    fn toledo() {
        assert_eq!(toledo_check(6, 3), Ok(Toledo::EqualityGeodesic));
        assert_eq!(toledo_check(3, 3), Ok(Toledo::Strict));
        assert_eq!(toledo_check(7, 3), Ok(Toledo::Violation));
        assert_eq!(toledo_check(0, 1), Err(CurveError::NotHyperbolic(1)));
    }

    proptest! {
        #[test]
        fn chi_duality_identity(d in -200i64..200, g in 0i64..100) {
            prop_assert_eq!(curve_chi(d, g) - curve_chi(curve_serre_dual(d, g), g), 2 * (d - (g - 1)));
        }

        #[test]
        fn genus_is_adjunction(k in 1i64..1000) {
            let pa = arithmetic_genus(k).unwrap();
            prop_assert_eq!(2 * pa - 2, k * k + 3 * k);
            prop_assert!(arithmetic_genus(k + 1).unwrap() > pa);
        }

        #[test]
        fn solutions_satisfy_equation(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), g in 0u64..200) {
            for s in hurwitz_solutions(p, g).unwrap() {
                let (p, g) = (p as i64, g as i64);
                prop_assert_eq!(2 * g - 2, p * (2 * s.quotient_genus as i64 - 2) + (p - 1) * s.fixed_points as i64);
            }
        }
    }
}
