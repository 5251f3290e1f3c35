//! Finite-order linear actions on torsion groups.
//!
//! Only the 7-Sylow of `G21` is modeled. The geometric action on `H1` is not
//! known here, so [`make_order7_action`] ships representative actions built
//! from the companion matrix of `x^3 + x + 1` over `F2`. Conclusions on rank 4
//! hold for every order-7 action by counting; on ranks 3 and 6 they are only
//! witnesses.

use serde::Serialize;
use thiserror::Error;

use crate::picard::{FakePlane, LineBundleClass, TorsionElement, TorsionGroup};

pub const DEFAULT_ORBIT_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("matrix must be {0}x{0}")]
    Shape(usize),
    #[error("matrix does not define a homomorphism of the group")]
    NotHomomorphism,
    #[error("matrix is not invertible on the group")]
    NotBijective,
    #[error("group of size {size} exceeds the enumeration bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("no representative order-7 action for rank {0} (supported: 3, 4, 6)")]
    UnsupportedRank(usize),
    #[error("action is on {action} but the plane has torsion {plane}")]
    GroupMismatch { action: String, plane: String },
    #[error("equivariant classes are only defined for G21 planes, `{0}` is not one")]
    NotKeum(String),
}

/// An automorphism of a torsion group given by an integer matrix acting on coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearAction {
    group: TorsionGroup,
    matrix: Vec<Vec<u32>>,
    order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Vec<TorsionElement>>,
}

impl OrbitDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

fn apply_matrix(group: &TorsionGroup, m: &[Vec<u32>], t: &TorsionElement) -> TorsionElement {
    let coords: Vec<i64> = m
        .iter()
        .zip(group.orders())
        .map(|(row, &n)| {
            let s: u64 = row.iter().zip(t.coords()).map(|(&a, &x)| u64::from(a) * u64::from(x)).sum();
            (s % u64::from(n)) as i64
        })
        .collect();
    group.element(&coords).expect("dimension checked")
}

fn mat_mul(group: &TorsionGroup, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let r = a.len();
    (0..r)
        .map(|i| {
            let n = u64::from(group.orders()[i]);
            (0..r)
                .map(|j| ((0..r).map(|k| u64::from(a[i][k]) * u64::from(b[k][j])).sum::<u64>() % n) as u32)
                .collect()
        })
        .collect()
}

fn identity_matrix(r: usize) -> Vec<Vec<u32>> {
    (0..r).map(|i| (0..r).map(|j| u32::from(i == j)).collect()).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LinearAction {
    pub fn new(group: TorsionGroup, matrix: Vec<Vec<u32>>) -> Result<Self, ActionError> {
        Self::with_bound(group, matrix, DEFAULT_ORBIT_BOUND)
    }

    /// Validates the matrix and computes its order by exhausting the group.
    pub fn with_bound(group: TorsionGroup, matrix: Vec<Vec<u32>>, bound: u64) -> Result<Self, ActionError> {
        let r = group.rank();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(ActionError::Shape(r));
        }
        let orders = group.orders();
        // x_j lives in Z/n_j, so column j must be killed by n_j in every row.
        for (i, row) in matrix.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if (u64::from(orders[j]) * u64::from(a)) % u64::from(orders[i]) != 0 {
                    return Err(ActionError::NotHomomorphism);
                }
            }
        }
        let size = group.size();
        if size > bound {
            return Err(ActionError::TooLarge { size, bound });
        }
        let elements = group.elements();
        let mut seen = std::collections::HashSet::with_capacity(elements.len());
        for t in &elements {
            if !seen.insert(apply_matrix(&group, &matrix, t)) {
                return Err(ActionError::NotBijective);
            }
        }
        let mut action = Self { group, matrix, order: 1 };
        action.order = action.permutation_order(&elements);
        Ok(action)
    }

    pub fn identity(group: TorsionGroup) -> Self {
        let matrix = identity_matrix(group.rank());
        Self { group, matrix, order: 1 }
    }

    fn permutation_order(&self, elements: &[TorsionElement]) -> u64 {
        let mut done = std::collections::HashSet::new();
        let mut order = 1u64;
        for t in elements {
            if done.contains(t) {
                continue;
            }
            let mut len = 0u64;
            let mut cur = t.clone();
            loop {
                done.insert(cur.clone());
                len += 1;
                cur = self.apply(&cur);
                if cur == *t {
                    break;
                }
            }
            order = order / gcd(order, len) * len;
        }
        order
    }

    pub fn group(&self) -> &TorsionGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn apply(&self, t: &TorsionElement) -> TorsionElement {
        apply_matrix(&self.group, &self.matrix, t)
    }

    pub fn matrix_power(&self, n: u64) -> Vec<Vec<u32>> {
        let mut acc = identity_matrix(self.group.rank());
        for _ in 0..n {
            acc = mat_mul(&self.group, &acc, &self.matrix);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        Self { group: self.group.clone(), matrix: self.matrix_power(self.order - 1), order: self.order }
    }

    /// `g ∘ self ∘ g^-1`.
    pub fn conjugate_by(&self, g: &LinearAction) -> Result<Self, ActionError> {
        let m = mat_mul(&self.group, &mat_mul(&self.group, g.matrix(), &self.matrix), g.inverse().matrix());
        Self::new(self.group.clone(), m)
    }

    /// Fixed elements in lexicographic order; the zero element is always first.
    pub fn fixed_points(&self) -> Vec<TorsionElement> {
        self.group.elements().into_iter().filter(|t| self.apply(t) == *t).collect()
    }

    pub fn fixed_nontrivial(&self) -> Vec<TorsionElement> {
        self.fixed_points().into_iter().filter(|t| !t.is_zero()).collect()
    }
}

/// Companion matrix of `x^3 + x + 1`: `e1 -> e2 -> e3 -> e1 + e2`.
fn singer_block() -> [[u32; 3]; 3] {
    [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
}

/// A representative order-7 action on `(Z/2)^rank`: one Singer block for rank 3,
/// a block plus a fixed line for rank 4, two blocks for rank 6.
pub fn make_order7_action(rank: usize) -> Result<LinearAction, ActionError> {
    let blocks: &[usize] = match rank {
        3 => &[0],
        4 => &[0],
        6 => &[0, 3],
        _ => return Err(ActionError::UnsupportedRank(rank)),
    };
    let mut m = identity_matrix(rank);
    for &off in blocks {
        for (i, row) in singer_block().iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                m[off + i][off + j] = a;
            }
        }
    }
    let action = LinearAction::new(TorsionGroup::elementary_two(rank), m)?;
    debug_assert_eq!(action.order(), 7);
    Ok(action)
}

pub fn orbits(action: &LinearAction) -> Result<OrbitDecomposition, ActionError> {
    orbits_with_bound(action, DEFAULT_ORBIT_BOUND)
}

/// Orbits in order of their smallest element; each orbit lists `t, g t, g^2 t, ...`.
pub fn orbits_with_bound(action: &LinearAction, bound: u64) -> Result<OrbitDecomposition, ActionError> {
    let size = action.group.size();
    if size > bound {
        return Err(ActionError::TooLarge { size, bound });
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for t in action.group.elements() {
        if seen.contains(&t) {
            continue;
        }
        let mut orbit = vec![t.clone()];
        seen.insert(t.clone());
        let mut cur = action.apply(&t);
        while cur != t {
            seen.insert(cur.clone());
            orbit.push(cur.clone());
            cur = action.apply(&cur);
        }
        out.push(orbit);
    }
    Ok(OrbitDecomposition { orbits: out })
}

/// Whether every order-7 action on `(Z/2)^rank` must fix a nontrivial element.
///
/// Nontrivial orbits have size 7, so `2^rank - 1 ≢ 0 (mod 7)` forces a fixed point.
pub fn guaranteed_fixed_nontrivial(rank: u32) -> bool {
    ((1u64 << rank) - 1) % 7 != 0
}

/// Classes `(degree, T)` with `T` fixed by `action`; the degree part is invariant by the basis convention.
pub fn equivariant_classes(
    plane: &FakePlane,
    action: &LinearAction,
    degree: i64,
) -> Result<Vec<LineBundleClass>, ActionError> {
    if !plane.is_keum() {
        return Err(ActionError::NotKeum(plane.id().to_string()));
    }
    if action.group() != plane.torsion_group() {
        return Err(ActionError::GroupMismatch {
            action: action.group().to_string(),
            plane: plane.torsion_group().to_string(),
        });
    }
    Ok(action.fixed_points().into_iter().map(|t| LineBundleClass::new(degree, t)).collect())
}
