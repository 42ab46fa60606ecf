//! Derivations `B → AX`, principal derivations and `H¹(B, AX)`.
//!
//! The cocycle law over the full multiplication table is an integer linear
//! system in the unknowns `γ(b)(x)`; one diagonalization of it counts its
//! solutions modulo every invariant factor of `A`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::group::FiniteGroup;
use crate::abelian::AbelianSpec;
use crate::error::{Error, Result};
use crate::linalg::{diagonalize, IntegerDiagonal};

/// A derivation with values in `(ℤ/d)X`: `values[b][x] = γ(b)(x)`.
pub type CyclicDerivation = Vec<Vec<u64>>;

/// Rows `γ(b₁b₂)(y) − γ(b₁)(y) − γ(b₂)(b₁⁻¹ y)` over all `b₁, b₂, y`.
pub fn cocycle_system(action: &FiniteAction) -> Vec<Vec<BigInt>> {
    let g = action.group();
    let n = action.num_points();
    let cols = g.order() * n;
    let mut rows = BTreeSet::new();
    for b1 in 0..g.order() {
        let b1_inv = g.inv(b1);
        for b2 in 0..g.order() {
            let b12 = g.mul(b1, b2);
            for y in 0..n {
                let mut row = vec![0i64; cols];
                row[b12 * n + y] += 1;
                row[b1 * n + y] -= 1;
                row[b2 * n + action.apply(b1_inv, y)] -= 1;
                if row.iter().any(|&c| c != 0) {
                    rows.insert(row);
                }
            }
        }
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Rows `m(x) − m(b⁻¹ x)`: the invariants `M^B`, kernel of `m ↦ γ_m`.
pub fn invariance_system(action: &FiniteAction) -> Vec<Vec<BigInt>> {
    let n = action.num_points();
    let mut rows = BTreeSet::new();
    for b in 0..action.group().order() {
        for x in 0..n {
            let y = action.apply(action.group().inv(b), x);
            if y != x {
                let mut row = vec![0i64; n];
                row[x] += 1;
                row[y] -= 1;
                rows.insert(row);
            }
        }
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicH1 {
    /// `d`, with `0` meaning `ℤ`.
    pub modulus: u64,
    pub der: Option<u128>,
    pub pder: Option<u128>,
    pub h1: Option<u128>,
    /// For `d = 0`: ranks of `Der`, `PDer` and `H¹` over ℚ.
    pub der_rank: Option<usize>,
    pub pder_rank: Option<usize>,
    pub h1_rank: Option<usize>,
    /// `|PDer|` from the invariance system agrees with `d^{|X| − #orbits}`.
    pub pder_cross_check: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub components: Vec<CyclicH1>,
    /// Orders over the torsion part of `A`.
    pub der_size: u128,
    pub pder_size: u128,
    pub h1_size: u128,
    /// Rank over ℚ of `H¹` with coefficients in the free part.
    pub h1_free_rank: usize,
}

pub struct CocycleSolver {
    der: IntegerDiagonal,
    fixed: IntegerDiagonal,
    points: usize,
    orbits: usize,
    group_order: usize,
}

impl CocycleSolver {
    pub fn new(action: &FiniteAction) -> Self {
        let n = action.num_points();
        CocycleSolver {
            der: diagonalize(&cocycle_system(action), action.group().order() * n),
            fixed: diagonalize(&invariance_system(action), n),
            points: n,
            orbits: action.orbits_stabs().orbits.len(),
            group_order: action.group().order(),
        }
    }

    pub fn component(&self, d: u64) -> Result<CyclicH1> {
        if d == 0 {
            let der_rank = self.der.cols() - self.der.rank();
            let pder_rank = self.fixed.rank();
            return Ok(CyclicH1 {
                modulus: 0,
                der: None,
                pder: None,
                h1: None,
                der_rank: Some(der_rank),
                pder_rank: Some(pder_rank),
                h1_rank: Some(der_rank - pder_rank),
                pder_cross_check: pder_rank == self.points - self.orbits,
            });
        }
        let overflow = || Error::BoundExceeded {
            order: u128::MAX,
            bound: u128::MAX,
        };
        let der = self.der.count_mod(d).ok_or_else(overflow)?;
        let total = (d as u128).checked_pow(self.points as u32).ok_or_else(overflow)?;
        let pder = total / self.fixed.count_mod(d).ok_or_else(overflow)?;
        let expected = (d as u128).pow((self.points - self.orbits) as u32);
        Ok(CyclicH1 {
            modulus: d,
            der: Some(der),
            pder: Some(pder),
            h1: Some(der / pder),
            der_rank: None,
            pder_rank: None,
            h1_rank: None,
            pder_cross_check: pder == expected,
        })
    }

    /// All derivations into `(ℤ/d)X`, as tables `γ(b)(x)`.
    pub fn enumerate(&self, d: u64, limit: usize) -> Result<Vec<CyclicDerivation>> {
        if d == 0 {
            return Err(Error::InfiniteCoefficients);
        }
        Ok(self
            .der
            .enumerate_mod(d, limit)?
            .into_iter()
            .map(|flat| flat.chunks(self.points).map(<[u64]>::to_vec).collect())
            .collect())
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }
}

/// `|Der|`, `|PDer|` and `|H¹|` per cyclic factor of `A` and in total.
pub fn derivations_h1(action: &FiniteAction, coeff: &AbelianSpec) -> Result<H1Report> {
    let solver = CocycleSolver::new(action);
    let components = coeff
        .invariants()
        .iter()
        .map(|&d| solver.component(d))
        .collect::<Result<Vec<_>>>()?;
    let mut report = H1Report {
        components: Vec::new(),
        der_size: 1,
        pder_size: 1,
        h1_size: 1,
        h1_free_rank: 0,
    };
    for c in &components {
        if let (Some(der), Some(pder), Some(h1)) = (c.der, c.pder, c.h1) {
            report.der_size = report.der_size.checked_mul(der).ok_or(Error::BoundExceeded {
                order: u128::MAX,
                bound: u128::MAX,
            })?;
            report.pder_size *= pder;
            report.h1_size *= h1;
        }
        report.h1_free_rank += c.h1_rank.unwrap_or(0);
    }
    report.components = components;
    Ok(report)
}

/// Exhaustive check of the cocycle law for a tabulated derivation.
pub fn is_derivation(action: &FiniteAction, d: u64, gamma: &CyclicDerivation) -> bool {
    let g = action.group();
    (0..g.order()).all(|b1| {
        (0..g.order()).all(|b2| {
            (0..action.num_points()).all(|y| {
                let moved = gamma[b2][action.apply(g.inv(b1), y)];
                gamma[g.mul(b1, b2)][y] == (gamma[b1][y] + moved) % d
            })
        })
    })
}

/// `γ_m(b) = m − b ∘ m` for `m ∈ (ℤ/d)X`.
pub fn principal_derivation(action: &FiniteAction, d: u64, m: &[u64]) -> CyclicDerivation {
    (0..action.group().order())
        .map(|b| {
            let binv = action.group().inv(b);
            (0..action.num_points())
                .map(|x| (m[x] + d - m[action.apply(binv, x)]) % d)
                .collect()
        })
        .collect()
}

/// `|Hom(H, 𝔽_p)|` by testing every map `H → 𝔽_p` for additivity.
pub fn shapiro_oracle(group: &FiniteGroup, subgroup: &[usize], p: u64) -> u128 {
    let k = subgroup.len();
    let index_of = |g: usize| subgroup.iter().position(|&h| h == g).expect("closed");
    let mut count = 0;
    let total = (p as u128).pow(k as u32);
    let mut values = vec![0u64; k];
    for code in 0..total {
        let mut c = code;
        for v in values.iter_mut() {
            *v = (c % p as u128) as u64;
            c /= p as u128;
        }
        let additive = subgroup.iter().enumerate().all(|(i, &a)| {
            subgroup
                .iter()
                .enumerate()
                .all(|(j, &b)| values[index_of(group.mul(a, b))] == (values[i] + values[j]) % p)
        });
        if additive {
            count += 1;
        }
    }
    count
}
