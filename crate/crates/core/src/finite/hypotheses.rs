//! Checkers for the conditions on `(A, B, X)` under which Hopficity of
//! `A ≀_X B` reduces to direct finiteness of endomorphism rings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::group::FiniteGroup;
use crate::abelian::{AbelianSpec, Exponent};

/// A failing pair `(x, y)` with `[B(x) : B(x)∩B(y)]` and `[B(y) : B(y)∩B(x)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWitness {
    pub x: usize,
    pub y: usize,
    pub index_x: usize,
    pub index_y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LundstromResult {
    pub holds: bool,
    pub witness: Option<IndexWitness>,
}

/// Compares the two relative indices for every ordered pair of points.
pub fn lundstrom_check(action: &FiniteAction) -> LundstromResult {
    let stabs: Vec<BTreeSet<usize>> = (0..action.num_points())
        .map(|x| action.stabilizer(x).into_iter().collect())
        .collect();
    for x in 0..stabs.len() {
        for y in x + 1..stabs.len() {
            let common = stabs[x].intersection(&stabs[y]).count();
            let (ix, iy) = (stabs[x].len() / common, stabs[y].len() / common);
            if ix != iy {
                return LundstromResult {
                    holds: false,
                    witness: Some(IndexWitness {
                        x,
                        y,
                        index_x: ix,
                        index_y: iy,
                    }),
                };
            }
        }
    }
    LundstromResult {
        holds: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub element: usize,
    pub class: Vec<usize>,
    pub non_abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub holds: bool,
    pub per_element: Vec<ClassVerdict>,
}

/// For each nontrivial `d` in the kernel, whether its conjugacy class contains
/// two non-commuting elements.
pub fn nonabelian_class_check(action: &FiniteAction) -> ClassCheck {
    let g = action.group();
    let per_element: Vec<ClassVerdict> = action
        .kernel()
        .into_iter()
        .filter(|&d| d != 0)
        .map(|d| {
            let class = g.conjugacy_class(d);
            let non_abelian = class.iter().any(|&a| class.iter().any(|&b| !g.commute(a, b)));
            ClassVerdict {
                element: d,
                class,
                non_abelian,
            }
        })
        .collect();
    ClassCheck {
        holds: per_element.iter().all(|v| v.non_abelian),
        per_element,
    }
}

/// Whether `(b₀ − 1)² ∘ m = 0` for every generator `a·x` of `AX`.
pub fn annihilator_square_test(action: &FiniteAction, coeff: &AbelianSpec, b0: usize) -> bool {
    coeff.invariants().iter().all(|&d| {
        (0..action.num_points()).all(|x| {
            let mut terms = [(x, 1i64), (action.apply(b0, x), -2), (action.apply(b0, action.apply(b0, x)), 1)];
            terms.sort();
            let mut sums: Vec<(usize, i64)> = Vec::new();
            for (p, c) in terms {
                match sums.last_mut() {
                    Some((q, s)) if *q == p => *s += c,
                    _ => sums.push((p, c)),
                }
            }
            sums.iter().all(|&(_, c)| {
                if d == 0 {
                    c == 0
                } else {
                    BigInt::from(c).mod_floor(&BigInt::from(d)) == BigInt::from(0)
                }
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabWitness {
    /// Index of the automorphism in the supplied list.
    pub automorphism: usize,
    pub point: usize,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabCheck {
    pub holds: bool,
    pub witness: Option<StabWitness>,
}

/// Whether every `σ` maps each point stabilizer onto some point stabilizer.
pub fn stab_permutation_check(action: &FiniteAction, auts: &[Vec<usize>]) -> StabCheck {
    let stabs: BTreeSet<Vec<usize>> = (0..action.num_points()).map(|x| action.stabilizer(x)).collect();
    for (i, sigma) in auts.iter().enumerate() {
        for x in 0..action.num_points() {
            let mut image: Vec<usize> = action.stabilizer(x).iter().map(|&h| sigma[h]).collect();
            image.sort_unstable();
            if !stabs.contains(&image) {
                return StabCheck {
                    holds: false,
                    witness: Some(StabWitness {
                        automorphism: i,
                        point: x,
                        image,
                    }),
                };
            }
        }
    }
    StabCheck {
        holds: true,
        witness: None,
    }
}

/// If `A` has exponent 2, the kernel may not contain an involution.
pub fn exponent_two_check(action: &FiniteAction, coeff: &AbelianSpec) -> bool {
    if coeff.exponent() != Exponent::Finite(2) {
        return true;
    }
    let g: &FiniteGroup = action.group();
    action.kernel().iter().all(|&d| g.elem_order(d) != 2)
}
