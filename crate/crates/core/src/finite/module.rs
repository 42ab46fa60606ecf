//! Dense encoding of `M = AX` for finite `A = ⊕_j ℤ/d_j` and finite `X`.
//!
//! An element is a vector of residues indexed by `x * r + j`, and the whole
//! module is numbered in mixed radix so that `0` is the zero vector.

use crate::abelian::AbelianSpec;
use crate::error::{Error, Result};

use super::action::FiniteAction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    points: usize,
    moduli: Vec<u64>,
}

pub type ModElem = Vec<u64>;

impl FiniteModule {
    pub fn new(points: usize, coeff: &AbelianSpec) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::InfiniteCoefficients);
        }
        Ok(FiniteModule {
            points,
            moduli: coeff.invariants().to_vec(),
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn len(&self) -> usize {
        self.points * self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn modulus(&self, i: usize) -> u64 {
        self.moduli[i % self.moduli.len()]
    }

    /// `|A|^{|X|}`, if it fits.
    pub fn size(&self) -> Option<u128> {
        (0..self.len()).try_fold(1u128, |acc, i| acc.checked_mul(self.modulus(i) as u128))
    }

    pub fn zero(&self) -> ModElem {
        vec![0; self.len()]
    }

    /// The generator `e_j · x`.
    pub fn basis(&self, x: usize, j: usize) -> ModElem {
        let mut m = self.zero();
        m[x * self.rank() + j] = 1 % self.moduli[j];
        m
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> ModElem {
        (0..self.len()).map(|i| (a[i] + b[i]) % self.modulus(i)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> ModElem {
        (0..self.len()).map(|i| (self.modulus(i) - a[i]) % self.modulus(i)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> ModElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u64, a: &[u64]) -> ModElem {
        (0..self.len()).map(|i| (c % self.modulus(i)) * a[i] % self.modulus(i)).collect()
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&v| v == 0)
    }

    /// Moves the value at `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize], m: &[u64]) -> ModElem {
        let r = self.rank();
        let mut out = self.zero();
        for x in 0..self.points {
            out[perm[x] * r..perm[x] * r + r].copy_from_slice(&m[x * r..x * r + r]);
        }
        out
    }

    /// `b ∘ m`.
    pub fn act(&self, action: &FiniteAction, b: usize, m: &[u64]) -> ModElem {
        self.relabel(action.perm(b), m)
    }

    pub fn encode(&self, m: &[u64]) -> usize {
        let mut code = 0usize;
        for i in (0..self.len()).rev() {
            code = code * self.modulus(i) as usize + m[i] as usize;
        }
        code
    }

    pub fn decode(&self, mut code: usize) -> ModElem {
        (0..self.len())
            .map(|i| {
                let d = self.modulus(i) as usize;
                let v = code % d;
                code /= d;
                v as u64
            })
            .collect()
    }

    /// Every element, in code order.
    pub fn elements(&self, limit: usize) -> Result<Vec<ModElem>> {
        let size = self.size().unwrap_or(u128::MAX);
        if size > limit as u128 {
            return Err(Error::BoundExceeded {
                order: size,
                bound: limit as u128,
            });
        }
        Ok((0..size as usize).map(|c| self.decode(c)).collect())
    }
}
