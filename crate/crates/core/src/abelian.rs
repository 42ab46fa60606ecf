//! Finitely generated abelian coefficient groups `A = ℤ^{n₀} ⊕ ⨁ ℤ/dᵢ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A list of cyclic invariants: `0` is a copy of ℤ, `d ≥ 2` is ℤ/d.
///
/// The list need not be in divisibility order. Entries equal to 1 denote the
/// trivial group and are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianSpec {
    invariants: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    coords: Vec<BigInt>,
}

impl AbelianElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AbelianSpec {
    pub fn new(invariants: impl IntoIterator<Item = u64>) -> Self {
        AbelianSpec {
            invariants: invariants.into_iter().filter(|&d| d != 1).collect(),
        }
    }

    pub fn trivial() -> Self {
        AbelianSpec { invariants: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        AbelianSpec::new([d])
    }

    /// Parses `0,4,3` (ℤ ⊕ ℤ/4 ⊕ ℤ/3). An empty string is the trivial group.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::trivial());
        }
        let invariants = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(1, format!("bad coefficient invariant {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(invariants))
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        !self.invariants.contains(&0)
    }

    /// `n₀`, the rank of `A / tor(A)`.
    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|&&d| d == 0).count()
    }

    /// `n_p = dim_{𝔽_p} A_p / p A_p`; `p = 0` gives the rank.
    pub fn n_p(&self, p: u64) -> usize {
        if p == 0 {
            return self.rank();
        }
        self.invariants
            .iter()
            .filter(|&&d| d != 0 && d % p == 0)
            .count()
    }

    /// Primes `p` with `A_p ≠ 0`, ascending.
    pub fn torsion_primes(&self) -> Vec<u64> {
        self.primary_decompose()
            .into_keys()
            .filter(|&p| p != 0)
            .collect()
    }

    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        self.invariants
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn exponent(&self) -> Exponent {
        if !self.is_finite() {
            return Exponent::Infinite;
        }
        Exponent::Finite(self.invariants.iter().fold(1u64, |acc, &d| acc.lcm(&d)))
    }

    /// Splits `A` into `⨁_{p ≥ 0} A_p`, with `p = 0` labelling the free part.
    pub fn primary_decompose(&self) -> BTreeMap<u64, AbelianSpec> {
        let mut parts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in &self.invariants {
            if d == 0 {
                parts.entry(0).or_default().push(0);
                continue;
            }
            for (p, e) in factorize(d) {
                parts.entry(p).or_default().push(p.pow(e));
            }
        }
        parts
            .into_iter()
            .map(|(p, inv)| (p, AbelianSpec { invariants: inv }))
            .collect()
    }

    /// Elementary divisors per prime (sorted) together with the rank; two
    /// specs describe isomorphic groups iff these agree.
    pub fn isomorphism_type(&self) -> (usize, BTreeMap<u64, Vec<u64>>) {
        let mut divisors: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (p, part) in self.primary_decompose() {
            if p != 0 {
                let mut inv = part.invariants;
                inv.sort_unstable();
                divisors.insert(p, inv);
            }
        }
        (self.rank(), divisors)
    }

    /// Reassembles primary parts into invariant-factor form `d₁ | d₂ | … ` by CRT.
    pub fn recombine(parts: &BTreeMap<u64, AbelianSpec>) -> AbelianSpec {
        let mut rank = 0;
        let mut columns: Vec<Vec<u64>> = Vec::new();
        for (&p, part) in parts {
            if p == 0 {
                rank += part.invariants.len();
                continue;
            }
            let mut powers = part.invariants.clone();
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.into_iter().enumerate() {
                if columns.len() <= i {
                    columns.push(Vec::new());
                }
                columns[i].push(q);
            }
        }
        let mut factors: Vec<u64> = columns.iter().map(|c| c.iter().product()).collect();
        factors.reverse();
        factors.extend(std::iter::repeat(0).take(rank));
        AbelianSpec::new(factors)
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement {
            coords: vec![BigInt::zero(); self.invariants.len()],
        }
    }

    /// Builds an element, reducing each torsion coordinate.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<AbelianElement> {
        if coords.len() != self.invariants.len() {
            return Err(Error::SpecMismatch(format!(
                "{} coordinates for a group with {} summands",
                coords.len(),
                self.invariants.len()
            )));
        }
        Ok(AbelianElement {
            coords: coords
                .into_iter()
                .zip(&self.invariants)
                .map(|(c, &d)| reduce(c, d))
                .collect(),
        })
    }

    pub fn element_from_i64(&self, coords: &[i64]) -> Result<AbelianElement> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The standard generator of the `i`-th cyclic summand.
    pub fn basis(&self, i: usize) -> AbelianElement {
        let mut e = self.zero();
        e.coords[i] = BigInt::from(1);
        e
    }

    pub fn generators(&self) -> Vec<AbelianElement> {
        (0..self.invariants.len()).map(|i| self.basis(i)).collect()
    }

    fn check(&self, x: &AbelianElement) -> Result<()> {
        if x.coords.len() != self.invariants.len() {
            return Err(Error::SpecMismatch(format!(
                "element has {} coordinates, group has {} summands",
                x.coords.len(),
                self.invariants.len()
            )));
        }
        for (c, &d) in x.coords.iter().zip(&self.invariants) {
            if d != 0 && (c.sign() == num_bigint::Sign::Minus || *c >= BigInt::from(d)) {
                return Err(Error::SpecMismatch(format!("coordinate {c} not reduced mod {d}")));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &AbelianElement) -> bool {
        self.check(x).is_ok()
    }

    pub fn add(&self, x: &AbelianElement, y: &AbelianElement) -> Result<AbelianElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        AbelianElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .zip(&self.invariants)
                .map(|((a, b), &d)| reduce(a + b, d))
                .collect(),
        }
    }

    pub fn neg(&self, x: &AbelianElement) -> AbelianElement {
        self.scale(x, &BigInt::from(-1))
    }

    pub fn scale(&self, x: &AbelianElement, factor: &BigInt) -> AbelianElement {
        AbelianElement {
            coords: x
                .coords
                .iter()
                .zip(&self.invariants)
                .map(|(a, &d)| reduce(a * factor, d))
                .collect(),
        }
    }

    /// All elements, in lexicographic coordinate order. `None` if `A` is infinite.
    pub fn elements(&self) -> Option<Vec<AbelianElement>> {
        let order = self.order()?.to_usize()?;
        let mut out = Vec::with_capacity(order);
        for mut index in 0..order {
            let mut coords = vec![BigInt::zero(); self.invariants.len()];
            for (slot, &d) in coords.iter_mut().zip(&self.invariants).rev() {
                *slot = BigInt::from(index as u64 % d);
                index /= d as usize;
            }
            out.push(AbelianElement { coords });
        }
        Some(out)
    }
}

impl fmt::Display for AbelianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariants
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn reduce(value: BigInt, d: u64) -> BigInt {
    if d == 0 {
        value
    } else {
        value.mod_floor(&BigInt::from(d))
    }
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}
