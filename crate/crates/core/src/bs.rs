//! The metabelian Baumslag–Solitar group BS(1, k) = ⟨h, t | t⁻¹ h t = h^k⟩.
//!
//! Elements are stored in the normal form `(a, n)` of ℤ[1/k] ⋊ ℤ with
//! `(a, n)·(b, m) = (a + k⁻ⁿ b, n + m)`, so `t = (0, 1)`, `h = (1, 0)` and the
//! fractional powers `h^q` are `(q, 0)`. The coset space `X = B/⟨h⟩` is
//! represented by [`CosetPoint`]: the coset of `(a, n)` is
//! `{(a + k⁻ⁿ z, n) : z ∈ ℤ}`, identified by the level `n` and the fractional
//! part of `kⁿ a`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::LocalizedInt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BsElement {
    a: LocalizedInt,
    n: i64,
}

impl BsElement {
    pub fn new(a: LocalizedInt, n: i64) -> Self {
        BsElement { a, n }
    }

    pub fn identity(k: u64) -> Result<Self> {
        Ok(BsElement::new(LocalizedInt::zero(k)?, 0))
    }

    pub fn t(k: u64) -> Result<Self> {
        Ok(BsElement::new(LocalizedInt::zero(k)?, 1))
    }

    pub fn h(k: u64) -> Result<Self> {
        Ok(BsElement::new(LocalizedInt::integer(1, k)?, 0))
    }

    /// `h^q` for `q ∈ ℤ[1/k]`.
    pub fn h_pow(q: LocalizedInt) -> Self {
        BsElement::new(q, 0)
    }

    pub fn a(&self) -> &LocalizedInt {
        &self.a
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.a.base()
    }

    pub fn is_identity(&self) -> bool {
        self.n == 0 && self.a.is_zero()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.base() != other.base() {
            return Err(Error::BaseMismatch {
                left: self.base(),
                right: other.base(),
            });
        }
        Ok(self.mul_same_base(other))
    }

    pub(crate) fn mul_same_base(&self, other: &Self) -> Self {
        BsElement {
            a: self.a.add_same_base(&other.a.mul_base_pow(-self.n)),
            n: self.n + other.n,
        }
    }

    /// `(a, n)⁻¹ = (−kⁿ a, −n)`.
    pub fn inverse(&self) -> Self {
        BsElement {
            a: self.a.mul_base_pow(self.n).neg(),
            n: -self.n,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = BsElement {
            a: LocalizedInt::zero(self.base()).expect("base already validated"),
            n: 0,
        };
        for _ in 0..e.unsigned_abs() {
            out = out.mul_same_base(&base);
        }
        out
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, h: &Self) -> Result<Self> {
        Ok(self.checked_mul(h)?.mul_same_base(&self.inverse()))
    }
}

impl fmt::Display for BsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.n)
    }
}

pub fn bs_mul(g: &BsElement, h: &BsElement) -> Result<BsElement> {
    g.checked_mul(h)
}

/// A left coset `b⟨h⟩`, stored as `(level, residue)` with `residue ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetPoint {
    level: i64,
    residue: LocalizedInt,
}

impl CosetPoint {
    /// The coset of the identity.
    pub fn base_point(k: u64) -> Result<Self> {
        Ok(CosetPoint {
            level: 0,
            residue: LocalizedInt::zero(k)?,
        })
    }

    pub fn new(level: i64, residue: LocalizedInt) -> Result<Self> {
        if residue.floor() != BigInt::zero() {
            return Err(Error::InvalidParameter(format!(
                "coset residue {residue} is not in [0, 1)"
            )));
        }
        Ok(CosetPoint { level, residue })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn residue(&self) -> &LocalizedInt {
        &self.residue
    }

    pub fn base(&self) -> u64 {
        self.residue.base()
    }

    pub fn is_base_point(&self) -> bool {
        self.level == 0 && self.residue.is_zero()
    }

    /// The element `(k⁻ⁿ ρ, n)`, which lies in this coset.
    pub fn representative(&self) -> BsElement {
        BsElement::new(self.residue.mul_base_pow(-self.level), self.level)
    }

    pub(crate) fn act_same_base(&self, g: &BsElement) -> CosetPoint {
        let level = g.n + self.level;
        let residue = g.a.mul_base_pow(level).add_same_base(&self.residue).fract();
        CosetPoint { level, residue }
    }
}

impl fmt::Display for CosetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.level, self.residue)
    }
}

pub fn coset_canonical(g: &BsElement) -> CosetPoint {
    CosetPoint {
        level: g.n,
        residue: g.a.mul_base_pow(g.n).fract(),
    }
}

pub fn coset_act(g: &BsElement, x: &CosetPoint) -> Result<CosetPoint> {
    if g.base() != x.base() {
        return Err(Error::BaseMismatch {
            left: g.base(),
            right: x.base(),
        });
    }
    Ok(x.act_same_base(g))
}

/// Membership in `H = ⟨h⟩`.
pub fn in_h(g: &BsElement) -> bool {
    g.n == 0 && g.a.is_integer()
}

/// Folds a whitespace-separated word over `h^{±1}`, `t^{±1}`, `h^{p/q}` into
/// normal form. Integer exponents such as `t^3` or `h^{-2}` are also accepted.
pub fn parse_word(word: &str, k: u64) -> Result<BsElement> {
    let mut acc = BsElement::identity(k)?;
    for token in word.split_whitespace() {
        let (letter, exponent) = match token.split_once('^') {
            Some((l, e)) => (l, Some(e)),
            None => (token, None),
        };
        let exponent = match exponent {
            None => BigRational::from_integer(1.into()),
            Some(e) => parse_exponent(e, token)?,
        };
        let factor = match letter {
            "h" => BsElement::h_pow(LocalizedInt::from_rational(&exponent, k)?),
            "t" => {
                if !exponent.is_integer() {
                    return Err(Error::parse(1, format!("t needs an integer exponent: {token}")));
                }
                let n = i64::try_from(exponent.to_integer())
                    .map_err(|_| Error::parse(1, format!("exponent too large: {token}")))?;
                BsElement::new(LocalizedInt::zero(k)?, n)
            }
            _ => return Err(Error::parse(1, format!("unknown generator in {token:?}"))),
        };
        acc = acc.mul_same_base(&factor);
    }
    Ok(acc)
}

fn parse_exponent(text: &str, token: &str) -> Result<BigRational> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(text);
    let bad = || Error::parse(1, format!("bad exponent in {token:?}"));
    match inner.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(inner.trim().parse().map_err(|_| bad())?)),
    }
}
