//! Exact coefficient arithmetic.
//!
//! [`LocalizedInt`] is the ring ℤ[1/k] with a canonical `numerator / k^exponent`
//! representation, [`ModScalar`] is a residue in ℤ/N, and [`Ring`]/[`Scalar`]
//! give a runtime-selected coefficient ring (ℚ or ℤ/N) for linear combinations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// An element `numerator / base^exponent` of ℤ[1/base].
///
/// Always canonical: either `exponent == 0` or `base` does not divide
/// `numerator`. Zero is stored as `0 / base^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizedInt {
    numerator: BigInt,
    exponent: u32,
    base: u64,
}

impl LocalizedInt {
    pub fn new(numerator: impl Into<BigInt>, exponent: u32, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(format!(
                "localization base must be at least 2, got {base}"
            )));
        }
        let mut value = LocalizedInt {
            numerator: numerator.into(),
            exponent,
            base,
        };
        value.canonicalize();
        Ok(value)
    }

    pub fn integer(value: impl Into<BigInt>, base: u64) -> Result<Self> {
        Self::new(value, 0, base)
    }

    pub fn zero(base: u64) -> Result<Self> {
        Self::new(0, 0, base)
    }

    /// Parses a rational `p/q` whose denominator divides some power of `base`.
    pub fn from_rational(value: &BigRational, base: u64) -> Result<Self> {
        let k = BigInt::from(base);
        let denom = value.denom().clone();
        let mut power = BigInt::one();
        let mut exponent = 0u32;
        // q | k^e for some e ≤ log2(q) + 1 whenever q divides any power of k.
        let limit = denom.bits() as u32 + 1;
        while !(&power % &denom).is_zero() {
            if exponent > limit {
                return Err(Error::InvalidParameter(format!(
                    "{value} does not lie in Z[1/{base}]"
                )));
            }
            power *= &k;
            exponent += 1;
        }
        let numerator = value.numer() * (&power / &denom);
        Self::new(numerator, exponent, base)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let k = BigInt::from(self.base);
        while self.exponent > 0 {
            let (q, r) = self.numerator.div_rem(&k);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.exponent -= 1;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch {
                left: self.base,
                right: other.base,
            });
        }
        Ok(())
    }

    fn k_pow(&self, e: u32) -> BigInt {
        BigInt::from(self.base).pow(e)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.add_same_base(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.add_same_base(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let mut out = LocalizedInt {
            numerator: &self.numerator * &other.numerator,
            exponent: self.exponent + other.exponent,
            base: self.base,
        };
        out.canonicalize();
        Ok(out)
    }

    // Callers guarantee equal bases.
    pub(crate) fn add_same_base(&self, other: &Self) -> Self {
        debug_assert_eq!(self.base, other.base);
        let exponent = self.exponent.max(other.exponent);
        let numerator = &self.numerator * self.k_pow(exponent - self.exponent)
            + &other.numerator * self.k_pow(exponent - other.exponent);
        let mut out = LocalizedInt {
            numerator,
            exponent,
            base: self.base,
        };
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> Self {
        LocalizedInt {
            numerator: -&self.numerator,
            exponent: self.exponent,
            base: self.base,
        }
    }

    /// Multiplies by `base^e`; `e` may be negative.
    pub fn mul_base_pow(&self, e: i64) -> Self {
        let mut out = self.clone();
        if out.is_zero() {
            return out;
        }
        if e >= 0 {
            let e = e as u64;
            if e <= out.exponent as u64 {
                out.exponent -= e as u32;
            } else {
                out.numerator *= self.k_pow((e - out.exponent as u64) as u32);
                out.exponent = 0;
            }
        } else {
            out.exponent += e.unsigned_abs() as u32;
            out.canonicalize();
        }
        out
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.numerator.div_floor(&self.k_pow(self.exponent))
    }

    /// The value minus its floor; lies in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let modulus = self.k_pow(self.exponent);
        let mut out = LocalizedInt {
            numerator: self.numerator.mod_floor(&modulus),
            exponent: self.exponent,
            base: self.base,
        };
        out.canonicalize();
        out
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.k_pow(self.exponent))
    }
}

impl PartialOrd for LocalizedInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by value; ties between different bases fall back to the base.
impl Ord for LocalizedInt {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.base != other.base {
            return self
                .to_rational()
                .cmp(&other.to_rational())
                .then(self.base.cmp(&other.base));
        }
        let lhs = &self.numerator * self.k_pow(other.exponent);
        let rhs = &other.numerator * self.k_pow(self.exponent);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for LocalizedInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.k_pow(self.exponent))
        }
    }
}

/// A residue class in ℤ/N, `N ≥ 2`, with `residue ∈ [0, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModScalar {
    residue: BigInt,
    modulus: BigInt,
}

impl ModScalar {
    pub fn new(value: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus < BigInt::from(2) {
            return Err(Error::InvalidParameter(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(ModScalar {
            residue: value.into().mod_floor(&modulus),
            modulus,
        })
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::RingMismatch(format!(
                "Z/{} vs Z/{}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    fn with_residue(&self, value: BigInt) -> Self {
        ModScalar {
            residue: value.mod_floor(&self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue(&self.residue + &other.residue))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue(&self.residue - &other.residue))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue(&self.residue * &other.residue))
    }

    pub fn neg(&self) -> Self {
        self.with_residue(-&self.residue)
    }

    pub fn is_invertible(&self) -> bool {
        self.residue.gcd(&self.modulus).is_one()
    }

    /// The multiplicative inverse, by the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<Self> {
        let egcd = self.residue.extended_gcd(&self.modulus);
        if !egcd.gcd.is_one() {
            return Err(Error::NotInvertible {
                value: self.residue.to_string(),
                modulus: self.modulus.to_string(),
            });
        }
        Ok(self.with_residue(egcd.x))
    }
}

impl fmt::Display for ModScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// A coefficient ring: the rationals or ℤ/N.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rational,
    Modular(BigInt),
}

impl Ring {
    pub fn modular(modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus < BigInt::from(2) {
            return Err(Error::InvalidParameter(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(Ring::Modular(modulus))
    }

    pub fn from_int(&self, value: impl Into<BigInt>) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::from_integer(value.into())),
            Ring::Modular(n) => Scalar::Modular(ModScalar {
                residue: value.into().mod_floor(n),
                modulus: n.clone(),
            }),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "Q"),
            Ring::Modular(n) => write!(f, "Z/{n}"),
        }
    }
}

/// An element of a [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular(ModScalar),
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rational,
            Scalar::Modular(s) => Ring::Modular(s.modulus.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(s) => s.is_zero(),
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::RingMismatch(format!("{} vs {}", self.ring(), other.ring()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Modular(a), Scalar::Modular(b)) => Ok(Scalar::Modular(a.checked_add(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Modular(a), Scalar::Modular(b)) => Ok(Scalar::Modular(a.checked_mul(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular(a) => Scalar::Modular(a.neg()),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match self {
            Scalar::Rational(a) if a.is_zero() => Err(Error::NotInvertible {
                value: "0".into(),
                modulus: "Q".into(),
            }),
            Scalar::Rational(a) => Ok(Scalar::Rational(a.recip())),
            Scalar::Modular(a) => Ok(Scalar::Modular(a.inverse()?)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Modular(s) => write!(f, "{}", s.residue),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(n: i64, e: u32, k: u64) -> LocalizedInt {
        LocalizedInt::new(n, e, k).unwrap()
    }

    #[test]
    fn thirds_sum_to_integer() {
        let s = loc(1, 1, 3).checked_add(&loc(2, 1, 3)).unwrap();
        assert_eq!(s, loc(1, 0, 3));
        assert_eq!(s.exponent(), 0);
    }

    #[test]
    fn zero_is_additive_identity() {
        let third = loc(1, 1, 3);
        assert_eq!(third.checked_add(&LocalizedInt::zero(3).unwrap()).unwrap(), third);
    }

    #[test]
    fn five_ninths_plus_one_third() {
        let s = loc(5, 2, 3).checked_add(&loc(1, 1, 3)).unwrap();
        // rational oracle: 5/9 + 3/9 = 8/9
        assert_eq!(s.to_rational(), BigRational::new(8.into(), 9.into()));
        assert_eq!(s, loc(8, 2, 3));
    }

    #[test]
    fn base_mismatch_rejected() {
        let err = loc(1, 1, 3).checked_add(&loc(1, 1, 5)).unwrap_err();
        assert_eq!(err, Error::BaseMismatch { left: 3, right: 5 });
    }

    #[test]
    fn composite_base_canonical_form() {
        // 2/4 cannot shed its exponent: 4 does not divide 2
        let half = loc(2, 1, 4);
        assert_eq!(half.exponent(), 1);
        assert_eq!(loc(16, 2, 4), loc(1, 0, 4));
        let parsed = LocalizedInt::from_rational(&BigRational::new(1.into(), 2.into()), 4).unwrap();
        assert_eq!(parsed, half);
        assert!(LocalizedInt::from_rational(&BigRational::new(1.into(), 3.into()), 4).is_err());
    }

    #[test]
    fn fract_and_floor() {
        let x = loc(-1, 1, 3);
        assert_eq!(x.floor(), BigInt::from(-1));
        assert_eq!(x.fract(), loc(2, 1, 3));
        assert_eq!(loc(15, 0, 3).mul_base_pow(-2), loc(15, 2, 3));
        assert_eq!(loc(5, 1, 3).mul_base_pow(2), loc(15, 0, 3));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(ModScalar::new(3, 2).unwrap().inverse().unwrap().residue(), &BigInt::from(1));
        assert_eq!(ModScalar::new(1, 17).unwrap().inverse().unwrap().residue(), &BigInt::from(1));
        // extended-gcd oracle: 4 * 7 = 28 = 3*9 + 1
        assert_eq!(ModScalar::new(4, 9).unwrap().inverse().unwrap().residue(), &BigInt::from(7));
        assert!(ModScalar::new(3, 9).unwrap().inverse().is_err());
    }

    #[test]
    fn m_plus_one_is_a_unit_mod_m() {
        for m in 2..50i64 {
            let s = ModScalar::new(m + 1, m).unwrap();
            assert_eq!(s.residue(), &BigInt::from(1));
            assert!(s.is_invertible());
        }
    }

    #[test]
    fn scalar_ring_mismatch() {
        let q = Ring::Rational.one();
        let z = Ring::modular(5).unwrap().one();
        assert!(matches!(q.checked_add(&z), Err(Error::RingMismatch(_))));
        assert!(Ring::Rational.zero().inverse().is_err());
    }
}
