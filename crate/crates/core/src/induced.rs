//! Equivariant endomorphisms of `V = K[B/H]` for `B = BS(1, k)`, `H = ⟨h⟩`.
//!
//! An endomorphism is stored as the image `w` of the base point `v`; it is
//! well defined exactly when `h·w = w`, and then `φ(b·v) = b·w`. This module
//! also builds the one-sided inverse pair `α(v) = t·v`,
//! `β(v) = (1 + h + … + h^m) t⁻¹·v` with `k = m + 1`, and the surjective but
//! non-injective endomorphism `θ` of `ℤ/m ≀_X B` induced by `α / (m + 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::AbelianSpec;
use crate::bs::{coset_canonical, BsElement, CosetPoint};
use crate::error::{Error, Result};
use crate::scalar::{LocalizedInt, ModScalar, Ring, Scalar};
use crate::wreath::{Action, BsAction, ModuleVector, WreathElement, WreathProduct};

/// A finite `K`-linear combination of coset points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedVector {
    ring: Ring,
    terms: BTreeMap<CosetPoint, Scalar>,
}

impl InducedVector {
    pub fn zero(ring: Ring) -> Self {
        InducedVector {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ring: Ring, x: CosetPoint) -> Self {
        let one = ring.one();
        let mut out = Self::zero(ring);
        out.terms.insert(x, one);
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coefficient(&self, x: &CosetPoint) -> Scalar {
        self.terms.get(x).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CosetPoint, &Scalar)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: CosetPoint, c: &Scalar) -> Result<()> {
        let sum = match self.terms.get(&x) {
            Some(old) => old.checked_add(c)?,
            None => {
                if c.ring() != self.ring {
                    return Err(Error::RingMismatch(format!("{} vs {}", c.ring(), self.ring)));
                }
                c.clone()
            }
        };
        if sum.is_zero() {
            self.terms.remove(&x);
        } else {
            self.terms.insert(x, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.ring.from_int(-1))?)
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        let mut out = Self::zero(self.ring.clone());
        for (x, d) in &self.terms {
            out.add_term(x.clone(), &d.checked_mul(c)?)?;
        }
        Ok(out)
    }

    /// The translate `g·u`.
    pub fn act(&self, g: &BsElement) -> Result<Self> {
        let mut out = Self::zero(self.ring.clone());
        for (x, c) in &self.terms {
            out.add_term(crate::bs::coset_act(g, x)?, c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for InducedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (x, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{x}")?;
        }
        Ok(())
    }
}

/// True iff `h·w = w`, i.e. `w` is the image of `v` under some equivariant map.
pub fn endo_check_invariant(w: &InducedVector) -> bool {
    let Some(x) = w.terms.keys().next() else {
        return true;
    };
    let h = BsElement::h(x.base()).expect("points carry a valid base");
    w.act(&h).map(|hw| hw == *w).unwrap_or(false)
}

/// A `KB`-linear endomorphism of `K[B/H]`, determined by the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedEndo {
    k: u64,
    image: InducedVector,
}

impl InducedEndo {
    pub fn new(k: u64, image: InducedVector) -> Result<Self> {
        BsAction::new(k)?;
        if image.terms.keys().any(|x| x.base() != k) {
            return Err(Error::BaseMismatch {
                left: k,
                right: image.terms.keys().find(|x| x.base() != k).map_or(k, |x| x.base()),
            });
        }
        if !endo_check_invariant(&image) {
            return Err(Error::NonInvariant);
        }
        Ok(InducedEndo { k, image })
    }

    pub fn identity(k: u64, ring: Ring) -> Result<Self> {
        Self::new(k, InducedVector::basis(ring, CosetPoint::base_point(k)?))
    }

    /// `α(v) = t·v`.
    pub fn alpha(m: u64, ring: Ring) -> Result<Self> {
        let k = m + 1;
        let tv = coset_canonical(&BsElement::t(k)?);
        Self::new(k, InducedVector::basis(ring, tv))
    }

    /// `β(v) = Σ_{0 ≤ j ≤ m} h^j t⁻¹·v`.
    pub fn beta(m: u64, ring: Ring) -> Result<Self> {
        let k = m + 1;
        let t_inv = BsElement::t(k)?.inverse();
        let one = ring.one();
        let mut w = InducedVector::zero(ring);
        for j in 0..=m {
            let g = BsElement::h_pow(LocalizedInt::integer(j, k)?).checked_mul(&t_inv)?;
            w.add_term(coset_canonical(&g), &one)?;
        }
        Self::new(k, w)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn ring(&self) -> &Ring {
        &self.image.ring
    }

    pub fn image(&self) -> &InducedVector {
        &self.image
    }

    /// `φ(u) = Σ c_x · g_x·w` where `g_x` represents the coset `x`.
    pub fn apply(&self, u: &InducedVector) -> Result<InducedVector> {
        if u.ring != self.image.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", u.ring, self.image.ring)));
        }
        let mut out = InducedVector::zero(u.ring.clone());
        for (x, c) in &u.terms {
            if x.base() != self.k {
                return Err(Error::BaseMismatch {
                    left: self.k,
                    right: x.base(),
                });
            }
            let translated = self.image.act(&x.representative())?;
            out = out.add(&translated.scale(c)?)?;
        }
        Ok(out)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring(), other.ring())));
        }
        if self.k != other.k {
            return Err(Error::BaseMismatch {
                left: self.k,
                right: other.k,
            });
        }
        Ok(InducedEndo {
            k: self.k,
            image: self.apply(&other.image)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        Ok(InducedEndo {
            k: self.k,
            image: self.image.scale(c)?,
        })
    }
}

pub fn endo_apply(phi: &InducedEndo, u: &InducedVector) -> Result<InducedVector> {
    phi.apply(u)
}

pub fn endo_compose(phi: &InducedEndo, psi: &InducedEndo) -> Result<InducedEndo> {
    phi.compose(psi)
}

/// Outcome of checking that `α/(m+1)` is a left but not a right inverse of `β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub m: u64,
    pub ring: String,
    /// `(1/(m+1)) α∘β = id`.
    pub left_inverse: bool,
    /// `β∘(1/(m+1)) α = id`; expected false.
    pub right_inverse: bool,
    pub alpha_beta_v: String,
    pub beta_alpha_v: String,
    pub beta_alpha_support: usize,
    /// The vector on which `β∘α` and `(m+1)·id` differ.
    pub distinguishing_vector: String,
    /// `(1 − h^{1/(m+1)})·βα(v) = 0` while `(m+1)(1 − h^{1/(m+1)})·v ≠ 0`.
    pub annihilator_certificate: bool,
}

pub fn verify_counterexample(m: u64, ring: Ring) -> Result<CounterexampleReport> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    let k = m + 1;
    let unit = ring.from_int(k).inverse().map_err(|_| Error::NotInvertible {
        value: k.to_string(),
        modulus: ring.to_string(),
    })?;
    let alpha = InducedEndo::alpha(m, ring.clone())?;
    let beta = InducedEndo::beta(m, ring.clone())?;
    let id = InducedEndo::identity(k, ring.clone())?;

    let alpha_beta = alpha.compose(&beta)?;
    let beta_alpha = beta.compose(&alpha)?;
    let left_inverse = alpha.scale(&unit)?.compose(&beta)? == id;
    let right_inverse = beta.compose(&alpha.scale(&unit)?)? == id;

    let v = InducedVector::basis(ring.clone(), CosetPoint::base_point(k)?);
    let k_root = BsElement::h_pow(LocalizedInt::new(1, 1, k)?);
    let annihilate = |u: &InducedVector| -> Result<InducedVector> { u.sub(&u.act(&k_root)?) };
    let annihilator_certificate = annihilate(beta_alpha.image())?.is_zero()
        && !annihilate(&v.scale(&ring.from_int(k))?)?.is_zero();

    Ok(CounterexampleReport {
        m,
        ring: ring.to_string(),
        left_inverse,
        right_inverse,
        alpha_beta_v: alpha_beta.image().to_string(),
        beta_alpha_v: beta_alpha.image().to_string(),
        beta_alpha_support: beta_alpha.image().support_len(),
        distinguishing_vector: v.to_string(),
        annihilator_certificate,
    })
}

/// The endomorphism `θ` of `G = ℤ/m ≀_X BS(1, m+1)` that fixes `B` and acts on
/// `M` as `α/(m+1)`, together with the certificates that it is onto but not
/// one-to-one.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    m: u64,
    action: BsAction,
    coeff: AbelianSpec,
    /// `α/(m+1)` over ℤ/m.
    module_map: InducedEndo,
    /// `β/(m+1)` over ℤ/m, a right inverse of `module_map`.
    section: InducedEndo,
}

pub type BsWreathElement = WreathElement<CosetPoint, BsElement>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub samples: usize,
    pub failures: usize,
}

impl SpotCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl ThetaMap {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
        }
        let ring = Ring::modular(m)?;
        let unit = ring.from_int(m + 1).inverse()?;
        Ok(ThetaMap {
            m,
            action: BsAction::new(m + 1)?,
            coeff: AbelianSpec::cyclic(m),
            module_map: InducedEndo::alpha(m, ring.clone())?.scale(&unit)?,
            section: InducedEndo::beta(m, ring)?.scale(&unit)?,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn action(&self) -> &BsAction {
        &self.action
    }

    pub fn wreath(&self) -> WreathProduct<'_, BsAction> {
        WreathProduct::new(&self.action, self.coeff.clone())
    }

    fn ring(&self) -> &Ring {
        self.module_map.ring()
    }

    fn to_induced(&self, mv: &ModuleVector<CosetPoint>) -> Result<InducedVector> {
        let mut out = InducedVector::zero(self.ring().clone());
        for (x, a) in mv.iter() {
            let c = Scalar::Modular(ModScalar::new(a.coords()[0].clone(), self.m)?);
            out.add_term(x.clone(), &c)?;
        }
        Ok(out)
    }

    fn to_module(&self, u: &InducedVector) -> Result<ModuleVector<CosetPoint>> {
        let mut out = ModuleVector::zero();
        for (x, c) in u.iter() {
            let Scalar::Modular(s) = c else {
                return Err(Error::RingMismatch("expected Z/m coefficients".into()));
            };
            let a = self.coeff.element(vec![s.residue().clone()])?;
            out.add_term(&self.coeff, x.clone(), &a);
        }
        Ok(out)
    }

    /// `θ(m, b) = (α(m)/(m+1), b)`.
    pub fn apply(&self, g: &BsWreathElement) -> Result<BsWreathElement> {
        self.wreath().check(g)?;
        let image = self.module_map.apply(&self.to_induced(&g.mv)?)?;
        Ok(WreathElement {
            mv: self.to_module(&image)?,
            b: g.b.clone(),
        })
    }

    /// `(β(m)/(m+1), b)`, which `θ` maps back to `(m, b)`.
    pub fn preimage(&self, g: &BsWreathElement) -> Result<BsWreathElement> {
        self.wreath().check(g)?;
        let image = self.section.apply(&self.to_induced(&g.mv)?)?;
        Ok(WreathElement {
            mv: self.to_module(&image)?,
            b: g.b.clone(),
        })
    }

    /// `(βα(v)/(m+1) − v, 1)`: nontrivial, and killed by `θ`.
    pub fn kernel_witness(&self) -> Result<BsWreathElement> {
        let v = InducedVector::basis(self.ring().clone(), self.action.base_point());
        let back = self.section.apply(&self.module_map.apply(&v)?)?;
        let mv = self.to_module(&back.sub(&v)?)?;
        Ok(self.wreath().from_module(mv))
    }

    /// Checks `θ(b x b⁻¹) = θ(b) θ(x) θ(b)⁻¹` for `b ∈ {h^{±1}, t^{±1}}` and
    /// `x` the module generator `1·v` and a few of its translates.
    pub fn check_generator_identities(&self) -> Result<bool> {
        let wr = self.wreath();
        let gens = [
            self.action.h(),
            self.action.h().inverse(),
            self.action.t(),
            self.action.t().inverse(),
        ];
        let v = self.action.base_point();
        let one = self.coeff.basis(0);
        let mut module_gens = vec![ModuleVector::single(v.clone(), one.clone())];
        for b in &gens {
            module_gens.push(ModuleVector::single(self.action.act(b, &v), one.clone()));
        }
        for b in &gens {
            let b_el = wr.from_base(b.clone());
            for mv in &module_gens {
                let x = wr.from_module(mv.clone());
                let lhs = self.apply(&wr.conjugate(&b_el, &x)?)?;
                let rhs = wr.conjugate(&self.apply(&b_el)?, &self.apply(&x)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A random element with coset levels and `B`-level in `[-max_level, max_level]`.
    pub fn random_element(&self, rng: &mut impl Rng, max_level: i64) -> BsWreathElement {
        let k = self.action.k();
        let random_b = |rng: &mut dyn rand::RngCore| {
            let num: i64 = rng.random_range(-20..=20);
            let exp: u32 = rng.random_range(0..=3);
            let n: i64 = rng.random_range(-max_level..=max_level);
            BsElement::new(LocalizedInt::new(num, exp, k).expect("valid base"), n)
        };
        let b = random_b(rng);
        let terms = rng.random_range(0..=4);
        let mut mv = ModuleVector::zero();
        for _ in 0..terms {
            let x = coset_canonical(&random_b(rng));
            let a = self
                .coeff
                .element(vec![BigInt::from(rng.random_range(0..self.m))])
                .expect("one coordinate");
            mv.add_term(&self.coeff, x, &a);
        }
        WreathElement { mv, b }
    }

    /// Seeded spot-check of `θ(gh) = θ(g)θ(h)`.
    pub fn spot_check_homomorphism(&self, samples: usize, seed: u64) -> Result<SpotCheck> {
        let wr = self.wreath();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        for _ in 0..samples {
            let g = self.random_element(&mut rng, 6);
            let h = self.random_element(&mut rng, 6);
            let lhs = self.apply(&wr.mul(&g, &h)?)?;
            let rhs = wr.mul(&self.apply(&g)?, &self.apply(&h)?)?;
            if lhs != rhs {
                failures += 1;
            }
        }
        Ok(SpotCheck { samples, failures })
    }

    /// Seeded check of `θ(preimage(g)) = g`.
    pub fn spot_check_preimages(&self, samples: usize, seed: u64) -> Result<SpotCheck> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        for _ in 0..samples {
            let g = self.random_element(&mut rng, 6);
            if self.apply(&self.preimage(&g)?)? != g {
                failures += 1;
            }
        }
        Ok(SpotCheck { samples, failures })
    }
}

pub fn build_theta(m: u64) -> Result<ThetaMap> {
    ThetaMap::new(m)
}

pub fn theta_kernel_witness(m: u64) -> Result<BsWreathElement> {
    ThetaMap::new(m)?.kernel_witness()
}

pub fn theta_preimage(g: &BsWreathElement, m: u64) -> Result<BsWreathElement> {
    ThetaMap::new(m)?.preimage(g)
}

/// The `H`-orbit of a coset point. Every orbit is finite: points of level
/// `n ≥ 0` are fixed and points of level `n < 0` have orbits of size `k^{−n}`.
pub fn h_orbit(x: &CosetPoint) -> Vec<CosetPoint> {
    let k = x.base();
    if x.level() >= 0 {
        return vec![x.clone()];
    }
    let depth = x.level().unsigned_abs() as u32;
    let size = BigInt::from(k).pow(depth);
    let mut out = Vec::new();
    let mut j = BigInt::zero();
    while j < size {
        let shift = LocalizedInt::new(j.clone(), depth, k).expect("valid base");
        let residue = x.residue().add_same_base(&shift).fract();
        out.push(CosetPoint::new(x.level(), residue).expect("fractional part"));
        j += BigInt::one();
    }
    out.sort();
    out
}

/// Sum over an `H`-orbit; these images span the endomorphism ring.
pub fn orbit_sum_endo(x: &CosetPoint, ring: Ring) -> Result<InducedEndo> {
    let one = ring.one();
    let mut w = InducedVector::zero(ring);
    for y in h_orbit(x) {
        w.add_term(y, &one)?;
    }
    InducedEndo::new(x.base(), w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseSearch {
    pub candidates: usize,
    pub pairs_examined: usize,
    /// Pairs `(φ, ψ)` with `φψ = id` and `ψφ ≠ id`, as images of `v`.
    pub one_sided_pairs: Vec<(String, String)>,
}

/// Bounded search for one-sided inverse pairs over ℤ among `±` orbit sums of
/// points with level in `[-max_level, max_level]` and residue denominators at
/// most `k^max_exponent`. Finding nothing decides nothing.
pub fn search_one_sided_inverses(k: u64, max_level: i64, max_exponent: u32) -> Result<InverseSearch> {
    BsAction::new(k)?;
    let ring = Ring::Rational;
    let mut seeds = std::collections::BTreeSet::new();
    for level in -max_level..=max_level {
        for e in 0..=max_exponent {
            let denom = k.pow(e);
            for num in 0..denom {
                let x = CosetPoint::new(level, LocalizedInt::new(num, e, k)?)?;
                seeds.insert(h_orbit(&x)[0].clone());
            }
        }
    }
    let mut candidates = Vec::new();
    for x in &seeds {
        let endo = orbit_sum_endo(x, ring.clone())?;
        candidates.push(endo.scale(&ring.from_int(-1))?);
        candidates.push(endo);
    }
    let id = InducedEndo::identity(k, ring)?;
    let mut pairs_examined = 0;
    let mut one_sided_pairs = Vec::new();
    for phi in &candidates {
        for psi in &candidates {
            pairs_examined += 1;
            if phi.compose(psi)? == id && psi.compose(phi)? != id {
                one_sided_pairs.push((phi.image().to_string(), psi.image().to_string()));
            }
        }
    }
    Ok(InverseSearch {
        candidates: candidates.len(),
        pairs_examined,
        one_sided_pairs,
    })
}
