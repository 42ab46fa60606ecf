//! The permutation module `M = AX` and the wreath product `G = M ⋊ B`.
//!
//! One implementation serves both regimes through the [`Action`] trait:
//! [`BsAction`] is the infinite coset space of BS(1, k), and
//! [`FiniteAction`](crate::finite::FiniteAction) a permutation action of a
//! finite group. Operations that enumerate `G` need both a finite backend and a
//! finite coefficient group and report an error otherwise.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use num_bigint::BigInt;

use crate::abelian::{AbelianElement, AbelianSpec};
use crate::bs::{BsElement, CosetPoint};
use crate::error::{Error, Result};

/// A left action of a group on a set of points.
pub trait Action {
    type Point: Clone + Ord + Debug;
    type Elem: Clone + Eq + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn act(&self, g: &Self::Elem, x: &Self::Point) -> Self::Point;

    fn elem_compatible(&self, g: &Self::Elem) -> bool;
    fn point_compatible(&self, x: &Self::Point) -> bool;

    /// Every point, when the set is finite.
    fn points(&self) -> Option<Vec<Self::Point>> {
        None
    }

    /// Every group element, when the group is finite.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// BS(1, k) acting on `B/⟨h⟩` by left multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BsAction {
    k: u64,
}

impl BsAction {
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
        }
        Ok(BsAction { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn t(&self) -> BsElement {
        BsElement::t(self.k).expect("validated base")
    }

    pub fn h(&self) -> BsElement {
        BsElement::h(self.k).expect("validated base")
    }

    pub fn base_point(&self) -> CosetPoint {
        CosetPoint::base_point(self.k).expect("validated base")
    }
}

impl Action for BsAction {
    type Point = CosetPoint;
    type Elem = BsElement;

    fn identity(&self) -> BsElement {
        BsElement::identity(self.k).expect("validated base")
    }

    fn mul(&self, a: &BsElement, b: &BsElement) -> BsElement {
        a.mul_same_base(b)
    }

    fn inverse(&self, a: &BsElement) -> BsElement {
        a.inverse()
    }

    fn act(&self, g: &BsElement, x: &CosetPoint) -> CosetPoint {
        x.act_same_base(g)
    }

    fn elem_compatible(&self, g: &BsElement) -> bool {
        g.base() == self.k
    }

    fn point_compatible(&self, x: &CosetPoint) -> bool {
        x.base() == self.k
    }
}

/// A finitely supported function `X → A`, kept in sorted-key normal form
/// with no zero values stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleVector<P: Ord> {
    support: BTreeMap<P, AbelianElement>,
}

impl<P: Ord + Clone> Default for ModuleVector<P> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<P: Ord + Clone> ModuleVector<P> {
    pub fn zero() -> Self {
        ModuleVector {
            support: BTreeMap::new(),
        }
    }

    pub fn single(point: P, value: AbelianElement) -> Self {
        let mut support = BTreeMap::new();
        if !value.is_zero() {
            support.insert(point, value);
        }
        ModuleVector { support }
    }

    /// Sums the given terms; repeated points are combined.
    pub fn from_terms(spec: &AbelianSpec, terms: impl IntoIterator<Item = (P, AbelianElement)>) -> Self {
        let mut out = Self::zero();
        for (p, a) in terms {
            out.add_term(spec, p, &a);
        }
        out
    }

    pub fn add_term(&mut self, spec: &AbelianSpec, point: P, value: &AbelianElement) {
        let sum = match self.support.get(&point) {
            Some(old) => spec.add_unchecked(old, value),
            None => value.clone(),
        };
        if sum.is_zero() {
            self.support.remove(&point);
        } else {
            self.support.insert(point, sum);
        }
    }

    pub fn get(&self, point: &P) -> Option<&AbelianElement> {
        self.support.get(point)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &AbelianElement)> {
        self.support.iter()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn points(&self) -> impl Iterator<Item = &P> {
        self.support.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, spec: &AbelianSpec, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, a) in &other.support {
            out.add_term(spec, p.clone(), a);
        }
        out
    }

    pub fn neg(&self, spec: &AbelianSpec) -> Self {
        self.scale(spec, &BigInt::from(-1))
    }

    pub fn sub(&self, spec: &AbelianSpec, other: &Self) -> Self {
        self.add(spec, &other.neg(spec))
    }

    pub fn scale(&self, spec: &AbelianSpec, factor: &BigInt) -> Self {
        ModuleVector::from_terms(
            spec,
            self.support.iter().map(|(p, a)| (p.clone(), spec.scale(a, factor))),
        )
    }

    /// Pushes the support forward along `f`, combining coefficients of points
    /// with the same image.
    pub fn relabel<Q: Ord + Clone>(&self, spec: &AbelianSpec, mut f: impl FnMut(&P) -> Q) -> ModuleVector<Q> {
        ModuleVector::from_terms(spec, self.support.iter().map(|(p, a)| (f(p), a.clone())))
    }
}

impl<P: Ord + fmt::Display> fmt::Display for ModuleVector<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, a)) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{a}*{p}")?;
        }
        Ok(())
    }
}

/// An element `(m, b)` of `M ⋊ B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement<P: Ord, E> {
    pub mv: ModuleVector<P>,
    pub b: E,
}

/// `A ≀_X B` for an abelian coefficient group `A` and an action backend.
#[derive(Debug)]
pub struct WreathProduct<'a, A: Action> {
    action: &'a A,
    coeff: AbelianSpec,
}

pub type Element<A> = WreathElement<<A as Action>::Point, <A as Action>::Elem>;

impl<'a, A: Action> WreathProduct<'a, A> {
    pub fn new(action: &'a A, coeff: AbelianSpec) -> Self {
        WreathProduct { action, coeff }
    }

    pub fn action(&self) -> &'a A {
        self.action
    }

    pub fn coeff(&self) -> &AbelianSpec {
        &self.coeff
    }

    pub fn identity(&self) -> Element<A> {
        WreathElement {
            mv: ModuleVector::zero(),
            b: self.action.identity(),
        }
    }

    /// `(0, b)`.
    pub fn from_base(&self, b: A::Elem) -> Element<A> {
        WreathElement {
            mv: ModuleVector::zero(),
            b,
        }
    }

    /// `(m, 1)`.
    pub fn from_module(&self, mv: ModuleVector<A::Point>) -> Element<A> {
        WreathElement {
            mv,
            b: self.action.identity(),
        }
    }

    pub fn check(&self, g: &Element<A>) -> Result<()> {
        if !self.action.elem_compatible(&g.b) {
            return Err(Error::ContextMismatch(format!("group element {:?}", g.b)));
        }
        for (p, a) in g.mv.iter() {
            if !self.action.point_compatible(p) {
                return Err(Error::ContextMismatch(format!("point {p:?}")));
            }
            if !self.coeff.contains(a) {
                return Err(Error::ContextMismatch(format!(
                    "coefficient {a} is not an element of {}",
                    self.coeff
                )));
            }
        }
        Ok(())
    }

    /// `b ∘ m = b m b⁻¹`: relabels the support by `x ↦ b * x`.
    pub fn mv_act(&self, b: &A::Elem, m: &ModuleVector<A::Point>) -> ModuleVector<A::Point> {
        m.relabel(&self.coeff, |x| self.action.act(b, x))
    }

    pub fn mv_add(&self, m: &ModuleVector<A::Point>, n: &ModuleVector<A::Point>) -> ModuleVector<A::Point> {
        m.add(&self.coeff, n)
    }

    /// `(m₁, b₁)(m₂, b₂) = (m₁ + b₁ ∘ m₂, b₁ b₂)`.
    pub fn mul(&self, g: &Element<A>, h: &Element<A>) -> Result<Element<A>> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul_unchecked(g, h))
    }

    pub(crate) fn mul_unchecked(&self, g: &Element<A>, h: &Element<A>) -> Element<A> {
        WreathElement {
            mv: g.mv.add(&self.coeff, &self.mv_act(&g.b, &h.mv)),
            b: self.action.mul(&g.b, &h.b),
        }
    }

    /// `(m, b)⁻¹ = (−b⁻¹ ∘ m, b⁻¹)`.
    pub fn inverse(&self, g: &Element<A>) -> Element<A> {
        let b_inv = self.action.inverse(&g.b);
        WreathElement {
            mv: self.mv_act(&b_inv, &g.mv).neg(&self.coeff),
            b: b_inv,
        }
    }

    /// `x g x⁻¹`.
    pub fn conjugate(&self, x: &Element<A>, g: &Element<A>) -> Result<Element<A>> {
        Ok(self.mul_unchecked(&self.mul(x, g)?, &self.inverse(x)))
    }

    /// The projection `π : G → B` with kernel `M`.
    pub fn pi(&self, g: &Element<A>) -> A::Elem {
        g.b.clone()
    }

    pub fn is_identity(&self, g: &Element<A>) -> bool {
        g.mv.is_zero() && g.b == self.action.identity()
    }

    /// Every element of `G`, module part varying fastest within each `b`.
    pub fn elements(&self) -> Result<Vec<Element<A>>> {
        let points = self.action.points().ok_or(Error::NotFinite)?;
        let group = self.action.elements().ok_or(Error::NotFinite)?;
        let values = self.coeff.elements().ok_or(Error::InfiniteCoefficients)?;
        let mut vectors = vec![ModuleVector::zero()];
        for p in &points {
            let mut next = Vec::with_capacity(vectors.len() * values.len());
            for v in &vectors {
                for a in &values {
                    let mut w: ModuleVector<A::Point> = v.clone();
                    w.add_term(&self.coeff, p.clone(), a);
                    next.push(w);
                }
            }
            vectors = next;
        }
        Ok(group
            .into_iter()
            .flat_map(|b| vectors.iter().map(move |mv| WreathElement { mv: mv.clone(), b: b.clone() }))
            .collect())
    }
}
