//! Automorphisms of a finite `G = A ≀_X B`: the embedding `ρ`, the module
//! isomorphisms `Iso_{ℤB}(AX)`, the splitting `θ = θ₂ θ₁`, and the orders of
//! `Aut(G)` and `Out(G)` from their components.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use super::autgood::{nu, nu_delta, psi_construct};
use super::cohomology::derivations_h1;
use super::group::{is_permutation, perm_inverse, FiniteGroup, DEFAULT_AUT_BOUND};
use super::hypotheses::{exponent_two_check, nonabelian_class_check, stab_permutation_check};
use super::intertwiner::orbitals;
use super::module::{FiniteModule, ModElem};
use crate::abelian::AbelianSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, PrimeField};
use crate::wreath::{WreathElement, WreathProduct};

/// `G` with elements numbered `b · |M| + code(m)`, so `0` is the identity.
#[derive(Clone, Debug)]
pub struct FiniteWreath {
    action: FiniteAction,
    coeff: AbelianSpec,
    module: FiniteModule,
    module_size: usize,
}

impl FiniteWreath {
    pub fn new(action: FiniteAction, coeff: AbelianSpec) -> Result<Self> {
        let module = FiniteModule::new(action.num_points(), &coeff)?;
        let module_size = module
            .size()
            .and_then(|s| usize::try_from(s).ok())
            .filter(|&s| s.checked_mul(action.group().order()).is_some())
            .ok_or(Error::BoundExceeded {
                order: u128::MAX,
                bound: usize::MAX as u128,
            })?;
        Ok(FiniteWreath {
            action,
            coeff,
            module,
            module_size,
        })
    }

    pub fn action(&self) -> &FiniteAction {
        &self.action
    }

    pub fn coeff(&self) -> &AbelianSpec {
        &self.coeff
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn module_size(&self) -> usize {
        self.module_size
    }

    pub fn order(&self) -> usize {
        self.module_size * self.action.group().order()
    }

    pub fn index(&self, m: &[u64], b: usize) -> usize {
        b * self.module_size + self.module.encode(m)
    }

    pub fn split(&self, g: usize) -> (ModElem, usize) {
        (self.module.decode(g % self.module_size), g / self.module_size)
    }

    pub fn base_part(&self, g: usize) -> usize {
        g / self.module_size
    }

    pub fn embed_base(&self, b: usize) -> usize {
        b * self.module_size
    }

    pub fn embed_module(&self, m: &[u64]) -> usize {
        self.module.encode(m)
    }

    /// `(m₁, b₁)(m₂, b₂) = (m₁ + b₁ ∘ m₂, b₁ b₂)`.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        let (m1, b1) = self.split(g);
        let (m2, b2) = self.split(h);
        let m = self.module.add(&m1, &self.module.act(&self.action, b1, &m2));
        self.index(&m, self.action.group().mul(b1, b2))
    }

    fn to_dense(&self, el: &WreathElement<usize, usize>) -> usize {
        let r = self.module.rank();
        let mut m = self.module.zero();
        for (x, a) in el.mv.iter() {
            for (j, c) in a.coords().iter().enumerate() {
                m[x * r + j] = c.to_u64().expect("reduced coordinate");
            }
        }
        self.index(&m, el.b)
    }

    /// The Cayley table, computed with the generic wreath product.
    pub fn cayley_group(&self, bound: usize) -> Result<FiniteGroup> {
        if self.order() > bound {
            return Err(Error::BoundExceeded {
                order: self.order() as u128,
                bound: bound as u128,
            });
        }
        let wr = WreathProduct::new(&self.action, self.coeff.clone());
        let mut elems = vec![None; self.order()];
        for el in wr.elements()? {
            let i = self.to_dense(&el);
            elems[i] = Some(el);
        }
        let elems: Vec<WreathElement<usize, usize>> = elems.into_iter().map(|e| e.expect("dense numbering")).collect();
        let table = elems
            .iter()
            .map(|g| elems.iter().map(|h| self.to_dense(&wr.mul_unchecked(g, h))).collect())
            .collect();
        FiniteGroup::from_table(table)
    }

    /// `ρ(σ)(m, b) = (ψ(σ)_* m, σ(b))`, as an image table on `G`.
    pub fn rho_embed(&self, sigma: &[usize]) -> Result<Vec<usize>> {
        let psi = psi_construct(&self.action, sigma)?;
        Ok((0..self.order())
            .map(|g| {
                let (m, b) = self.split(g);
                self.index(&self.module.relabel(&psi, &m), sigma[b])
            })
            .collect())
    }

    /// `x g x⁻¹` for every `g`.
    pub fn inner_automorphism(&self, x: usize) -> Vec<usize> {
        let (m, b) = self.split(x);
        let b_inv = self.action.group().inv(b);
        let m_inv = self.module.neg(&self.module.act(&self.action, b_inv, &m));
        let x_inv = self.index(&m_inv, b_inv);
        (0..self.order()).map(|g| self.mul(self.mul(x, g), x_inv)).collect()
    }

    pub fn is_automorphism(&self, f: &[usize]) -> bool {
        is_permutation(f) && (0..self.order()).all(|g| (0..self.order()).all(|h| f[self.mul(g, h)] == self.mul(f[g], f[h])))
    }
}

/// A `B`-equivariant additive map `AX → AX`, stored by the images of the
/// generators `e_j · x` in the order `x * r + j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModuleMap {
    pub images: Vec<ModElem>,
}

impl ModuleMap {
    pub fn apply(&self, module: &FiniteModule, m: &[u64]) -> ModElem {
        let mut out = module.zero();
        for (i, &c) in m.iter().enumerate() {
            if c != 0 {
                out = module.add(&out, &module.scale(c, &self.images[i]));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIso {
    pub prime: u64,
    /// Multiplicity of each exponent `e` among the summands `ℤ/p^e`.
    pub levels: BTreeMap<u32, usize>,
    pub end_order: u128,
    pub iso_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub order: u128,
    pub end_order: u128,
    pub per_prime: Vec<PrimeIso>,
}

/// Units of `M_s(E)` for `E = End_{𝔽_p B}(𝔽_p X)`, by enumeration.
fn matrix_ring_units(p: u64, action: &FiniteAction, s: usize) -> Result<u128> {
    const LIMIT: u128 = 1 << 20;
    let f = PrimeField::new(p)?;
    let n = action.num_points();
    let orbs = orbitals(action);
    let params = orbs.len() * s * s;
    let total = (p as u128).checked_pow(params as u32).unwrap_or(u128::MAX);
    if total > LIMIT {
        return Err(Error::BoundExceeded {
            order: total,
            bound: LIMIT,
        });
    }
    let mut units = 0;
    for code in 0..total {
        let mut c = code;
        let mut m = linalg::zeros(&f, s * n, s * n);
        for bi in 0..s {
            for bj in 0..s {
                for orb in &orbs {
                    let v = (c % p as u128) as u64;
                    c /= p as u128;
                    for &(x, y) in orb {
                        m[bi * n + x][bj * n + y] = v;
                    }
                }
            }
        }
        if linalg::rank(&f, &m) == s * n {
            units += 1;
        }
    }
    Ok(units)
}

/// `|Iso_{ℤB}(AX)|` by primary decomposition: an endomorphism of `A_p X` is
/// invertible iff its reduction to each exponent level of `A_p` is a unit of
/// `M_s(End_{𝔽_p B}(𝔽_p X))`.
pub fn iso_group(action: &FiniteAction, coeff: &AbelianSpec) -> Result<IsoReport> {
    if !coeff.is_finite() {
        return Err(Error::InfiniteCoefficients);
    }
    let dim = orbitals(action).len() as u32;
    let overflow = || Error::BoundExceeded {
        order: u128::MAX,
        bound: u128::MAX,
    };
    let mut report = IsoReport {
        order: 1,
        end_order: 1,
        per_prime: Vec::new(),
    };
    for (p, part) in coeff.primary_decompose() {
        let exps: Vec<u32> = part
            .invariants()
            .iter()
            .map(|&q| crate::abelian::factorize(q)[0].1)
            .collect();
        let mut end_log = 0u32;
        for &ei in &exps {
            for &ej in &exps {
                end_log += ei.min(ej) * dim;
            }
        }
        let end_order = (p as u128).checked_pow(end_log).ok_or_else(overflow)?;
        let mut levels = BTreeMap::new();
        for &e in &exps {
            *levels.entry(e).or_insert(0usize) += 1;
        }
        let mut iso_order = end_order;
        for &s in levels.values() {
            let units = matrix_ring_units(p, action, s)?;
            let ring = (p as u128).pow(dim * (s * s) as u32);
            iso_order = iso_order / ring * units;
        }
        report.end_order = report.end_order.checked_mul(end_order).ok_or_else(overflow)?;
        report.order = report.order.checked_mul(iso_order).ok_or_else(overflow)?;
        report.per_prime.push(PrimeIso {
            prime: p,
            levels,
            end_order,
            iso_order,
        });
    }
    Ok(report)
}

/// Every element of `Iso_{ℤB}(AX)` by direct search over generator images;
/// limited to `|AX| ≤ 4096`.
pub fn iso_group_exhaustive(action: &FiniteAction, coeff: &AbelianSpec) -> Result<Vec<ModuleMap>> {
    const LIMIT: usize = 4096;
    let module = FiniteModule::new(action.num_points(), coeff)?;
    let elems = module.elements(LIMIT)?;
    let data = action.orbits_stabs();
    let r = module.rank();
    // candidates for the image of e_j · x_i: H_i-fixed elements killed by d_j
    let mut slots: Vec<(usize, usize, Vec<&ModElem>)> = Vec::new();
    for (i, &xi) in data.representatives.iter().enumerate() {
        for (j, &d) in module.moduli().iter().enumerate() {
            let cands = elems
                .iter()
                .filter(|m| module.is_zero(&module.scale(d, m)))
                .filter(|m| data.stabilizers[i].iter().all(|&h| module.act(action, h, m) == **m))
                .collect();
            slots.push((xi, j, cands));
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut images = vec![module.zero(); module.len()];
        for (s, &(xi, j, ref cands)) in slots.iter().enumerate() {
            let img = cands[choice[s]];
            for y in action.orbit(xi) {
                let t = action.transporter(xi, y).expect("same orbit");
                images[y * r + j] = module.act(action, t, img);
            }
        }
        let map = ModuleMap { images };
        let mut seen = vec![false; elems.len()];
        let bijective = elems
            .iter()
            .all(|m| !std::mem::replace(&mut seen[module.encode(&map.apply(&module, m))], true));
        if bijective {
            out.push(map);
        }
        let mut k = 0;
        loop {
            if k == slots.len() {
                out.sort();
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < slots[k].2.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub condition: String,
    pub description: String,
    pub holds: bool,
}

/// Conditions 2–4 on `(A, B, X)`; condition 1 (Hopficity of `B`) is automatic
/// for finite `B`.
pub fn decomposition_hypotheses(action: &FiniteAction, coeff: &AbelianSpec, auts: &[Vec<usize>]) -> Vec<HypothesisCheck> {
    vec![
        HypothesisCheck {
            condition: "1".into(),
            description: "B is Hopfian (automatic for finite B)".into(),
            holds: true,
        },
        HypothesisCheck {
            condition: "2".into(),
            description: "A is finitely generated abelian; if A has exponent 2 the kernel D has no involution".into(),
            holds: exponent_two_check(action, coeff),
        },
        HypothesisCheck {
            condition: "3".into(),
            description: "Aut(B) permutes the point stabilizers".into(),
            holds: stab_permutation_check(action, auts).holds,
        },
        HypothesisCheck {
            condition: "4".into(),
            description: "every nontrivial conjugacy class of an element of D is non-abelian".into(),
            holds: nonabelian_class_check(action).holds,
        },
    ]
}

fn require(checks: &[HypothesisCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Err(Error::hypothesis(c.condition.clone(), c.description.clone())),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutFormula {
    pub hypotheses: Vec<HypothesisCheck>,
    pub der: u128,
    pub iso: u128,
    pub aut_b: u128,
    pub order: u128,
}

/// `|Aut(G)| = |Der(B, AX)| · |Iso_{ℤB}(AX)| · |Aut(B)|`, after checking the
/// hypotheses that license it.
pub fn aut_order_formula(action: &FiniteAction, coeff: &AbelianSpec) -> Result<AutFormula> {
    let auts = action.group().aut_brute(usize::MAX)?;
    let hypotheses = decomposition_hypotheses(action, coeff, &auts);
    require(&hypotheses)?;
    if !coeff.is_finite() {
        return Err(Error::InfiniteCoefficients);
    }
    let der = derivations_h1(action, coeff)?.der_size;
    let iso = iso_group(action, coeff)?.order;
    let aut_b = auts.len() as u128;
    let order = der
        .checked_mul(iso)
        .and_then(|x| x.checked_mul(aut_b))
        .ok_or(Error::BoundExceeded {
            order: u128::MAX,
            bound: u128::MAX,
        })?;
    Ok(AutFormula {
        hypotheses,
        der,
        iso,
        aut_b,
        order,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutFormula {
    pub h1: u128,
    pub iso: u128,
    /// `|δ(Z(B))|`.
    pub delta_center: u128,
    pub iso_mod_delta: u128,
    pub out_b: u128,
    pub order: u128,
}

/// `|Out(G)| = |H¹(B, AX)| · |Iso/δ(Z(B))| · |Out(B)|`.
pub fn out_order(action: &FiniteAction, coeff: &AbelianSpec) -> Result<OutFormula> {
    let aut = aut_order_formula(action, coeff)?;
    let g = action.group();
    let h1 = derivations_h1(action, coeff)?.h1_size;
    let delta_center = if coeff.is_trivial() {
        1
    } else {
        nu_delta(action)?.center_image as u128
    };
    let inn_b = (g.order() / g.center().len()) as u128;
    let out_b = aut.aut_b / inn_b;
    let iso_mod_delta = aut.iso / delta_center;
    Ok(OutFormula {
        h1,
        iso: aut.iso,
        delta_center,
        iso_mod_delta,
        out_b,
        order: h1 * iso_mod_delta * out_b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteAut {
    pub group_order: usize,
    pub aut: usize,
    pub center: usize,
    pub inn: usize,
    pub out: usize,
    /// Automorphisms mapping the base `M = AX` onto itself.
    pub base_preserving: usize,
}

/// `|Aut(G)|`, `|Z(G)|`, `|Inn(G)|` and `|Out(G)|` by exhaustive search.
pub fn aut_brute_wreath(w: &FiniteWreath, bound: usize) -> Result<BruteAut> {
    let g = w.cayley_group(bound)?;
    let auts = g.aut_brute(bound)?;
    let m = w.module_size();
    let base_preserving = auts.iter().filter(|f| f[..m].iter().all(|&x| x < m)).count();
    let center = g.center().len();
    let inn = g.order() / center;
    Ok(BruteAut {
        group_order: g.order(),
        aut: auts.len(),
        center,
        inn,
        out: auts.len() / inn,
        base_preserving,
    })
}

pub fn default_bound() -> usize {
    DEFAULT_AUT_BOUND
}

/// `θ = θ₂ θ₁` with `θ₁ = ρ(σ)` for `σ = π θ|_B`, `θ₂|_B = γ(·)·id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaDecomposition {
    pub sigma: Vec<usize>,
    pub theta1: Vec<usize>,
    pub theta2: Vec<usize>,
    /// `γ(b)` with `θ₂(b) = γ(b) b`.
    pub gamma: Vec<ModElem>,
    /// `θ₂|_M` as a table on module codes.
    pub module_map: Vec<usize>,
    pub recomposes: bool,
    pub module_map_equivariant: bool,
    pub gamma_is_derivation: bool,
}

pub fn theta_decompose(w: &FiniteWreath, theta: &[usize]) -> Result<ThetaDecomposition> {
    let action = w.action();
    let g = action.group();
    let auts = g.aut_brute(usize::MAX)?;
    require(&decomposition_hypotheses(action, w.coeff(), &auts))?;
    if theta.len() != w.order() || !is_permutation(theta) {
        return Err(Error::InvalidParameter("θ is not a bijection of G".into()));
    }
    let sigma: Vec<usize> = (0..g.order()).map(|b| w.base_part(theta[w.embed_base(b)])).collect();
    if !g.is_automorphism(&sigma) {
        return Err(Error::InvalidParameter("π θ restricted to B is not an automorphism".into()));
    }
    let theta1 = w.rho_embed(&sigma)?;
    let theta1_inv = perm_inverse(&theta1);
    let theta2: Vec<usize> = theta1_inv.iter().map(|&h| theta[h]).collect();
    let module = w.module();
    let mut gamma = Vec::with_capacity(g.order());
    for b in 0..g.order() {
        let (m, base) = w.split(theta2[w.embed_base(b)]);
        if base != b {
            return Err(Error::InvalidParameter("θ₂ does not fix B modulo M".into()));
        }
        gamma.push(m);
    }
    let mut module_map = Vec::with_capacity(w.module_size());
    for code in 0..w.module_size() {
        let (m, base) = w.split(theta2[code]);
        if base != 0 {
            return Err(Error::InvalidParameter("θ₂ does not preserve M".into()));
        }
        module_map.push(module.encode(&m));
    }
    let recomposes = (0..w.order()).all(|x| theta2[theta1[x]] == theta[x]);
    let module_map_equivariant = (0..g.order()).all(|b| {
        (0..w.module_size()).all(|code| {
            let m = module.decode(code);
            let lhs = module_map[module.encode(&module.act(action, b, &m))];
            lhs == module.encode(&module.act(action, b, &module.decode(module_map[code])))
        })
    });
    let gamma_is_derivation = (0..g.order()).all(|b1| {
        (0..g.order()).all(|b2| {
            gamma[g.mul(b1, b2)] == module.add(&gamma[b1], &module.act(action, b1, &gamma[b2]))
        })
    });
    Ok(ThetaDecomposition {
        sigma,
        theta1,
        theta2,
        gamma,
        module_map,
        recomposes,
        module_map_equivariant,
        gamma_is_derivation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerTriple {
    pub element: usize,
    pub sigma_is_inner: bool,
    pub gamma_is_principal: bool,
    pub module_map_is_nu: bool,
    pub recomposes: bool,
}

impl InnerTriple {
    pub fn holds(&self) -> bool {
        self.sigma_is_inner && self.gamma_is_principal && self.module_map_is_nu && self.recomposes
    }
}

/// Decomposes the inner automorphism by `(m₀, b₀)` and compares the pieces
/// with `(γ_{m₀}, ν_{b₀}, I_{b₀})`.
pub fn inner_triple_check(w: &FiniteWreath, element: usize) -> Result<InnerTriple> {
    let action = w.action();
    let module = w.module();
    let (m0, b0) = w.split(element);
    let d = theta_decompose(w, &w.inner_automorphism(element))?;
    let g = action.group();
    let sigma_is_inner = d.sigma == g.inner_automorphism(b0);
    let gamma_is_principal = (0..g.order()).all(|b| d.gamma[b] == module.sub(&m0, &module.act(action, b, &m0)));
    let nu_perm = nu(action, b0)?;
    let module_map_is_nu = (0..w.module_size())
        .all(|code| d.module_map[code] == module.encode(&module.relabel(&nu_perm, &module.decode(code))));
    Ok(InnerTriple {
        element,
        sigma_is_inner,
        gamma_is_principal,
        module_map_is_nu,
        recomposes: d.recomposes,
    })
}

/// Tabulated module element, for reports.
pub fn format_module_elem(module: &FiniteModule, m: &[u64]) -> String {
    let r = module.rank().max(1);
    let parts: Vec<String> = m
        .chunks(r)
        .map(|c| {
            let v: Vec<String> = c.iter().map(|x| BigInt::from(*x).to_string()).collect();
            format!("({})", v.join(","))
        })
        .collect();
    parts.join(" ")
}
