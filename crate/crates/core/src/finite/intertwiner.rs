//! The intertwiner algebra `End_{KB}(KX)`, direct-finiteness probes on its
//! matrix rings, and the idempotents `e_H` of `KB`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::action::FiniteAction;
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix};

/// Orbits of `B` on `X × X`, each listed as its sorted pairs, ordered by
/// least pair.
pub fn orbitals(action: &FiniteAction) -> Vec<Vec<(usize, usize)>> {
    let n = action.num_points();
    let mut label = vec![vec![usize::MAX; n]; n];
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if label[x][y] != usize::MAX {
                continue;
            }
            let mut pairs: Vec<(usize, usize)> = (0..action.group().order())
                .map(|b| (action.apply(b, x), action.apply(b, y)))
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            for &(u, v) in &pairs {
                label[u][v] = out.len();
            }
            out.push(pairs);
        }
    }
    out
}

/// The 0/1 matrices of the orbitals over `K`; they commute with every `P(b)`
/// and span `End_{KB}(KX)`.
pub fn intertwiner_basis<F: Field>(f: &F, action: &FiniteAction) -> Vec<Matrix<F::Elem>> {
    let n = action.num_points();
    orbitals(action)
        .into_iter()
        .map(|pairs| {
            let mut m = linalg::zeros(f, n, n);
            for (x, y) in pairs {
                m[x][y] = f.one();
            }
            m
        })
        .collect()
}

pub fn permutation_matrix<F: Field>(f: &F, perm: &[usize]) -> Matrix<F::Elem> {
    let mut m = linalg::zeros(f, perm.len(), perm.len());
    for (x, &y) in perm.iter().enumerate() {
        m[y][x] = f.one();
    }
    m
}

/// Dimension of `{E : P(b) E = E P(b) for all b}` from the linear system in
/// the `n²` matrix entries.
pub fn commutant_dimension<F: Field>(f: &F, action: &FiniteAction) -> usize {
    let n = action.num_points();
    let mut rows = Vec::new();
    for b in 0..action.group().order() {
        let p = action.perm(b);
        // (P E)[p(x)][y] = E[x][y] and (E P)[p(x)][p(y)] = E[x][y]; equality
        // everywhere means E[x][y] = E[p(x)][p(y)]
        for x in 0..n {
            for y in 0..n {
                let (u, v) = (p[x], p[y]);
                if (u, v) == (x, y) {
                    continue;
                }
                let mut row = vec![f.zero(); n * n];
                row[x * n + y] = f.one();
                row[u * n + v] = f.neg(&f.one());
                rows.push(row);
            }
        }
    }
    n * n - linalg::rank(f, &rows)
}

pub fn commutes_with_action<F: Field>(f: &F, action: &FiniteAction, m: &Matrix<F::Elem>) -> bool {
    (0..action.group().order()).all(|b| {
        let p = permutation_matrix(f, action.perm(b));
        linalg::mat_mul(f, &p, m) == linalg::mat_mul(f, m, &p)
    })
}

/// How matrices `a ∈ M_s(E)` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeMode {
    /// Every element of `M_s(E)`; only for finite fields and small sizes.
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub field: String,
    pub matrix_size: usize,
    pub algebra_dim: usize,
    pub exhaustive: bool,
    pub tested: usize,
    /// Number of `a` for which some `b ∈ M_s(E)` has `ab = 1`.
    pub right_invertible: usize,
    pub violations: usize,
    pub witness: Option<(String, String)>,
}

impl ProbeReport {
    pub fn consistent(&self) -> bool {
        self.violations == 0
    }
}

fn embed_block<F: Field>(f: &F, n: usize, s: usize, i: usize, j: usize, e: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let mut m = linalg::zeros(f, s * n, s * n);
    for (r, row) in e.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m[i * n + r][j * n + c] = v.clone();
        }
    }
    m
}

fn combine<F: Field>(f: &F, basis: &[Matrix<F::Elem>], coeffs: &[F::Elem], size: usize) -> Matrix<F::Elem> {
    let mut m = linalg::zeros(f, size, size);
    for (b, c) in basis.iter().zip(coeffs) {
        if !f.is_zero(c) {
            m = linalg::mat_add(f, &m, &linalg::mat_scale(f, c, b));
        }
    }
    m
}

/// For each chosen `a ∈ M_s(E)`, solves `a b = 1` inside `M_s(E)` and checks
/// that any solution also has `b a = 1`. The identity is always tested first.
pub fn direct_finiteness_probe<F: Field>(
    f: &F,
    field_name: &str,
    basis: &[Matrix<F::Elem>],
    s: usize,
    mode: ProbeMode,
    elements: Option<&[F::Elem]>,
) -> Result<ProbeReport> {
    let n = basis.first().map_or(0, Vec::len);
    let size = s * n;
    let mut big_basis = Vec::new();
    for i in 0..s {
        for j in 0..s {
            for e in basis {
                big_basis.push(embed_block(f, n, s, i, j, e));
            }
        }
    }
    let dim = big_basis.len();
    let one = linalg::identity(f, size);
    let target: Vec<F::Elem> = one.iter().flatten().cloned().collect();
    let mut report = ProbeReport {
        field: field_name.to_string(),
        matrix_size: s,
        algebra_dim: basis.len(),
        exhaustive: matches!(mode, ProbeMode::Exhaustive),
        tested: 0,
        right_invertible: 0,
        violations: 0,
        witness: None,
    };
    let check = |a: Matrix<F::Elem>, report: &mut ProbeReport| {
        report.tested += 1;
        let products: Vec<Matrix<F::Elem>> = big_basis.iter().map(|b| linalg::mat_mul(f, &a, b)).collect();
        let system: Matrix<F::Elem> = (0..size * size)
            .map(|k| products.iter().map(|p| p[k / size][k % size].clone()).collect())
            .collect();
        if let Some(coeffs) = linalg::solve(f, &system, &target) {
            report.right_invertible += 1;
            let b = combine(f, &big_basis, &coeffs, size);
            if linalg::mat_mul(f, &b, &a) != one {
                report.violations += 1;
                report.witness.get_or_insert_with(|| (format!("{a:?}"), format!("{b:?}")));
            }
        }
    };
    check(one.clone(), &mut report);
    match mode {
        ProbeMode::Exhaustive => {
            let elems = elements.ok_or_else(|| {
                Error::InvalidParameter("exhaustive probing needs a finite field".into())
            })?;
            let total = (elems.len() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
            const LIMIT: u128 = 1 << 16;
            if total > LIMIT {
                return Err(Error::BoundExceeded {
                    order: total,
                    bound: LIMIT,
                });
            }
            for code in 0..total as usize {
                let mut c = code;
                let coeffs: Vec<F::Elem> = (0..dim)
                    .map(|_| {
                        let v = elems[c % elems.len()].clone();
                        c /= elems.len();
                        v
                    })
                    .collect();
                check(combine(f, &big_basis, &coeffs, size), &mut report);
            }
        }
        ProbeMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let coeffs: Vec<F::Elem> = (0..dim).map(|_| f.from_i64(rng.random_range(-4..=4))).collect();
                check(combine(f, &big_basis, &coeffs, size), &mut report);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentReport {
    pub field: String,
    pub subgroup: Vec<usize>,
    /// Coefficients of `e_H` by group element.
    pub coefficients: BTreeMap<usize, String>,
    pub idempotent: bool,
    pub rank: usize,
    pub index: usize,
}

/// `e_H = (1/|H|) Σ_{h ∈ H} h` for `H` the stabilizer of orbit `orbit`;
/// checks `e² = e` and that `KB·e` has rank `[B : H]`.
pub fn idempotent_split<F: Field>(f: &F, field_name: &str, action: &FiniteAction, orbit: usize) -> Result<IdempotentReport> {
    let data = action.orbits_stabs();
    let h = data
        .stabilizers
        .get(orbit)
        .ok_or_else(|| Error::InvalidParameter(format!("no orbit {orbit}")))?
        .clone();
    let g = action.group();
    let inv = f.inv(&f.from_i64(h.len() as i64)).ok_or_else(|| Error::NotInvertible {
        value: h.len().to_string(),
        modulus: field_name.to_string(),
    })?;
    let mut e = vec![f.zero(); g.order()];
    for &x in &h {
        e[x] = inv.clone();
    }
    let mul = |a: &[F::Elem], b: &[F::Elem]| {
        let mut out = vec![f.zero(); g.order()];
        for (x, ax) in a.iter().enumerate() {
            if f.is_zero(ax) {
                continue;
            }
            for (y, by) in b.iter().enumerate() {
                let xy = g.mul(x, y);
                out[xy] = f.add(&out[xy], &f.mul(ax, by));
            }
        }
        out
    };
    let idempotent = mul(&e, &e) == e;
    let translates: Matrix<F::Elem> = (0..g.order())
        .map(|b| {
            let mut delta = vec![f.zero(); g.order()];
            delta[b] = f.one();
            mul(&delta, &e)
        })
        .collect();
    Ok(IdempotentReport {
        field: field_name.to_string(),
        coefficients: h.iter().map(|&x| (x, format!("{:?}", e[x]))).collect(),
        subgroup: h.clone(),
        idempotent,
        rank: linalg::rank(f, &translates),
        index: g.order() / h.len(),
    })
}
