//! Dense exact linear algebra over 𝔽_p and ℚ, and diagonalization of integer
//! matrices for counting solutions of linear systems modulo `N`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::is_prime;
use crate::error::{Error, Result};

pub type Matrix<E> = Vec<Vec<E>>;

/// A field given by a runtime context, so that `𝔽_p` can carry its `p`.
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("{p} is not a supported prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            return None;
        }
        let g = (*a as i64).extended_gcd(&(self.p as i64));
        Some(g.x.rem_euclid(self.p as i64) as u64)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    vec![vec![f.zero(); cols]; rows]
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(f, a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..cols {
                let prod = f.mul(aik, &b[k][j]);
                out[i][j] = f.add(&out[i][j], &prod);
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| f.add(x, y)).collect())
        .collect()
}

pub fn mat_scale<F: Field>(f: &F, c: &F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.iter().map(|r| r.iter().map(|x| f.mul(c, x)).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let sub = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, &mut m.clone()).len()
}

/// A basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&r[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m x = b`, if one exists.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.len();
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .zip(identity(f, n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `U A V = diag(d_0, …, d_{r−1}, 0, …)` with `U`, `V` unimodular; only `V`
/// is kept, since solutions of `A x ≡ 0` are `x = V y` with `D y ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerDiagonal {
    cols: usize,
    diag: Vec<BigInt>,
    col_transform: Matrix<BigInt>,
}

pub fn diagonalize(rows: &[Vec<BigInt>], cols: usize) -> IntegerDiagonal {
    let mut a: Matrix<BigInt> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut v: Matrix<BigInt> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                for row in v.iter_mut() {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            let mut best = (t, t);
            for i in t + 1..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut a, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    IntegerDiagonal {
        cols,
        diag,
        col_transform: v,
    }
}

fn swap_cols(m: &mut Matrix<BigInt>, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

impl IntegerDiagonal {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diagonal(&self) -> &[BigInt] {
        &self.diag
    }

    /// Orders of the cyclic factors of `{x ∈ (ℤ/N)^cols : A x ≡ 0}`, one per column.
    fn factor_orders(&self, modulus: u64) -> Vec<u64> {
        let n = BigInt::from(modulus);
        (0..self.cols)
            .map(|i| match self.diag.get(i) {
                Some(d) => d.gcd(&n).to_u64().expect("divides modulus"),
                None => modulus,
            })
            .collect()
    }

    /// Number of solutions of `A x ≡ 0 (mod N)`.
    pub fn count_mod(&self, modulus: u64) -> Option<u128> {
        self.factor_orders(modulus)
            .into_iter()
            .try_fold(1u128, |acc, g| acc.checked_mul(g as u128))
    }

    /// Generators `(vector, order)` of the solution group mod `N`; their
    /// `ℤ`-combinations with coefficients below the orders enumerate every
    /// solution exactly once.
    pub fn generators_mod(&self, modulus: u64) -> Vec<(Vec<u64>, u64)> {
        let n = BigInt::from(modulus);
        self.factor_orders(modulus)
            .into_iter()
            .enumerate()
            .filter(|&(_, g)| g > 1)
            .map(|(i, g)| {
                let scale = BigInt::from(modulus / g);
                let vec = self
                    .col_transform
                    .iter()
                    .map(|row| (&row[i] * &scale).mod_floor(&n).to_u64().expect("reduced"))
                    .collect();
                (vec, g)
            })
            .collect()
    }

    /// Every solution mod `N`, in the order of the generator digits.
    pub fn enumerate_mod(&self, modulus: u64, limit: usize) -> Result<Vec<Vec<u64>>> {
        let total = self.count_mod(modulus).unwrap_or(u128::MAX);
        if total > limit as u128 {
            return Err(Error::BoundExceeded {
                order: total,
                bound: limit as u128,
            });
        }
        let gens = self.generators_mod(modulus);
        let mut out = vec![vec![0u64; self.cols]];
        for (g, order) in gens {
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for base in &out {
                for c in 0..order {
                    next.push(
                        base.iter()
                            .zip(&g)
                            .map(|(x, y)| (x + c * y) % modulus)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        Ok(out)
    }
}
