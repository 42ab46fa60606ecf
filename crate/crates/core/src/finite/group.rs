//! Finite groups as Cayley tables over `0..n`, with `0` the identity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_AUT_BOUND: usize = 200;

/// Partial generator assignments [`FiniteGroup::aut_brute`] may visit.
pub const AUT_SEARCH_BUDGET: u64 = 20_000_000;

const UNSET: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

/// A permutation of `0..n` as its image list; `(g h)(x) = g(h(x))`.
pub type Perm = Vec<usize>;

pub fn perm_compose(g: &[usize], h: &[usize]) -> Perm {
    h.iter().map(|&x| g[x]).collect()
}

pub fn perm_inverse(g: &[usize]) -> Perm {
    let mut out = vec![0; g.len()];
    for (x, &y) in g.iter().enumerate() {
        out[y] = x;
    }
    out
}

pub fn is_permutation(g: &[usize]) -> bool {
    let mut seen = vec![false; g.len()];
    g.iter().all(|&y| y < g.len() && !std::mem::replace(&mut seen[y], true))
}

/// Parses cycle notation over the points `1..=n`, e.g. `(1 2)(3)` or `(1,2,3)`.
/// An empty string or `()` is the identity.
pub fn parse_cycles(text: &str, n: usize) -> std::result::Result<Perm, String> {
    let mut perm: Perm = (0..n).collect();
    let mut seen = vec![false; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| format!("expected '(' in {text:?}"))?;
        let close = open.find(')').ok_or_else(|| format!("unclosed cycle in {text:?}"))?;
        let cycle: Vec<usize> = open[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(p) if (1..=n).contains(&p) => Ok(p - 1),
                _ => Err(format!("bad point {s:?}; points are 1..={n}")),
            })
            .collect::<std::result::Result<_, _>>()?;
        for (i, &p) in cycle.iter().enumerate() {
            if std::mem::replace(&mut seen[p], true) {
                return Err(format!("point {} repeated in {text:?}", p + 1));
            }
            perm[p] = cycle[(i + 1) % cycle.len()];
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(perm)
}

pub fn format_cycles(g: &[usize]) -> String {
    let mut seen = vec![false; g.len()];
    let mut out = String::new();
    for start in 0..g.len() {
        if seen[start] || g[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = g[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// All elements of `⟨gens⟩ ≤ Sym(n)`, sorted lexicographically (so the
/// identity comes first).
pub fn perm_closure(n: usize, gens: &[Perm]) -> Vec<Perm> {
    let id: Perm = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = perm_compose(s, &g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.into_iter().collect()
}

impl FiniteGroup {
    /// Validates closure, identity at `0`, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Error::InvalidParameter(format!("multiplication table: {msg}"));
        if n == 0 {
            return Err(bad("empty".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n || !is_permutation(row) {
                return Err(bad(format!("row {i} is not a permutation of the elements")));
            }
            if row[0] != i || table[0][i] != i {
                return Err(bad("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inv = (0..n)
            .map(|a| table[a].iter().position(|&x| x == 0).expect("row is a permutation"))
            .collect();
        Ok(FiniteGroup { table, inv })
    }

    /// The group generated by `gens ⊆ Sym(n)`, with its elements as permutations
    /// in the same (lexicographic) order as the group indices.
    pub fn from_permutations(n: usize, gens: &[Perm]) -> Result<(Self, Vec<Perm>)> {
        if let Some(g) = gens.iter().find(|g| g.len() != n || !is_permutation(g)) {
            return Err(Error::InvalidParameter(format!("{g:?} is not a permutation of {n} points")));
        }
        let elems = perm_closure(n, gens);
        let index: BTreeMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elems
            .iter()
            .map(|g| elems.iter().map(|h| index[&perm_compose(g, h)]).collect())
            .collect();
        let inv = elems.iter().map(|g| index[&perm_inverse(g)]).collect();
        Ok((FiniteGroup { table, inv }, elems))
    }

    pub fn cyclic(n: usize) -> Self {
        let gen: Perm = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(n, &[gen]).expect("valid").0
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("valid").0
    }

    /// Symmetries of a square, acting on its vertices.
    pub fn dihedral8() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).expect("valid").0
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// `g a g⁻¹`.
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.commute(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&z| (0..self.order()).all(|g| self.commute(z, g)))
            .collect()
    }

    pub fn conjugacy_class(&self, a: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.order()).map(|g| self.conj(g, a)).collect();
        set.into_iter().collect()
    }

    /// `⟨gens⟩` as a sorted list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(g) = queue.pop_front() {
            for &s in gens {
                let h = self.mul(g, s);
                if !std::mem::replace(&mut seen[h], true) {
                    queue.push_back(h);
                }
            }
        }
        (0..self.order()).filter(|&g| seen[g]).collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        set.contains(&0) && h.iter().all(|&a| h.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    /// `g H g⁻¹`, sorted.
    pub fn conjugate_subgroup(&self, g: usize, h: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = h.iter().map(|&a| self.conj(g, a)).collect();
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        (0..self.order()).all(|g| self.conjugate_subgroup(g, h) == h)
    }

    /// All subgroups, sorted by order and then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = (0..self.order()).map(|g| self.closure(&[g])).collect();
        loop {
            let current: Vec<Vec<usize>> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let mut gens = a.clone();
                    gens.extend(b);
                    if found.insert(self.closure(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The map `a ↦ g a g⁻¹`.
    pub fn inner_automorphism(&self, g: usize) -> Vec<usize> {
        (0..self.order()).map(|a| self.conj(g, a)).collect()
    }

    pub fn is_homomorphism(&self, f: &[usize]) -> bool {
        f.len() == self.order()
            && (0..self.order()).all(|a| (0..self.order()).all(|b| f[self.mul(a, b)] == self.mul(f[a], f[b])))
    }

    pub fn is_automorphism(&self, f: &[usize]) -> bool {
        is_permutation(f) && self.is_homomorphism(f)
    }

    /// A short generating set: one element if cyclic, else the generating pair
    /// with the fewest candidate images, else a greedy set.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        let orders: Vec<usize> = (0..n).map(|a| self.elem_order(a)).collect();
        let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
        for &o in &orders {
            *by_order.entry(o).or_default() += 1;
        }
        let cost = |a: usize| by_order[&orders[a]];
        if let Some(g) = (0..n).filter(|&a| orders[a] == n).min_by_key(|&a| cost(a)) {
            return vec![g];
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for a in 1..n {
            for b in a + 1..n {
                let c = cost(a) * cost(b);
                if best.is_some_and(|(bc, _, _)| c >= bc) {
                    continue;
                }
                if self.closure(&[a, b]).len() == n {
                    best = Some((c, a, b));
                }
            }
        }
        if let Some((_, a, b)) = best {
            return vec![a, b];
        }
        let mut gens = Vec::new();
        let mut span = vec![0];
        while span.len() < n {
            let (_, g, next) = (1..n)
                .filter(|g| span.binary_search(g).is_err())
                .map(|g| {
                    let mut trial = gens.clone();
                    trial.push(g);
                    let next = self.closure(&trial);
                    (std::cmp::Reverse(next.len()), g, next)
                })
                .min_by_key(|(size, g, _)| (*size, cost(*g)))
                .expect("proper subgroup");
            gens.push(g);
            span = next;
        }
        gens
    }

    /// Extends generator images to a homomorphism along the Cayley graph, or
    /// `None` if the images violate a relation.
    pub fn extend_images(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let map = self.extend_partial(gens, images)?;
        (!map.contains(&UNSET)).then_some(map)
    }

    /// The homomorphism on `⟨gens⟩` with the given images, `UNSET` elsewhere.
    fn extend_partial(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![UNSET; self.order()];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(e) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let target = self.mul(e, g);
                let value = self.mul(map[e], img);
                if map[target] == UNSET {
                    map[target] = value;
                    queue.push_back(target);
                } else if map[target] != value {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Every automorphism as an image table, sorted.
    ///
    /// Generator images are chosen one at a time, and a partial choice is
    /// dropped as soon as it fails to define an injective homomorphism on the
    /// subgroup generated so far. More than [`AUT_SEARCH_BUDGET`] partial
    /// choices is reported as [`Error::BoundExceeded`].
    pub fn aut_brute(&self, bound: usize) -> Result<Vec<Vec<usize>>> {
        if self.order() > bound {
            return Err(Error::BoundExceeded {
                order: self.order() as u128,
                bound: bound as u128,
            });
        }
        let gens = self.small_generating_set();
        if gens.is_empty() {
            return Ok(vec![vec![0]]);
        }
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.elem_order(g);
                (0..self.order()).filter(|&a| self.elem_order(a) == o).collect()
            })
            .collect();
        let work = AtomicU64::new(0);
        let mut auts: Vec<Vec<usize>> = candidates[0]
            .par_iter()
            .map(|&first| {
                let mut found = Vec::new();
                let mut images = vec![first];
                self.search_images(&gens, &candidates, &mut images, &mut found, &work)
                    .then_some(found)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::BoundExceeded {
                order: AUT_SEARCH_BUDGET as u128 + 1,
                bound: AUT_SEARCH_BUDGET as u128,
            })?
            .into_iter()
            .flatten()
            .collect();
        auts.sort();
        Ok(auts)
    }

    /// Depth-first search; `false` once the shared budget is spent.
    fn search_images(
        &self,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        work: &AtomicU64,
    ) -> bool {
        if work.fetch_add(1, Ordering::Relaxed) >= AUT_SEARCH_BUDGET {
            return false;
        }
        let Some(map) = self.extend_partial(&gens[..images.len()], images) else {
            return true;
        };
        let mut seen = vec![false; self.order()];
        for &v in map.iter().filter(|&&v| v != UNSET) {
            if std::mem::replace(&mut seen[v], true) {
                return true;
            }
        }
        if images.len() == gens.len() {
            found.push(map);
            return true;
        }
        for &c in &candidates[images.len()] {
            images.push(c);
            let within_budget = self.search_images(gens, candidates, images, found, work);
            images.pop();
            if !within_budget {
                return false;
            }
        }
        true
    }
}
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_parsing() {
        assert_eq!(parse_cycles("(1 2)(3)", 3).unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_cycles("(1,2,3)", 3).unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("", 2).unwrap(), vec![0, 1]);
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(1 4)", 3).is_err());
        assert!(parse_cycles("(0 1)", 3).is_err());
        assert!(parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(parse_cycles("1 2", 3).is_err());
        assert_eq!(format_cycles(&[1, 2, 0, 3]), "(1 2 3)");
    }

    #[test]
    fn small_groups() {
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.center(), vec![0]);
        assert_eq!(s3.subgroups().len(), 6);
        let d4 = FiniteGroup::dihedral8();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.center().len(), 2);
        assert_eq!(d4.subgroups().len(), 10);
        let c4 = FiniteGroup::cyclic(4);
        assert!(c4.is_abelian());
        assert_eq!(c4.subgroups().len(), 3);
        assert!(FiniteGroup::from_table(s3.table().to_vec()).is_ok());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(Vec::new()).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FiniteGroup::cyclic(3).aut_brute(200).unwrap().len(), 2);
        assert_eq!(FiniteGroup::cyclic(1).aut_brute(200).unwrap().len(), 1);
        assert_eq!(FiniteGroup::symmetric3().aut_brute(200).unwrap().len(), 6);
        assert_eq!(FiniteGroup::dihedral8().aut_brute(200).unwrap().len(), 8);
        assert_eq!(FiniteGroup::cyclic(8).aut_brute(200).unwrap().len(), 4);
        let c2xc2 = FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]]).unwrap().0;
        assert_eq!(c2xc2.aut_brute(200).unwrap().len(), 6);
        assert!(matches!(FiniteGroup::symmetric3().aut_brute(5), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn automorphisms_are_valid() {
        let d4 = FiniteGroup::dihedral8();
        for f in d4.aut_brute(200).unwrap() {
            assert!(d4.is_automorphism(&f));
        }
        for g in 0..d4.order() {
            assert!(d4.is_automorphism(&d4.inner_automorphism(g)));
        }
    }
}
