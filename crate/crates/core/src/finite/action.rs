//! Finite groups acting on `X = {0, …, n−1}`, possibly non-faithfully.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::group::{format_cycles, is_permutation, parse_cycles, perm_compose, FiniteGroup, Perm};
use crate::error::{Error, Result};
use crate::wreath::Action;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    group: FiniteGroup,
    act: Vec<Perm>,
}

/// Orbits ordered by least point, with `x_i` the least point of orbit `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitData {
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub stabilizers: Vec<Vec<usize>>,
    pub kernel: Vec<usize>,
}

impl FiniteAction {
    /// Checks that `act` is a homomorphism `B → Sym(n)`.
    pub fn new(group: FiniteGroup, act: Vec<Perm>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(format!("action: {msg}"));
        if act.len() != group.order() {
            return Err(bad(format!("{} permutations for {} elements", act.len(), group.order())));
        }
        let n = act[0].len();
        if let Some(p) = act.iter().find(|p| p.len() != n || !is_permutation(p)) {
            return Err(bad(format!("{p:?} is not a permutation of {n} points")));
        }
        if act[0].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(bad("the identity moves a point".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if act[group.mul(a, b)] != perm_compose(&act[a], &act[b]) {
                    return Err(bad(format!("not a homomorphism at elements ({a}, {b})")));
                }
            }
        }
        Ok(FiniteAction { group, act })
    }

    /// The faithful action of `⟨gens⟩ ≤ Sym(n)`.
    pub fn from_permutations(n: usize, gens: &[Perm]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("an action needs at least one point".into()));
        }
        let (group, act) = FiniteGroup::from_permutations(n, gens)?;
        Ok(FiniteAction { group, act })
    }

    /// `B` acting on `⊔_i B/H_i` by left multiplication. Cosets of each `H_i`
    /// are listed by least element, so `H_i` itself is the least point of its
    /// orbit and has stabilizer exactly `H_i`.
    pub fn coset_action(group: FiniteGroup, subgroups: &[Vec<usize>]) -> Result<Self> {
        if subgroups.is_empty() {
            return Err(Error::InvalidParameter("no subgroups given".into()));
        }
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for h in subgroups {
            if !group.is_subgroup(h) {
                return Err(Error::InvalidParameter(format!("{h:?} is not a subgroup")));
            }
            let set: BTreeSet<Vec<usize>> = (0..group.order())
                .map(|g| {
                    let mut c: Vec<usize> = h.iter().map(|&a| group.mul(g, a)).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            cosets.extend(set);
        }
        let lookup = |c: &[usize]| cosets.iter().position(|d| d.as_slice() == c).expect("coset");
        let act = (0..group.order())
            .map(|g| {
                cosets
                    .iter()
                    .map(|c| {
                        let mut img: Vec<usize> = c.iter().map(|&a| group.mul(g, a)).collect();
                        img.sort_unstable();
                        lookup(&img)
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteAction { group, act })
    }

    pub fn regular(group: FiniteGroup) -> Self {
        Self::coset_action(group, &[vec![0]]).expect("trivial subgroup")
    }

    pub fn trivial(group: FiniteGroup, n: usize) -> Self {
        let act = vec![(0..n).collect(); group.order()];
        FiniteAction { group, act }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn num_points(&self) -> usize {
        self.act[0].len()
    }

    pub fn perm(&self, b: usize) -> &Perm {
        &self.act[b]
    }

    pub fn apply(&self, b: usize, x: usize) -> usize {
        self.act[b][x]
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&b| self.act[b][x] == x).collect()
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&b| self.act[b].iter().enumerate().all(|(x, &y)| x == y))
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn fixed_points(&self, b: usize) -> usize {
        self.act[b].iter().enumerate().filter(|&(x, &y)| x == y).count()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.act.iter().map(|p| p[x]).collect();
        set.into_iter().collect()
    }

    pub fn orbits_stabs(&self) -> OrbitData {
        let mut seen = vec![false; self.num_points()];
        let mut data = OrbitData {
            orbits: Vec::new(),
            representatives: Vec::new(),
            stabilizers: Vec::new(),
            kernel: self.kernel(),
        };
        for x in 0..self.num_points() {
            if seen[x] {
                continue;
            }
            let orbit = self.orbit(x);
            for &y in &orbit {
                seen[y] = true;
            }
            data.orbits.push(orbit);
            data.representatives.push(x);
            data.stabilizers.push(self.stabilizer(x));
        }
        data
    }

    /// Least `g` with `g * x = y`.
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        (0..self.group.order()).find(|&g| self.act[g][x] == y)
    }

    /// `(1/|B|) Σ_b fix(b)²`, the number of orbits on `X × X`.
    pub fn burnside_pair_count(&self) -> usize {
        let total: usize = (0..self.group.order()).map(|b| self.fixed_points(b).pow(2)).sum();
        total / self.group.order()
    }

    /// Text form: `n <points>`, then either one generator per line in 1-based
    /// cycle notation, or a `table` block (rows of 0-based element indices,
    /// element 0 the identity) followed by an `act` block with one permutation
    /// per element. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, header) = lines.next().ok_or_else(|| Error::parse(1, "empty group file"))?;
        let n: usize = header
            .strip_prefix('n')
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::parse(first, format!("expected `n <points>`, got {header:?}")))?;
        let rest: Vec<(usize, &str)> = lines.collect();
        if rest.first().is_some_and(|(_, l)| *l == "table") {
            return Self::parse_table(n, &rest[1..]);
        }
        if rest.is_empty() {
            return Err(Error::parse(first, "no generators given"));
        }
        let gens = rest
            .iter()
            .map(|&(line, l)| parse_cycles(l, n).map_err(|m| Error::parse(line, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_permutations(n, &gens)
    }

    fn parse_table(n: usize, rest: &[(usize, &str)]) -> Result<Self> {
        let split = rest
            .iter()
            .position(|(_, l)| *l == "act")
            .ok_or_else(|| Error::parse(rest.last().map_or(1, |r| r.0), "missing `act` block"))?;
        let table = rest[..split]
            .iter()
            .map(|&(line, l)| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::parse(line, format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let order = table.len();
        if table.iter().flatten().any(|&e| e >= order) {
            return Err(Error::parse(rest[0].0, "table entry out of range"));
        }
        let group = FiniteGroup::from_table(table).map_err(|e| Error::parse(rest[0].0, e.to_string()))?;
        let act = rest[split + 1..]
            .iter()
            .map(|&(line, l)| parse_cycles(l, n).map_err(|m| Error::parse(line, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, act).map_err(|e| Error::parse(rest[split].0, e.to_string()))
    }

    /// Inverse of [`FiniteAction::parse`]; faithful actions are written with
    /// all elements as generators, others with a table.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.num_points());
        if self.is_faithful() {
            for p in &self.act[1..] {
                out.push_str(&format_cycles(p));
                out.push('\n');
            }
            if self.group.order() == 1 {
                out.push_str("()\n");
            }
            return out;
        }
        out.push_str("table\n");
        for row in self.group.table() {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out.push_str("act\n");
        for p in &self.act {
            out.push_str(&format_cycles(p));
            out.push('\n');
        }
        out
    }
}

impl Action for FiniteAction {
    type Point = usize;
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.group.mul(*a, *b)
    }
    fn inverse(&self, a: &usize) -> usize {
        self.group.inv(*a)
    }
    fn act(&self, g: &usize, x: &usize) -> usize {
        self.act[*g][*x]
    }
    fn elem_compatible(&self, g: &usize) -> bool {
        *g < self.group.order()
    }
    fn point_compatible(&self, x: &usize) -> bool {
        *x < self.num_points()
    }
    fn points(&self) -> Option<Vec<usize>> {
        Some((0..self.num_points()).collect())
    }
    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.group.order()).collect())
    }
}

fn subgroup_generated(group: &FiniteGroup, pred: impl Fn(usize) -> bool) -> Vec<usize> {
    let gens: Vec<usize> = (0..group.order()).filter(|&g| pred(g)).collect();
    group.closure(&gens)
}

/// The named actions used by tests, acceptance checks and the data directory.
pub fn bundled_actions() -> Vec<(&'static str, FiniteAction)> {
    let s3 = FiniteGroup::symmetric3();
    let c4 = FiniteGroup::cyclic(4);
    let c2 = FiniteGroup::cyclic(2);
    let d4 = FiniteGroup::dihedral8();
    let a3 = subgroup_generated(&s3, |g| s3.elem_order(g) == 3);
    let c4_sq = subgroup_generated(&c4, |g| c4.elem_order(g) == 2);
    let d4_center = d4.center();
    let d4_reflection = subgroup_generated(&d4, |g| g == 1);
    vec![
        ("S3-natural", FiniteAction::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("valid")),
        ("C2-regular", FiniteAction::regular(c2.clone())),
        ("C3-regular", FiniteAction::regular(FiniteGroup::cyclic(3))),
        ("C4-regular", FiniteAction::regular(c4.clone())),
        ("S3-regular", FiniteAction::regular(s3.clone())),
        ("D4-square", FiniteAction::from_permutations(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).expect("valid")),
        ("C2-fixed-plus-regular", FiniteAction::from_permutations(3, &[vec![0, 2, 1]]).expect("valid")),
        (
            "C4-halves-plus-fixed",
            FiniteAction::coset_action(c4.clone(), &[c4_sq, (0..4).collect()]).expect("valid"),
        ),
        ("C2-trivial-2", FiniteAction::trivial(c2, 2)),
        ("S3-trivial-1", FiniteAction::trivial(s3.clone(), 1)),
        ("S3-sign", FiniteAction::coset_action(s3, &[a3]).expect("valid")),
        (
            "D4-center-plus-reflection",
            FiniteAction::coset_action(d4, &[d4_center, d4_reflection]).expect("valid"),
        ),
    ]
}

pub fn bundled_action(name: &str) -> Option<FiniteAction> {
    bundled_actions().into_iter().find(|(n, _)| *n == name).map(|(_, a)| a)
}
