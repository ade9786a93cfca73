//! Small finite groups given by a Cayley table: subgroup lattices, conjugacy,
//! quotients and partitions into trivially intersecting subgroups.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Default refusal threshold for partition search.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 200;

/// A set of element indices stored as a bitset.
///
/// Ordered by cardinality, then by the sorted index list; this is the
/// canonical order used for every listing in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    len: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(len: usize) -> Self {
        ElementSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        ElementSet { len: self.len, words }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        ElementSet { len: self.len, words }
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count().cmp(&other.count()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A group on `0..n` with identity `0`.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validates the identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::domain("Cayley table must be square with entries in range"));
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&v| v as u32).collect();
        let g = |a: usize, b: usize| table[a * n + b] as usize;
        if (0..n).any(|a| g(0, a) != a || g(a, 0) != a) {
            return Err(Error::domain("element 0 is not the identity"));
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| g(a, b) == 0 && g(b, a) == 0)
                .ok_or_else(|| Error::domain(format!("element {a} has no inverse")))? as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = g(a, b);
                if (0..n).any(|c| g(ab, c) != g(a, g(b, c))) {
                    return Err(Error::domain("table is not associative"));
                }
            }
        }
        Ok(FiniteGroup { n, table, inverse })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut p = a;
        while p != 0 {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn trivial(&self) -> ElementSet {
        ElementSet::from_indices(self.n, [0])
    }

    pub fn whole(&self) -> ElementSet {
        ElementSet::from_indices(self.n, 0..self.n)
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = self.trivial();
        let mut frontier = vec![0usize];
        while let Some(p) = frontier.pop() {
            for &g in &gens {
                let q = self.mul(p, g);
                if set.insert(q) {
                    frontier.push(q);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, s: &ElementSet) -> bool {
        s.contains(0) && s.iter().all(|a| s.iter().all(|b| s.contains(self.mul(a, self.inv(b)))))
    }

    /// Every subgroup, in canonical order (ascending order, then indices).
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let cyclic: BTreeSet<ElementSet> = (0..self.n).map(|a| self.closure([a])).collect();
        let cyclic: Vec<ElementSet> = cyclic.into_iter().collect();
        let mut found: HashSet<ElementSet> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<ElementSet> = cyclic.clone();
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&h) {
                    continue;
                }
                let j = self.closure(h.iter().chain(c.iter()));
                if found.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort();
        out
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, h: &ElementSet, g: usize) -> ElementSet {
        let gi = self.inv(g);
        ElementSet::from_indices(self.n, h.iter().map(|a| self.mul(self.mul(g, a), gi)))
    }

    /// Least member of the conjugacy class of `h` in canonical order.
    pub fn conjugacy_rep(&self, h: &ElementSet) -> ElementSet {
        (0..self.n).map(|g| self.conjugate(h, g)).min().expect("group is nonempty")
    }

    pub fn is_normal(&self, h: &ElementSet) -> bool {
        (0..self.n).all(|g| self.conjugate(h, g) == *h)
    }

    /// `K / T` for `T` normal in `K`, with cosets ordered by least element.
    pub fn quotient(&self, k: &ElementSet, t: &ElementSet) -> Result<QuotientGroup> {
        if !self.is_subgroup(k) || !self.is_subgroup(t) || !t.is_subset(k) {
            return Err(Error::domain("quotient needs subgroups T <= K"));
        }
        if k.iter().any(|g| self.conjugate(t, g) != *t) {
            return Err(Error::domain("T is not normal in K"));
        }
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for a in k.iter() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(a);
            for b in t.iter() {
                coset_of[self.mul(a, b)] = idx;
            }
        }
        let m = reps.len();
        let rows = (0..m).map(|i| (0..m).map(|j| coset_of[self.mul(reps[i], reps[j])]).collect()).collect();
        let group = FiniteGroup::from_table(rows)?;
        Ok(QuotientGroup { group, coset_of, ambient: self.n })
    }
}

/// `K / T` together with the map back to subsets of the ambient group.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    group: FiniteGroup,
    coset_of: Vec<usize>,
    ambient: usize,
}

impl QuotientGroup {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Coset index of an ambient element of `K`.
    pub fn coset(&self, a: usize) -> Option<usize> {
        (self.coset_of[a] != usize::MAX).then_some(self.coset_of[a])
    }

    /// Full preimage in the ambient group of a set of cosets.
    pub fn preimage(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.ambient,
            (0..self.ambient).filter(|&a| self.coset(a).is_some_and(|c| s.contains(c))),
        )
    }
}

/// Subgroups `H_1, ..., H_t` covering the group with pairwise trivial meets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<ElementSet>,
}

impl Partition {
    /// Parts sorted by descending order, then canonically.
    pub fn new(mut parts: Vec<ElementSet>) -> Self {
        parts.sort_by(|a, b| b.count().cmp(&a.count()).then_with(|| a.cmp(b)));
        Partition { parts }
    }

    pub fn parts(&self) -> &[ElementSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks the defining conditions directly against `g`.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        let n = g.order();
        if self.parts.len() < 2 {
            return Err(Error::domain("a partition needs at least two subgroups"));
        }
        for p in &self.parts {
            if !g.is_subgroup(p) {
                return Err(Error::domain("partition part is not a subgroup"));
            }
            if p.count() == 1 || p.count() == n {
                return Err(Error::domain("partition parts must be nontrivial and proper"));
            }
        }
        for (i, a) in self.parts.iter().enumerate() {
            for b in &self.parts[i + 1..] {
                if a.intersection(b).count() != 1 {
                    return Err(Error::domain("partition parts must meet only in the identity"));
                }
            }
        }
        let cover = self.parts.iter().fold(ElementSet::empty(n), |acc, p| acc.union(p));
        if cover.count() != n {
            return Err(Error::domain("partition parts do not cover the group"));
        }
        Ok(())
    }
}

/// All partitions of `g`, refusing groups above `max_order`.
///
/// Backtracking always covers the least uncovered element next, so each
/// partition is produced exactly once.
pub fn find_partitions(g: &FiniteGroup, max_order: usize) -> Result<Vec<Partition>> {
    let n = g.order();
    if n > max_order {
        return Err(Error::BoundExceeded { order: n, bound: max_order });
    }
    let mut subs: Vec<ElementSet> = g.subgroups().into_iter().filter(|s| s.count() > 1 && s.count() < n).collect();
    subs.sort_by(|a, b| b.count().cmp(&a.count()).then_with(|| a.cmp(b)));
    let containing: Vec<Vec<usize>> =
        (0..n).map(|u| (0..subs.len()).filter(|&i| subs[i].contains(u)).collect()).collect();

    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut covered = g.trivial();
    search(n, &subs, &containing, &mut covered, &mut chosen, &mut out);
    let mut parts: Vec<Partition> = out
        .into_iter()
        .map(|idx: Vec<usize>| Partition::new(idx.into_iter().map(|i| subs[i].clone()).collect()))
        .collect();
    parts.sort();
    Ok(parts)
}

fn search(
    n: usize,
    subs: &[ElementSet],
    containing: &[Vec<usize>],
    covered: &mut ElementSet,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(u) = (1..n).find(|&u| !covered.contains(u)) else {
        if chosen.len() >= 2 {
            out.push(chosen.clone());
        }
        return;
    };
    for &i in &containing[u] {
        if subs[i].intersection(covered).count() != 1 {
            continue;
        }
        let saved = covered.clone();
        *covered = covered.union(&subs[i]);
        chosen.push(i);
        search(n, subs, containing, covered, chosen, out);
        chosen.pop();
        *covered = saved;
    }
}
