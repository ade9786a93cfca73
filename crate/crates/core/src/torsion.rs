//! Exact arithmetic in finite subgroups of `(Q/Z)^2`.
//!
//! The torsion of the abelian surface is modelled through the two coordinates
//! of its fixed decomposition; every point is a pair of reduced fractions in
//! `[0, 1)` and addition is componentwise modulo 1.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::smith_diagonal;

/// A reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational01 {
    numerator: u64,
    denominator: u64,
}

impl Rational01 {
    pub const ZERO: Rational01 = Rational01 { numerator: 0, denominator: 1 };

    /// `num / den` reduced modulo 1. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let den_i = den as i128;
        let num = (num as i128).rem_euclid(den_i);
        let g = num.gcd(&den_i);
        Rational01 { numerator: (num / g) as u64, denominator: (den_i / g) as u64 }
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn denominator(self) -> u64 {
        self.denominator
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    fn add(self, other: Self) -> Self {
        let l = self.denominator.lcm(&other.denominator);
        let a = self.numerator * (l / self.denominator) + other.numerator * (l / other.denominator);
        Rational01::new((a % l) as i64, l)
    }

    fn neg(self) -> Self {
        Rational01::new(-(self.numerator as i64), self.denominator)
    }

    fn scale(self, k: i64) -> Self {
        let den = self.denominator as i128;
        let num = (self.numerator as i128 * (k as i128).rem_euclid(den)).rem_euclid(den);
        Rational01::new(num as i64, self.denominator)
    }

    /// Numerator over a fixed common denominator `n` (which must be a multiple
    /// of this fraction's denominator).
    pub fn over(self, n: u64) -> u64 {
        debug_assert_eq!(n % self.denominator, 0);
        self.numerator * (n / self.denominator)
    }
}

impl fmt::Display for Rational01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// A torsion point, written in the coordinates of the fixed decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionPoint {
    pub c1: Rational01,
    pub c2: Rational01,
}

impl TorsionPoint {
    pub const ZERO: TorsionPoint = TorsionPoint { c1: Rational01::ZERO, c2: Rational01::ZERO };

    pub fn new(c1: Rational01, c2: Rational01) -> Self {
        TorsionPoint { c1, c2 }
    }

    /// The point `(a/n, b/n)`.
    pub fn from_ints(a: i64, b: i64, n: u64) -> Self {
        TorsionPoint { c1: Rational01::new(a, n), c2: Rational01::new(b, n) }
    }

    pub fn is_zero(self) -> bool {
        self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn scale(self, k: i64) -> Self {
        TorsionPoint { c1: self.c1.scale(k), c2: self.c2.scale(k) }
    }

    pub fn double(self) -> Self {
        self + self
    }

    /// Least `n >= 1` with `n * self = 0`.
    pub fn order(self) -> u64 {
        self.c1.denominator.lcm(&self.c2.denominator)
    }

    /// Integer coordinates `(a, b)` with `self = (a/n, b/n)`; requires `order | n`.
    pub fn ints_over(self, n: u64) -> (u64, u64) {
        (self.c1.over(n), self.c2.over(n))
    }

    /// One point `y` of the coordinate model with `2y = self`.
    pub fn some_half(self) -> Self {
        TorsionPoint {
            c1: Rational01::new(self.c1.numerator as i64, self.c1.denominator * 2),
            c2: Rational01::new(self.c2.numerator as i64, self.c2.denominator * 2),
        }
    }

    fn key(&self) -> (u64, u64, u64, u64) {
        (self.c1.denominator, self.c2.denominator, self.c1.numerator, self.c2.numerator)
    }
}

/// Canonical order: denominators lexicographically, then numerators.
impl Ord for TorsionPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for TorsionPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for TorsionPoint {
    type Output = TorsionPoint;
    fn add(self, o: Self) -> Self {
        TorsionPoint { c1: self.c1.add(o.c1), c2: self.c2.add(o.c2) }
    }
}

impl std::ops::Neg for TorsionPoint {
    type Output = TorsionPoint;
    fn neg(self) -> Self {
        TorsionPoint { c1: self.c1.neg(), c2: self.c2.neg() }
    }
}

impl std::ops::Sub for TorsionPoint {
    type Output = TorsionPoint;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c1, self.c2)
    }
}

/// Least `n >= 1` with `n * p = 0`.
pub fn point_order(p: TorsionPoint) -> u64 {
    p.order()
}

/// A finite subgroup of `(Q/Z)^2` together with its canonical element list.
///
/// Equality and hashing only look at the element set, never at the generators.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    generators: Vec<TorsionPoint>,
    elements: Vec<TorsionPoint>,
    invariant_factors: (u64, u64),
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FiniteSubgroup {}

impl std::hash::Hash for FiniteSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl FiniteSubgroup {
    pub fn trivial() -> Self {
        span(&[TorsionPoint::ZERO])
    }

    pub fn generators(&self) -> &[TorsionPoint] {
        &self.generators
    }

    /// Sorted in the canonical point order; always starts with `0`.
    pub fn elements(&self) -> &[TorsionPoint] {
        &self.elements
    }

    /// `(d1, d2)` with `d2 | d1` and `d1 * d2 = |G|`.
    pub fn invariant_factors(&self) -> (u64, u64) {
        self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.1 == 1
    }

    pub fn contains(&self, p: &TorsionPoint) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    /// Largest element order (the exponent of the group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.0
    }

    /// Elements killed by `n`.
    pub fn torsion(&self, n: u64) -> FiniteSubgroup {
        let pts: Vec<_> = self.elements.iter().copied().filter(|p| n % p.order() == 0).collect();
        span(&pts)
    }

    /// Sylow subgroup for the prime `p`.
    pub fn sylow(&self, p: u64) -> FiniteSubgroup {
        let pts: Vec<_> = self.elements.iter().copied().filter(|x| is_power_of(x.order(), p)).collect();
        span(&pts)
    }

    /// The subgroup `{a + b}` generated by two subgroups.
    pub fn join(&self, other: &FiniteSubgroup) -> FiniteSubgroup {
        let gens: Vec<_> = self.generators.iter().chain(other.generators.iter()).copied().collect();
        span(&gens)
    }

    pub fn intersection(&self, other: &FiniteSubgroup) -> FiniteSubgroup {
        let pts: Vec<_> = self.elements.iter().copied().filter(|p| other.contains(p)).collect();
        span(&pts)
    }

    /// Canonical representative of the coset `p + self`.
    pub fn coset_rep(&self, p: TorsionPoint) -> TorsionPoint {
        self.elements.iter().map(|&x| p + x).min().expect("subgroup is never empty")
    }

    /// A short generating list (at most two points) read off the canonical order.
    pub fn minimal_generators(&self) -> Vec<TorsionPoint> {
        if self.order() == 1 {
            return vec![TorsionPoint::ZERO];
        }
        let mut by_order: Vec<TorsionPoint> = self.elements.clone();
        by_order.sort_by(|a, b| b.order().cmp(&a.order()).then(a.cmp(b)));
        let first = by_order[0];
        if self.is_cyclic() {
            return vec![first];
        }
        let c = span(&[first]);
        let second = by_order
            .iter()
            .copied()
            .find(|&q| c.join(&span(&[q])).order() == self.order())
            .expect("rank-2 group is generated by two elements");
        vec![first, second]
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Smallest subgroup containing every generator.
pub fn span(gens: &[TorsionPoint]) -> FiniteSubgroup {
    let mut gens: Vec<TorsionPoint> = gens.to_vec();
    if gens.is_empty() {
        gens.push(TorsionPoint::ZERO);
    }
    let mut seen: HashSet<TorsionPoint> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(TorsionPoint::ZERO);
    queue.push_back(TorsionPoint::ZERO);
    while let Some(p) = queue.pop_front() {
        for &g in &gens {
            let q = p + g;
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort();
    let invariant_factors = invariant_factors_of(&gens);
    debug_assert_eq!(invariant_factors.0 * invariant_factors.1, elements.len() as u64);
    FiniteSubgroup { generators: gens, elements, invariant_factors }
}

/// Invariant factors from the Smith form of the generator lattice.
///
/// With `N` the common denominator, the subgroup is `Lambda / N Z^2` where
/// `Lambda` is spanned by the integer generator vectors and `N e_1, N e_2`.
fn invariant_factors_of(gens: &[TorsionPoint]) -> (u64, u64) {
    let n = gens.iter().fold(1u64, |acc, g| acc.lcm(&g.order()));
    let mut row1: Vec<i64> = Vec::with_capacity(gens.len() + 2);
    let mut row2: Vec<i64> = Vec::with_capacity(gens.len() + 2);
    for g in gens {
        let (a, b) = g.ints_over(n);
        row1.push(a as i64);
        row2.push(b as i64);
    }
    row1.extend([n as i64, 0]);
    row2.extend([0, n as i64]);
    let diag = smith_diagonal(&[row1, row2]);
    let (s1, s2) = (diag[0] as u64, diag[1] as u64);
    (n / s1, n / s2)
}

/// All subgroups of `ambient` with exactly `n` elements, in canonical order.
pub fn subgroups_of_order(ambient: &FiniteSubgroup, n: u64) -> Result<Vec<FiniteSubgroup>> {
    if n == 0 || ambient.order() % n != 0 {
        return Err(Error::domain(format!("{} does not divide the ambient order {}", n, ambient.order())));
    }
    Ok(all_subgroups(ambient).into_iter().filter(|g| g.order() == n).collect())
}

/// Every subgroup of `ambient`, sorted by order then canonical element list.
///
/// Subgroups of `(Q/Z)^2` have rank at most two, so every one of them is the
/// join of two cyclic subgroups.
pub fn all_subgroups(ambient: &FiniteSubgroup) -> Vec<FiniteSubgroup> {
    let mut cyclic: BTreeSet<Vec<TorsionPoint>> = BTreeSet::new();
    let mut cyclic_groups = Vec::new();
    for &p in ambient.elements() {
        let c = span(&[p]);
        if cyclic.insert(c.elements.clone()) {
            cyclic_groups.push(c);
        }
    }
    let mut found: BTreeSet<Vec<TorsionPoint>> = BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in cyclic_groups.iter().enumerate() {
        for b in &cyclic_groups[i..] {
            let j = a.join(b);
            if found.insert(j.elements.clone()) {
                out.push(j);
            }
        }
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    out
}

/// `{ y in ambient : 2y = x }`.
pub fn halvings_in(x: TorsionPoint, ambient: &FiniteSubgroup) -> Result<Vec<TorsionPoint>> {
    if !ambient.contains(&x) {
        return Err(Error::domain(format!("{x} is not in the ambient group")));
    }
    Ok(ambient.elements.iter().copied().filter(|y| y.double() == x).collect())
}

/// The full `n`-torsion `(1/n Z / Z)^2` of the coordinate model.
pub fn full_torsion(n: u64) -> FiniteSubgroup {
    span(&[TorsionPoint::from_ints(1, 0, n), TorsionPoint::from_ints(0, 1, n)])
}
