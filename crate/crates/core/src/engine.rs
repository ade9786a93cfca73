//! The automorphism group `<-1> ⋊ X` of a cover, genera of its quotients,
//! Kani-Rosen relations from partitions, and the resulting Jacobian splittings.
//!
//! Every conjugacy class of subgroups `S` gives an unknown `Phi_S`, the
//! isogeny class of `J(C/S)`. Relations come from partitions of `K/T` for all
//! `T <= X` and `K >= T`, from genus-0 quotients, and from inclusions
//! `S <= S'` of equal genus. The unknowns are reduced modulo these relations
//! with exact rational row reduction, and the splitting of `J(C)` is read off
//! as a sum of indecomposable effective classes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{involution_quotient_genus, CoverCurve};
use crate::error::{Error, Result};
use crate::group::{find_partitions, ElementSet, FiniteGroup, Partition, DEFAULT_MAX_GROUP_ORDER};
use crate::isogeny::{IsogenyExpression, IsogenyFactor, Relation};
use crate::torsion::{span, FiniteSubgroup, TorsionPoint};

/// `t_shift` for sign `+1`, `[-1] ∘ t_shift` for sign `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutElement {
    pub sign: i8,
    pub shift: TorsionPoint,
}

impl AutElement {
    pub const IDENTITY: AutElement = AutElement { sign: 1, shift: TorsionPoint::ZERO };

    pub fn translation(x: TorsionPoint) -> Self {
        AutElement { sign: 1, shift: x }
    }

    pub fn reflection(x: TorsionPoint) -> Self {
        AutElement { sign: -1, shift: x }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: AutElement) -> AutElement {
        let carried = if other.sign > 0 { self.shift } else { -self.shift };
        AutElement { sign: self.sign * other.sign, shift: other.shift + carried }
    }

    pub fn apply(self, p: TorsionPoint) -> TorsionPoint {
        if self.sign > 0 {
            p + self.shift
        } else {
            -(p + self.shift)
        }
    }
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sign > 0, self.shift.is_zero()) {
            (true, true) => write!(f, "id"),
            (true, false) => write!(f, "t{}", self.shift),
            (false, true) => write!(f, "-1"),
            (false, false) => write!(f, "-1.t{}", self.shift),
        }
    }
}

/// A conjugacy class of subgroups of the automorphism group.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub rep: ElementSet,
    pub label: String,
    pub size: usize,
    pub order: usize,
    pub translation_order: usize,
    pub genus: u64,
}

/// `<-1> ⋊ X` acting on `C`, elements indexed as translations in the
/// canonical order of `X` followed by the `[-1] ∘ t_x` in the same order.
#[derive(Debug, Clone)]
pub struct AutGroup {
    curve: CoverCurve,
    elements: Vec<AutElement>,
    index: HashMap<AutElement, usize>,
    group: FiniteGroup,
    fix: Vec<u64>,
    classes: Vec<SubgroupClass>,
    class_of: HashMap<ElementSet, usize>,
}

pub fn automorphism_group(curve: &CoverCurve) -> Result<AutGroup> {
    let xs = curve.subgroup().elements();
    let d = xs.len();
    let elements: Vec<AutElement> =
        xs.iter().map(|&x| AutElement::translation(x)).chain(xs.iter().map(|&x| AutElement::reflection(x))).collect();
    let index: HashMap<AutElement, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let rows = elements.iter().map(|a| elements.iter().map(|b| index[&a.compose(*b)]).collect()).collect();
    let group = FiniteGroup::from_table(rows)?;
    let fix = curve.fix_table()?.into_iter().map(|r| r.count).collect::<Vec<_>>();
    debug_assert_eq!(fix.len(), d);

    let mut aut =
        AutGroup { curve: curve.clone(), elements, index, group, fix, classes: Vec::new(), class_of: HashMap::new() };
    let mut reps: Vec<(ElementSet, Vec<ElementSet>)> = Vec::new();
    let mut seen: HashMap<ElementSet, usize> = HashMap::new();
    for s in aut.group.subgroups() {
        let rep = aut.group.conjugacy_rep(&s);
        let i = *seen.entry(rep.clone()).or_insert_with(|| {
            reps.push((rep.clone(), Vec::new()));
            reps.len() - 1
        });
        reps[i].1.push(s);
    }
    reps.sort_by(|a, b| a.0.cmp(&b.0));
    for (ci, (rep, members)) in reps.into_iter().enumerate() {
        let genus = aut.genus_of(&rep)?;
        let label = aut.label_of(&rep);
        let translation_order = rep.iter().filter(|&i| i < d).count();
        for m in &members {
            aut.class_of.insert(m.clone(), ci);
        }
        aut.classes.push(SubgroupClass {
            order: rep.count(),
            size: members.len(),
            rep,
            label,
            translation_order,
            genus,
        });
    }
    Ok(aut)
}

impl AutGroup {
    pub fn curve(&self) -> &CoverCurve {
        &self.curve
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[AutElement] {
        &self.elements
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn index_of(&self, e: AutElement) -> Option<usize> {
        self.index.get(&e).copied()
    }

    /// Subgroup generated by the given automorphisms; they must lie in the group.
    pub fn subgroup(&self, gens: &[AutElement]) -> Result<ElementSet> {
        let idx = gens
            .iter()
            .map(|&g| self.index_of(g).ok_or_else(|| Error::domain(format!("{g} is not in <-1> x| X"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.group.closure(idx))
    }

    /// The translation subgroup `X`.
    pub fn translations(&self) -> ElementSet {
        ElementSet::from_indices(self.order(), 0..self.order() / 2)
    }

    /// Fixed points on `C` of a single automorphism (`0` for nontrivial translations).
    pub fn fixed_points(&self, i: usize) -> Option<u64> {
        let d = self.order() / 2;
        if i == 0 {
            None
        } else if i < d {
            Some(0)
        } else {
            Some(self.fix[i - d])
        }
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class_index(&self, h: &ElementSet) -> Result<usize> {
        self.class_of.get(h).copied().ok_or_else(|| Error::domain("not a subgroup of the automorphism group"))
    }

    /// Translation part of a subgroup as a subgroup of `X`.
    pub fn translation_subgroup(&self, h: &ElementSet) -> FiniteSubgroup {
        let pts: Vec<TorsionPoint> =
            h.iter().filter(|&i| self.elements[i].sign > 0).map(|i| self.elements[i].shift).collect();
        span(&pts)
    }

    /// The isogeny factor `J(C/H)`, identical for conjugate subgroups.
    pub fn factor(&self, h: &ElementSet) -> Result<IsogenyFactor> {
        Ok(self.class_factor(self.class_index(h)?))
    }

    fn class_factor(&self, ci: usize) -> IsogenyFactor {
        let c = &self.classes[ci];
        if c.rep == self.translations() {
            IsogenyFactor::surface("A")
        } else {
            IsogenyFactor::jac_quotient(&c.label, c.genus)
        }
    }

    /// Riemann-Hurwitz for the Galois cover `C -> C/H`; translations act freely.
    fn genus_of(&self, h: &ElementSet) -> Result<u64> {
        let d = (self.order() / 2) as u64;
        let t = h.iter().filter(|&i| i < d as usize).count() as u64;
        let base = d / t + 1;
        let fixed: u64 = h.iter().filter_map(|i| self.fixed_points(i)).sum();
        if h.count() as u64 == t {
            return Ok(base);
        }
        if fixed % t != 0 {
            return Err(Error::InconsistentRamification { genus: base, fixed_points: fixed });
        }
        involution_quotient_genus(base, fixed / t)
    }

    fn label_of(&self, h: &ElementSet) -> String {
        if h.count() == 1 {
            return "C".into();
        }
        let mut gens = Vec::new();
        let mut reached = self.group.trivial();
        for i in h.iter() {
            if !reached.contains(i) {
                gens.push(i);
                reached = self.group.closure(gens.iter().copied());
            }
        }
        let names: Vec<String> = gens.iter().map(|&i| self.elements[i].to_string()).collect();
        format!("C/<{}>", names.join(","))
    }

    /// All partitions of the whole group.
    pub fn partitions(&self, max_order: usize) -> Result<Vec<Partition>> {
        find_partitions(&self.group, max_order)
    }

    /// `X ∪ <[-1]∘t_x> ∪ ...` over all `x` in `X`.
    pub fn canonical_partition(&self) -> Option<Partition> {
        let d = self.order() / 2;
        if d < 2 {
            return None;
        }
        let mut parts = vec![self.translations()];
        parts.extend((d..2 * d).map(|i| self.group.closure([i])));
        Some(Partition::new(parts))
    }
}

/// Genus of `C/H` and the conjugacy-canonical label of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientGenus {
    pub genus: u64,
    pub id: String,
}

pub fn subgroup_quotient_genus(aut: &AutGroup, h: &ElementSet) -> Result<QuotientGenus> {
    let c = &aut.classes[aut.class_index(h)?];
    Ok(QuotientGenus { genus: c.genus, id: c.label.clone() })
}

/// Partitions of an abelian subgroup of `(Q/Z)^2`, returned as subgroups.
pub fn subgroup_partitions(x: &FiniteSubgroup, max_order: usize) -> Result<Vec<Vec<FiniteSubgroup>>> {
    let els = x.elements();
    let idx = |p: TorsionPoint| els.binary_search(&p).expect("closed under addition");
    let rows = els.iter().map(|&a| els.iter().map(|&b| idx(a + b)).collect()).collect();
    let g = FiniteGroup::from_table(rows)?;
    Ok(find_partitions(&g, max_order)?
        .into_iter()
        .map(|p| p.parts().iter().map(|s| span(&s.iter().map(|i| els[i]).collect::<Vec<_>>())).collect())
        .collect())
}

/// Kani-Rosen for `K/T` acting on `C/T`:
/// `J(C/T)^{t-1} x J(C/K)^{|K/T|} ~ prod J(C/H_i)^{|H_i/T|}`.
pub fn relation_for_setting(aut: &AutGroup, t: &ElementSet, k: &ElementSet, parts: &[ElementSet]) -> Result<Relation> {
    let q = aut.group.quotient(k, t)?;
    let images: Vec<ElementSet> = parts
        .iter()
        .map(|h| {
            if !t.is_subset(h) || !h.is_subset(k) {
                return Err(Error::domain("partition parts must lie between T and K"));
            }
            Ok(ElementSet::from_indices(q.group().order(), h.iter().filter_map(|i| q.coset(i))))
        })
        .collect::<Result<_>>()?;
    Partition::new(images).validate(q.group())?;
    let tn = t.count() as u64;
    let lhs =
        IsogenyExpression::single(aut.factor(t)?, parts.len() as u64 - 1).with(aut.factor(k)?, k.count() as u64 / tn);
    let mut rhs = IsogenyExpression::new();
    for h in parts {
        rhs.add(aut.factor(h)?, h.count() as u64 / tn);
    }
    Ok(Relation::new(lhs, rhs))
}

/// Kani-Rosen for a partition of the whole automorphism group.
pub fn relation_from_partition(aut: &AutGroup, partition: &Partition) -> Result<Relation> {
    let g = &aut.group;
    relation_for_setting(aut, &g.trivial(), &g.whole(), partition.parts())
}

#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    /// Treat `A` as isogenous to a product of elliptic curves for the verdict.
    pub assume_a_split: bool,
    pub max_group_order: usize,
    /// Worker threads for relation gathering; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { assume_a_split: false, max_group_order: DEFAULT_MAX_GROUP_ORDER, jobs: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CompletelyDecomposable,
    /// Every factor is elliptic except `A`, which the caller assumed splits.
    CompletelyDecomposableAssumingA,
    NotEstablished,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CompletelyDecomposable => "completely decomposable",
            Verdict::CompletelyDecomposableAssumingA => "completely decomposable (assuming A splits)",
            Verdict::NotEstablished => "complete decomposability not established",
        })
    }
}

/// One Kani-Rosen relation with the setting it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KaniRosenRecord {
    /// Label of `T`, the translations divided out first.
    pub base: String,
    /// Label of `K`.
    pub group: String,
    pub parts: Vec<String>,
    pub named: Option<String>,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSplit {
    pub factor: IsogenyFactor,
    pub split: IsogenyExpression,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub genus: u64,
    /// The relation from `X ∪ <[-1]∘t_x> ∪ ...`, reduced.
    pub primary: Option<Relation>,
    /// `J(C)` as a sum of indecomposable classes with the most factors.
    pub split: IsogenyExpression,
    pub atoms: Vec<IsogenyFactor>,
    pub quotient_splits: Vec<QuotientSplit>,
    pub relations: Vec<KaniRosenRecord>,
    pub verdict: Verdict,
    pub assumptions: Vec<String>,
}

pub const CANONICAL_PARTITION: &str = "generalized-dihedral";

pub fn decompose(curve: &CoverCurve, opts: &DecomposeOptions) -> Result<Decomposition> {
    let aut = automorphism_group(curve)?;
    decompose_group(&aut, opts)
}

pub fn decompose_group(aut: &AutGroup, opts: &DecomposeOptions) -> Result<Decomposition> {
    if aut.order() > opts.max_group_order {
        return Err(Error::BoundExceeded { order: aut.order(), bound: opts.max_group_order });
    }
    let relations = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?
            .install(|| gather_relations(aut, opts.max_group_order))?,
        None => gather_relations(aut, opts.max_group_order)?,
    };
    let solver = Solver::new(aut, &relations)?;

    let genus = aut.curve().genus();
    let trivial = aut.class_index(&aut.group().trivial())?;
    let split = solver.split_of_class(trivial)?;
    if split.dim() != genus {
        return Err(Error::invariant(format!("split of J(C) has dimension {} != {genus}", split.dim())));
    }
    let quotient_splits = (0..aut.classes.len())
        .filter(|&ci| ci != trivial && aut.classes[ci].genus > 0)
        .map(|ci| Ok(QuotientSplit { factor: aut.class_factor(ci), split: solver.split_of_class(ci)? }))
        .collect::<Result<Vec<_>>>()?;

    let primary = match aut.canonical_partition() {
        Some(p) => Some(relation_from_partition(aut, &p)?.reduced()),
        None => None,
    };

    let a = IsogenyFactor::surface("A");
    let big: Vec<&IsogenyFactor> = split.terms().filter(|(f, _)| f.dim() > 1).map(|(f, _)| f).collect();
    let verdict = if big.is_empty() {
        Verdict::CompletelyDecomposable
    } else if opts.assume_a_split && big.iter().all(|f| **f == a) {
        Verdict::CompletelyDecomposableAssumingA
    } else {
        Verdict::NotEstablished
    };

    let mut assumptions = vec![
        "H is smooth and A is general: quotients by non-conjugate subgroups are independent factors unless a relation identifies them".to_string(),
    ];
    let elliptic: Vec<&IsogenyFactor> = split.terms().filter(|(f, _)| f.dim() == 1).map(|(f, _)| f).collect();
    for (i, e) in elliptic.iter().enumerate() {
        for e2 in &elliptic[i + 1..] {
            assumptions.push(format!("{e} and {e2} are taken to be non-isogenous"));
        }
    }
    for (f, _) in split.terms() {
        if let IsogenyFactor::Remainder { dim, .. } = f {
            assumptions
                .push(format!("{f} is the complement of a quotient Jacobian, known only by its dimension {dim}"));
        }
    }
    if verdict == Verdict::CompletelyDecomposableAssumingA {
        assumptions.push("A is assumed isogenous to a product of elliptic curves".into());
    }

    Ok(Decomposition {
        genus,
        primary,
        split,
        atoms: solver.atoms.iter().map(|a| a.factor.clone()).collect(),
        quotient_splits,
        relations,
        verdict,
        assumptions,
    })
}

/// Every relation from every `(T, K, partition of K/T)`, deterministic order.
fn gather_relations(aut: &AutGroup, max_order: usize) -> Result<Vec<KaniRosenRecord>> {
    let trans = aut.translations();
    let mut settings = Vec::new();
    for (ti, t) in aut.classes.iter().enumerate() {
        if !t.rep.is_subset(&trans) {
            continue;
        }
        for (ki, k) in aut.classes.iter().enumerate() {
            if ki != ti && t.rep.is_subset(&k.rep) && k.order / t.order >= 4 {
                settings.push((ti, ki));
            }
        }
    }
    let canonical = aut.canonical_partition();
    let batches: Vec<Result<Vec<KaniRosenRecord>>> = settings
        .par_iter()
        .map(|&(ti, ki)| {
            let t = &aut.classes[ti].rep;
            let k = &aut.classes[ki].rep;
            let q = aut.group.quotient(k, t)?;
            let mut out = Vec::new();
            for p in find_partitions(q.group(), max_order)? {
                let parts: Vec<ElementSet> = p.parts().iter().map(|s| q.preimage(s)).collect();
                let relation = relation_for_setting(aut, t, k, &parts)?;
                let lifted = Partition::new(parts.clone());
                let named = (ti == 0 && Some(&lifted) == canonical.as_ref()).then(|| CANONICAL_PARTITION.to_string());
                out.push(KaniRosenRecord {
                    base: aut.classes[ti].label.clone(),
                    group: aut.classes[ki].label.clone(),
                    parts: lifted.parts().iter().map(|h| aut.classes[aut.class_of[h]].label.clone()).collect(),
                    named,
                    relation,
                });
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for b in batches {
        records.extend(b?);
    }
    if let Some(p) = canonical {
        if !records.iter().any(|r| r.named.is_some()) {
            let g = aut.group();
            records.push(KaniRosenRecord {
                base: "C".into(),
                group: aut.classes[aut.class_index(&g.whole())?].label.clone(),
                parts: p.parts().iter().map(|h| aut.classes[aut.class_of[h]].label.clone()).collect(),
                named: Some(CANONICAL_PARTITION.into()),
                relation: relation_from_partition(aut, &p)?,
            });
        }
    }
    for r in &records {
        if !r.relation.is_balanced() {
            return Err(Error::invariant(format!("unbalanced relation {}", r.relation)));
        }
    }
    Ok(records)
}

type Vector = Vec<BigRational>;

/// Reduced row echelon basis of the relation space.
struct RowSpace {
    rows: Vec<(usize, Vector)>,
}

impl RowSpace {
    fn reduce(&self, v: &Vector) -> Vector {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &Vector) {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let lead = v[p].clone();
        let v: Vector = v.iter().map(|x| x / &lead).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((p, v));
    }
}

struct Atom {
    vector: Vector,
    factor: IsogenyFactor,
}

struct Solver {
    space: RowSpace,
    genera: Vec<BigRational>,
    unit: Vec<Vector>,
    atoms: Vec<Atom>,
}

impl Solver {
    fn new(aut: &AutGroup, records: &[KaniRosenRecord]) -> Result<Self> {
        let classes = &aut.classes;
        let n = classes.len();
        let zero = || vec![BigRational::zero(); n];
        let int = |k: i64| BigRational::from_integer(BigInt::from(k));
        let unit: Vec<Vector> = (0..n)
            .map(|i| {
                let mut v = zero();
                v[i] = BigRational::one();
                v
            })
            .collect();
        // genus-0 classes all share the Trivial factor and are pinned to zero below
        let factor_class: HashMap<IsogenyFactor, usize> =
            (0..n).map(|i| (aut.class_factor(i), i)).filter(|(f, _)| *f != IsogenyFactor::Trivial).collect();

        let mut space = RowSpace { rows: Vec::new() };
        let mut seen: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
        for r in records {
            let mut v = vec![0i64; n];
            for (f, m) in r.relation.lhs.terms() {
                if let Some(&i) = factor_class.get(f) {
                    v[i] += m as i64;
                }
            }
            for (f, m) in r.relation.rhs.terms() {
                if let Some(&i) = factor_class.get(f) {
                    v[i] -= m as i64;
                }
            }
            let key: Vec<(usize, i64)> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
            if seen.insert(key) {
                space.insert(&v.iter().map(|&c| int(c)).collect());
            }
        }
        // genus-0 quotients (Trivial factors are shared, so they are pinned here)
        for (i, c) in classes.iter().enumerate() {
            if c.genus == 0 {
                space.insert(&unit[i]);
            }
        }
        let contained = containment(aut);
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                if i != j && contained[i][j] && ci.genus == cj.genus {
                    let v = unit[i].iter().zip(&unit[j]).map(|(a, b)| a - b).collect();
                    space.insert(&v);
                }
            }
        }
        let genera: Vec<BigRational> = classes.iter().map(|c| int(c.genus as i64)).collect();

        // effective classes: quotient Jacobians first, then complements
        struct Candidate {
            vector: Vector,
            dim: u64,
            priority: u8,
            factor: IsogenyFactor,
        }
        let mut candidates = Vec::new();
        for (i, c) in classes.iter().enumerate() {
            if c.genus > 0 {
                let factor = aut.class_factor(i);
                let priority = if matches!(factor, IsogenyFactor::Surface { .. }) { 0 } else { 1 };
                candidates.push(Candidate { vector: space.reduce(&unit[i]), dim: c.genus, priority, factor });
            }
        }
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                if contained[i][j] && ci.genus > cj.genus && cj.genus > 0 {
                    let v: Vector = unit[i].iter().zip(&unit[j]).map(|(a, b)| a - b).collect();
                    candidates.push(Candidate {
                        vector: space.reduce(&v),
                        dim: ci.genus - cj.genus,
                        priority: 2,
                        factor: IsogenyFactor::Remainder {
                            label: format!("{} : {}", ci.label, cj.label),
                            dim: ci.genus - cj.genus,
                        },
                    });
                }
            }
        }
        let mut unique: Vec<Candidate> = Vec::new();
        let mut index: HashMap<Vector, usize> = HashMap::new();
        for c in candidates {
            if c.vector.iter().all(|x| x.is_zero()) {
                return Err(Error::invariant(format!("{} of dimension {} reduces to zero", c.factor, c.dim)));
            }
            match index.get(&c.vector) {
                Some(&k) if unique[k].priority <= c.priority => {}
                Some(&k) => unique[k] = c,
                None => {
                    index.insert(c.vector.clone(), unique.len());
                    unique.push(c);
                }
            }
        }
        // stable: ties keep quotient-before-remainder and canonical class order
        unique.sort_by_key(|c| (c.dim, c.priority));

        let mut solver = Solver { space, genera, unit, atoms: Vec::new() };
        for c in unique {
            let dim_check = solver.dim(&c.vector);
            if dim_check != BigRational::from_integer(BigInt::from(c.dim)) {
                return Err(Error::invariant(format!("{} has inconsistent dimension", c.factor)));
            }
            let decomposable = solver.best(&c.vector).is_some_and(|counts| counts.iter().sum::<u64>() >= 2);
            if !decomposable {
                solver.atoms.push(Atom { vector: c.vector, factor: c.factor });
            }
        }
        Ok(solver)
    }

    fn dim(&self, v: &Vector) -> BigRational {
        v.iter().zip(&self.genera).map(|(a, g)| a * g).sum()
    }

    /// Nonnegative integer combination of atoms equal to `target` with the
    /// most factors; ties prefer earlier atoms.
    fn best(&self, target: &Vector) -> Option<Vec<u64>> {
        let budget = self.dim(target);
        if !budget.is_integer() || budget.is_negative() {
            return None;
        }
        let budget: u64 = budget.to_integer().try_into().ok()?;
        let dims: Vec<u64> =
            self.atoms.iter().map(|a| self.dim(&a.vector).to_integer().try_into().unwrap_or(u64::MAX)).collect();
        solve_columns(&self.atoms, &dims, target, budget)
    }

    fn split_of_class(&self, ci: usize) -> Result<IsogenyExpression> {
        let target = self.space.reduce(&self.unit[ci]);
        let counts =
            self.best(&target).ok_or_else(|| Error::invariant("a quotient Jacobian has no splitting into atoms"))?;
        let mut e = IsogenyExpression::new();
        for (a, m) in self.atoms.iter().zip(counts) {
            e.add(a.factor.clone(), m);
        }
        Ok(e)
    }
}

/// Solves `sum c_i atom_i = target` over nonnegative integers with
/// `sum c_i dim_i = budget`: eliminate, then enumerate the free variables.
fn solve_columns(atoms: &[Atom], dims: &[u64], target: &Vector, budget: u64) -> Option<Vec<u64>> {
    let k = atoms.len();
    let m = target.len();
    let mut rows: Vec<Vector> =
        (0..m).map(|r| atoms.iter().map(|a| a.vector[r].clone()).chain([target[r].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut best: Option<Vec<u64>> = None;
    let mut assignment = vec![0u64; free.len()];
    enumerate_free(0, budget, &free, dims, &mut assignment, &mut |assignment| {
        let mut counts = vec![0u64; k];
        for (&f, &v) in free.iter().zip(assignment) {
            counts[f] = v;
        }
        for (i, &c) in pivots.iter().enumerate() {
            let mut v = rows[i][k].clone();
            for (&f, &a) in free.iter().zip(assignment) {
                if a > 0 {
                    v -= &rows[i][f] * BigRational::from_integer(BigInt::from(a));
                }
            }
            if v.is_negative() || !v.is_integer() {
                return;
            }
            counts[c] = v.to_integer().try_into().unwrap_or(u64::MAX);
        }
        let better = match &best {
            None => true,
            Some(b) => {
                let (n, nb) = (counts.iter().sum::<u64>(), b.iter().sum::<u64>());
                n > nb || (n == nb && counts > *b)
            }
        };
        if better {
            best = Some(counts);
        }
    });
    best
}

fn enumerate_free(
    i: usize,
    budget: u64,
    free: &[usize],
    dims: &[u64],
    assignment: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if i == free.len() {
        visit(assignment);
        return;
    }
    let d = dims[free[i]].max(1);
    for v in 0..=budget / d {
        assignment[i] = v;
        enumerate_free(i + 1, budget - v * d, free, dims, assignment, visit);
    }
    assignment[i] = 0;
}

/// `contained[i][j]`: some conjugate of class `i` lies in the representative of class `j`.
fn containment(aut: &AutGroup) -> Vec<Vec<bool>> {
    let g = aut.group();
    let conjugates: Vec<BTreeSet<ElementSet>> =
        aut.classes.iter().map(|c| (0..g.order()).map(|x| g.conjugate(&c.rep, x)).collect()).collect();
    aut.classes
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            aut.classes
                .iter()
                .map(|cj| {
                    ci.order < cj.order
                        && cj.order % ci.order == 0
                        && conjugates[i].iter().any(|s| s.is_subset(&cj.rep))
                })
                .collect()
        })
        .collect()
}

/// An elliptic quotient `C -> C/K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticQuotient {
    pub subgroup: String,
    pub degree: u64,
    pub contains_x1: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCoverReport {
    pub d: u64,
    pub j: u64,
    pub k: u64,
    pub x1: TorsionPoint,
    pub x2: TorsionPoint,
    /// Label of `<t_x1>`; the intermediate curve is `C/<t_x1>`.
    pub intermediate: String,
    pub intermediate_genus: u64,
    pub intermediate_split: IsogenyExpression,
    pub elliptic_factor: IsogenyFactor,
    /// An elliptic quotient of degree `d`, preferring one through `C/<t_x1>`.
    pub cover: EllipticQuotient,
    /// The largest elliptic quotient factoring through `C/<t_x1>`.
    pub via_intermediate: Option<EllipticQuotient>,
    /// Dimension of the complement of `J(C/<t_x1>)` in `J(C)`.
    pub prym_dim: u64,
}

/// `X = <x1> + <x2>` with `x1` of order `k` and `x2` of order `j`, `d = jk`.
pub fn elliptic_cover_report(d: u64, j: u64, k: u64, opts: &DecomposeOptions) -> Result<EllipticCoverReport> {
    if !(2..=4).contains(&j) || k == 0 || j * k != d {
        return Err(Error::domain(format!("need j in {{2,3,4}} and d = j k, got d = {d}, j = {j}, k = {k}")));
    }
    let x1 = TorsionPoint::from_ints(j as i64, 0, d);
    let x2 = TorsionPoint::from_ints(0, k as i64, d);
    let curve = CoverCurve::new(d, &[(j as i64, 0), (0, k as i64)])?;
    let aut = automorphism_group(&curve)?;
    let dec = decompose_group(&aut, opts)?;
    let tx1 = aut.subgroup(&[AutElement::translation(x1)])?;
    let ci = aut.class_index(&tx1)?;
    let class = &aut.classes[ci];
    let intermediate_split = if class.order == 1 {
        dec.split.clone()
    } else {
        let f = aut.class_factor(ci);
        dec.quotient_splits
            .iter()
            .find(|q| q.factor == f)
            .map(|q| q.split.clone())
            .ok_or_else(|| Error::invariant("intermediate quotient has no splitting"))?
    };
    let elliptic_factor = intermediate_split
        .terms()
        .map(|(f, _)| f.clone())
        .find(|f| f.dim() == 1)
        .ok_or_else(|| Error::domain("the intermediate Jacobian has no elliptic factor"))?;

    let elliptic: Vec<(ElementSet, bool)> = aut
        .group()
        .subgroups()
        .into_iter()
        .filter(|h| aut.classes[aut.class_of[h]].genus == 1)
        .map(|h| {
            let through = tx1.is_subset(&h);
            (h, through)
        })
        .collect();
    let describe = |h: &ElementSet, through: bool| EllipticQuotient {
        subgroup: aut.label_of(h),
        degree: h.count() as u64,
        contains_x1: through,
    };
    let cover = elliptic
        .iter()
        .filter(|(h, _)| h.count() as u64 == d)
        .min_by_key(|(h, through)| (!through, (*h).clone()))
        .map(|(h, t)| describe(h, *t))
        .ok_or_else(|| Error::domain(format!("no elliptic quotient of degree {d}")))?;
    let via_intermediate = elliptic
        .iter()
        .filter(|(_, through)| *through)
        .min_by(|(a, _), (b, _)| b.count().cmp(&a.count()).then_with(|| a.cmp(b)))
        .map(|(h, t)| describe(h, *t));

    Ok(EllipticCoverReport {
        d,
        j,
        k,
        x1,
        x2,
        intermediate: class.label.clone(),
        intermediate_genus: class.genus,
        intermediate_split,
        elliptic_factor,
        cover,
        via_intermediate,
        prym_dim: curve.genus() - class.genus,
    })
}
