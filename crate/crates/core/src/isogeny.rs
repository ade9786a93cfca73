//! Formal products of abelian varieties up to isogeny.
//!
//! Isogeny classes form a free commutative monoid on the simple classes, so
//! common factors cancel and exact powers have unique roots.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsogenyFactor {
    /// The abelian surface `A` (or a named quotient surface).
    Surface {
        label: String,
    },
    /// `J(C/H)` of genus at least 2; `id` names the conjugacy class of `H`.
    JacQuotient {
        id: String,
        genus: u64,
    },
    /// A genus-1 quotient curve.
    Elliptic {
        label: String,
    },
    Trivial,
    /// Complement of one Jacobian inside another, known only by dimension.
    Remainder {
        label: String,
        dim: u64,
    },
}

impl IsogenyFactor {
    /// Normalizes genus 0 to [`IsogenyFactor::Trivial`] and genus 1 to
    /// [`IsogenyFactor::Elliptic`].
    pub fn jac_quotient(id: impl Into<String>, genus: u64) -> Self {
        match genus {
            0 => IsogenyFactor::Trivial,
            1 => IsogenyFactor::Elliptic { label: id.into() },
            _ => IsogenyFactor::JacQuotient { id: id.into(), genus },
        }
    }

    pub fn surface(label: impl Into<String>) -> Self {
        IsogenyFactor::Surface { label: label.into() }
    }

    pub fn dim(&self) -> u64 {
        match self {
            IsogenyFactor::Surface { .. } => 2,
            IsogenyFactor::JacQuotient { genus, .. } => *genus,
            IsogenyFactor::Elliptic { .. } => 1,
            IsogenyFactor::Trivial => 0,
            IsogenyFactor::Remainder { dim, .. } => *dim,
        }
    }
}

impl fmt::Display for IsogenyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsogenyFactor::Surface { label } => write!(f, "{label}"),
            IsogenyFactor::JacQuotient { id, .. } => write!(f, "J({id})"),
            IsogenyFactor::Elliptic { label } => write!(f, "E({label})"),
            IsogenyFactor::Trivial => write!(f, "0"),
            IsogenyFactor::Remainder { label, dim } => write!(f, "R{dim}[{label}]"),
        }
    }
}

/// A multiset of factors. Zero multiplicities are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsogenyExpression {
    terms: BTreeMap<IsogenyFactor, u64>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    factor: IsogenyFactor,
    multiplicity: u64,
}

impl Serialize for IsogenyExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self.terms.iter().map(|(f, &m)| Term { factor: f.clone(), multiplicity: m }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsogenyExpression {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut e = IsogenyExpression::new();
        for t in terms {
            e.add(t.factor, t.multiplicity);
        }
        Ok(e)
    }
}

impl IsogenyExpression {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(f: IsogenyFactor, m: u64) -> Self {
        let mut e = Self::new();
        e.add(f, m);
        e
    }

    pub fn add(&mut self, f: IsogenyFactor, m: u64) {
        if m > 0 {
            *self.terms.entry(f).or_insert(0) += m;
        }
    }

    pub fn with(mut self, f: IsogenyFactor, m: u64) -> Self {
        self.add(f, m);
        self
    }

    pub fn multiplicity(&self, f: &IsogenyFactor) -> u64 {
        self.terms.get(f).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsogenyFactor, u64)> {
        self.terms.iter().map(|(f, &m)| (f, m))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> u64 {
        self.terms.iter().map(|(f, m)| f.dim() * m).sum()
    }

    /// Number of factors counted with multiplicity.
    pub fn factor_count(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn drop_trivial(&mut self) {
        self.terms.retain(|f, _| f.dim() > 0);
    }

    fn gcd(&self) -> u64 {
        self.terms.values().fold(0, |g, &m| g.gcd(&m))
    }

    fn divide(&mut self, k: u64) {
        for m in self.terms.values_mut() {
            debug_assert_eq!(*m % k, 0);
            *m /= k;
        }
    }
}

impl fmt::Display for IsogenyExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (fac, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            if *m == 1 {
                write!(f, "{fac}")?;
            } else {
                write!(f, "{fac}^{m}")?;
            }
        }
        Ok(())
    }
}

/// `lhs ~ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: IsogenyExpression,
    pub rhs: IsogenyExpression,
}

impl Relation {
    pub fn new(lhs: IsogenyExpression, rhs: IsogenyExpression) -> Self {
        Relation { lhs, rhs }
    }

    pub fn is_balanced(&self) -> bool {
        self.lhs.dim() == self.rhs.dim()
    }

    /// Drops dimension-0 factors, cancels common factors and takes the
    /// largest exact root.
    pub fn reduced(&self) -> Relation {
        let mut lhs = self.lhs.clone();
        let mut rhs = self.rhs.clone();
        lhs.drop_trivial();
        rhs.drop_trivial();
        let common: Vec<(IsogenyFactor, u64)> =
            lhs.terms.iter().filter_map(|(f, &m)| rhs.terms.get(f).map(|&n| (f.clone(), m.min(n)))).collect();
        for (f, c) in common {
            for side in [&mut lhs, &mut rhs] {
                let m = side.terms.get_mut(&f).expect("present on both sides");
                *m -= c;
                if *m == 0 {
                    side.terms.remove(&f);
                }
            }
        }
        let g = lhs.gcd().gcd(&rhs.gcd());
        if g > 1 {
            lhs.divide(g);
            rhs.divide(g);
        }
        Relation { lhs, rhs }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jc() -> IsogenyFactor {
        IsogenyFactor::jac_quotient("C", 4)
    }

    #[test]
    fn normalization() {
        assert_eq!(IsogenyFactor::jac_quotient("C/<-1>", 0), IsogenyFactor::Trivial);
        assert_eq!(IsogenyFactor::jac_quotient("C/<-1>", 1), IsogenyFactor::Elliptic { label: "C/<-1>".into() });
        assert_eq!(IsogenyFactor::jac_quotient("C", 4).dim(), 4);
    }

    #[test]
    fn dihedral_relation_reduces_to_two_copies() {
        // J_C^3 x 0^6 ~ A^3 x E^6
        let e = IsogenyFactor::jac_quotient("C/<-1>", 1);
        let a = IsogenyFactor::surface("A");
        let r = Relation::new(
            IsogenyExpression::single(jc(), 3).with(IsogenyFactor::Trivial, 6),
            IsogenyExpression::single(a.clone(), 3).with(e.clone(), 6),
        );
        assert!(r.is_balanced());
        let red = r.reduced();
        assert_eq!(red.lhs, IsogenyExpression::single(jc(), 1));
        assert_eq!(red.rhs, IsogenyExpression::single(a, 1).with(e, 2));
        assert_eq!(red.to_string(), "J(C) ~ A x E(C/<-1>)^2");
    }

    #[test]
    fn cancellation_keeps_excess() {
        let a = IsogenyFactor::surface("A");
        let r = Relation::new(
            IsogenyExpression::single(jc(), 2).with(a.clone(), 3),
            IsogenyExpression::single(a.clone(), 5).with(IsogenyFactor::jac_quotient("X", 2), 2),
        );
        let red = r.reduced();
        assert_eq!(red.lhs, IsogenyExpression::single(jc(), 1));
        assert_eq!(red.rhs, IsogenyExpression::single(a, 1).with(IsogenyFactor::jac_quotient("X", 2), 1));
    }

    #[test]
    fn json_round_trip() {
        let e = IsogenyExpression::single(IsogenyFactor::surface("A"), 1)
            .with(IsogenyFactor::Remainder { label: "C/<t> : C/<t,-1>".into(), dim: 3 }, 2);
        let s = serde_json::to_string(&e).unwrap();
        let back: IsogenyExpression = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.dim(), 8);
        assert_eq!(e.factor_count(), 3);
    }
}
