//! Polarization data of type `(1, d)`: the kernel `K(L)`, its decomposition
//! `<k1> + <k2>`, the commutator pairing, and the quotient `A/X`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torsion::{full_torsion, span, FiniteSubgroup, TorsionPoint};

/// A value `zeta^exponent` of the commutator pairing, `zeta` a fixed
/// primitive `d`-th root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingValue {
    pub exponent: u64,
    pub d: u64,
}

impl PairingValue {
    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    /// Order of the root of unity.
    pub fn order(self) -> u64 {
        self.d / self.d.gcd(&self.exponent)
    }

    pub fn is_primitive(self) -> bool {
        self.order() == self.d
    }
}

/// The pair `(d, K(L))` with a chosen decomposition of `K(L)`.
///
/// The line bundle is fixed as the one of characteristic 0 for the chosen
/// decomposition; it is symmetric, even and carries a symmetric theta
/// structure. Those flags are model axioms and never change.
#[derive(Debug, Clone)]
pub struct PolarizationContext {
    d: u64,
    k1: TorsionPoint,
    k2: TorsionPoint,
    kernel: FiniteSubgroup,
    pub characteristic_zero: bool,
    pub even: bool,
    pub has_sts: bool,
}

impl PolarizationContext {
    /// Standard context with `k1 = (1/d, 0)` and `k2 = (0, 1/d)`.
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("d must be positive"));
        }
        let k1 = TorsionPoint::from_ints(1, 0, d);
        let k2 = TorsionPoint::from_ints(0, 1, d);
        Ok(PolarizationContext {
            d,
            k1,
            k2,
            kernel: full_torsion(d),
            characteristic_zero: true,
            even: true,
            has_sts: true,
        })
    }

    /// Same `K(L)`, different decomposition generators.
    pub fn with_basis(&self, k1: TorsionPoint, k2: TorsionPoint) -> Result<Self> {
        if !self.in_kernel(&k1) || !self.in_kernel(&k2) {
            return Err(Error::OutsideKernel);
        }
        let e = self.intrinsic_pairing(k1, k2);
        if !e.is_primitive() {
            return Err(Error::domain(format!("e(k1, k2) = zeta^{} is not primitive", e.exponent)));
        }
        Ok(PolarizationContext { k1, k2, ..self.clone() })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn k1(&self) -> TorsionPoint {
        self.k1
    }

    pub fn k2(&self) -> TorsionPoint {
        self.k2
    }

    /// `K(L)` as a subgroup of the coordinate model.
    pub fn kernel(&self) -> &FiniteSubgroup {
        &self.kernel
    }

    pub fn in_kernel(&self, p: &TorsionPoint) -> bool {
        self.d % p.order() == 0
    }

    /// The pairing in the coordinates of the standard decomposition.
    fn intrinsic_pairing(&self, p: TorsionPoint, q: TorsionPoint) -> PairingValue {
        let d = self.d as i128;
        let (u1, u2) = p.ints_over(self.d);
        let (v1, v2) = q.ints_over(self.d);
        let det = u1 as i128 * v2 as i128 - u2 as i128 * v1 as i128;
        PairingValue { exponent: det.rem_euclid(d) as u64, d: self.d }
    }

    /// Coordinates `(a, alpha)` of `p = a k1 + alpha k2`, integers mod `d`.
    pub fn coordinates(&self, p: TorsionPoint) -> Result<(u64, u64)> {
        if !self.in_kernel(&p) {
            return Err(Error::OutsideKernel);
        }
        let d = self.d as i128;
        let (a1, b1) = self.k1.ints_over(self.d);
        let (a2, b2) = self.k2.ints_over(self.d);
        let (u, v) = p.ints_over(self.d);
        let det = (a1 as i128 * b2 as i128 - a2 as i128 * b1 as i128).rem_euclid(d);
        let inv = mod_inverse(det, d).ok_or_else(|| Error::invariant("basis does not generate K(L)"))?;
        // adjugate times det^{-1}
        let a = (b2 as i128 * u as i128 - a2 as i128 * v as i128) * inv;
        let alpha = (-(b1 as i128) * u as i128 + a1 as i128 * v as i128) * inv;
        Ok((a.rem_euclid(d) as u64, alpha.rem_euclid(d) as u64))
    }

    pub fn from_coordinates(&self, a: i64, alpha: i64) -> TorsionPoint {
        self.k1.scale(a) + self.k2.scale(alpha)
    }

    /// `e^L(p, q) = zeta^(a beta - b alpha)` for `p = (a, alpha)`, `q = (b, beta)`
    /// in the decomposition basis.
    pub fn commutator_pairing(&self, p: TorsionPoint, q: TorsionPoint) -> Result<PairingValue> {
        let (a, alpha) = self.coordinates(p)?;
        let (b, beta) = self.coordinates(q)?;
        let d = self.d as i128;
        let e = (a as i128 * beta as i128 - b as i128 * alpha as i128).rem_euclid(d);
        Ok(PairingValue { exponent: e as u64, d: self.d })
    }

    pub fn is_isotropic(&self, x: &FiniteSubgroup) -> Result<bool> {
        if !x.is_subgroup_of(&self.kernel) {
            return Err(Error::OutsideKernel);
        }
        // bilinear, so generators suffice
        let gens = x.generators();
        for (i, &p) in gens.iter().enumerate() {
            for &q in &gens[i + 1..] {
                if !self.commutator_pairing(p, q)?.is_trivial() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `{ p in K(L) : e(p, t) = 1 for all t in T }`.
    pub fn orthogonal(&self, t: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        let mut pts = Vec::new();
        for &p in self.kernel.elements() {
            let mut ok = true;
            for &g in t.generators() {
                if !self.commutator_pairing(p, g)?.is_trivial() {
                    ok = false;
                    break;
                }
            }
            if ok {
                pts.push(p);
            }
        }
        Ok(span(&pts))
    }

    fn check_quotientable(&self, x: &FiniteSubgroup) -> Result<()> {
        if !self.is_isotropic(x)? {
            return Err(Error::NotIsotropic);
        }
        if self.d % x.order() != 0 {
            return Err(Error::domain(format!("subgroup order {} does not divide d = {}", x.order(), self.d)));
        }
        Ok(())
    }

    /// Whether `X = <(d/d1) k1> + <(d/d2) k2>` for the current basis.
    pub fn is_compatible_with(&self, x: &FiniteSubgroup) -> bool {
        let (d1, d2) = x.invariant_factors();
        if self.d % d1 != 0 || self.d % d2 != 0 {
            return false;
        }
        split_subgroup(self.k1, self.k2, self.d, d1, d2) == *x
    }

    /// A decomposition of `K(L)` in which `X` splits along the two factors.
    ///
    /// The current basis is kept when it already works. Otherwise the search
    /// runs over `k1'` of order `d` whose multiple `(d/d1) k1'` has the maximal
    /// order `d1` inside `X`, then over `k2'` with `e(k1', k2') = zeta`, both
    /// in canonical point order.
    pub fn normalize_decomposition(&self, x: &FiniteSubgroup) -> Result<PolarizationContext> {
        self.check_quotientable(x)?;
        if self.is_compatible_with(x) {
            return Ok(self.clone());
        }
        let d = self.d;
        let (d1, d2) = x.invariant_factors();
        for &c1 in self.kernel.elements() {
            if c1.order() != d {
                continue;
            }
            let lead = c1.scale((d / d1) as i64);
            if !x.contains(&lead) || lead.order() != d1 {
                continue;
            }
            for &c2 in self.kernel.elements() {
                if self.intrinsic_pairing(c1, c2).exponent != 1 % d {
                    continue;
                }
                if split_subgroup(c1, c2, d, d1, d2) == *x {
                    return self.with_basis(c1, c2);
                }
            }
        }
        Err(Error::NoCompatibleBasis)
    }

    /// Type `(1, d/|X|)` of the pushed-forward polarization on `A/X`.
    pub fn pushforward_type(&self, x: &FiniteSubgroup) -> Result<(u64, u64)> {
        self.check_quotientable(x)?;
        Ok((1, self.d / x.order()))
    }

    /// Quotient model of `A/X`; `self` must already be compatible with `X`.
    pub fn build_quotient(&self, x: &FiniteSubgroup) -> QuotientModel {
        debug_assert!(self.is_compatible_with(x), "build_quotient needs a normalized context");
        let q = QuotientModel { base: self.clone(), x: x.clone(), w1: None, w2: None };
        let w = |k: TorsionPoint| {
            let m = q.order_in_quotient(k);
            (m % 2 == 0).then(|| q.project(k.scale((m / 2) as i64)))
        };
        let (w1, w2) = (w(self.k1), w(self.k2));
        QuotientModel { w1, w2, ..q }
    }
}

impl fmt::Display for PolarizationContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1,{}) with k1 = {}, k2 = {}", self.d, self.k1, self.k2)
    }
}

fn split_subgroup(k1: TorsionPoint, k2: TorsionPoint, d: u64, d1: u64, d2: u64) -> FiniteSubgroup {
    span(&[k1.scale((d / d1) as i64), k2.scale((d / d2) as i64)])
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// `A/X` with the projection `pi` and the 2-torsion points `w1`, `w2`
/// spanning `pi(K(L)) ∩ (A/X)[2]`.
#[derive(Debug, Clone)]
pub struct QuotientModel {
    base: PolarizationContext,
    x: FiniteSubgroup,
    w1: Option<TorsionPoint>,
    w2: Option<TorsionPoint>,
}

impl QuotientModel {
    pub fn base(&self) -> &PolarizationContext {
        &self.base
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        &self.x
    }

    /// Canonical representative of `p + X`.
    pub fn project(&self, p: TorsionPoint) -> TorsionPoint {
        self.x.coset_rep(p)
    }

    /// Least `n >= 1` with `n p` in `X`.
    pub fn order_in_quotient(&self, p: TorsionPoint) -> u64 {
        let mut n = 1u64;
        let mut acc = p;
        while !self.x.contains(&acc) {
            acc = acc + p;
            n += 1;
        }
        n
    }

    pub fn w1(&self) -> Option<TorsionPoint> {
        self.w1
    }

    pub fn w2(&self) -> Option<TorsionPoint> {
        self.w2
    }

    /// `w1 + w2` when both are defined.
    pub fn w_sum(&self) -> Option<TorsionPoint> {
        match (self.w1, self.w2) {
            (Some(a), Some(b)) => Some(self.project(a + b)),
            _ => None,
        }
    }
}
