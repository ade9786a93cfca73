//! Curves `C = pi^{-1}(H)` for an isotropic order-`d` subgroup `X <= K(L)`,
//! fixed points of the involutions `[-1] ∘ t_x`, and the hyperelliptic census.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parity::{profile_lookup, sts_after_translate, translated_m_parity, Parity, StsStatus};
use crate::polarization::{PolarizationContext, QuotientModel};
use crate::torsion::{halvings_in, span, subgroups_of_order, FiniteSubgroup, TorsionPoint};

/// The étale `X`-cover `C -> H` of a genus-2 curve, sitting in `|L|`.
#[derive(Debug, Clone)]
pub struct CoverCurve {
    ctx: PolarizationContext,
    x: FiniteSubgroup,
    quotient: QuotientModel,
}

impl CoverCurve {
    /// Validate `X` against the standard context for `d` and normalize the
    /// decomposition of `K(L)`.
    pub fn new(d: u64, gens: &[(i64, i64)]) -> Result<Self> {
        let ctx = PolarizationContext::new(d)?;
        let pts: Vec<_> = gens.iter().map(|&(a, b)| TorsionPoint::from_ints(a, b, d)).collect();
        Self::from_subgroup(&ctx, span(&pts))
    }

    pub fn from_subgroup(ctx: &PolarizationContext, x: FiniteSubgroup) -> Result<Self> {
        if !x.is_subgroup_of(ctx.kernel()) {
            return Err(Error::OutsideKernel);
        }
        if x.order() != ctx.d() {
            return Err(Error::NotPolarizingDegree { order: x.order(), d: ctx.d() });
        }
        if !ctx.is_isotropic(&x)? {
            return Err(Error::NotIsotropic);
        }
        let ctx = ctx.normalize_decomposition(&x)?;
        let quotient = ctx.build_quotient(&x);
        Ok(CoverCurve { ctx, x, quotient })
    }

    pub fn d(&self) -> u64 {
        self.ctx.d()
    }

    /// Smooth curves in `|L|` have genus `d + 1`.
    pub fn genus(&self) -> u64 {
        self.ctx.d() + 1
    }

    pub fn context(&self) -> &PolarizationContext {
        &self.ctx
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        &self.x
    }

    pub fn quotient(&self) -> &QuotientModel {
        &self.quotient
    }

    /// Number of fixed points of `[-1] ∘ t_x` on `C`, with the evidence used.
    pub fn fix_count(&self, x: TorsionPoint) -> Result<FixReport> {
        fix_count(self, x)
    }

    /// Fix counts for every `x` in `X`, canonical order.
    pub fn fix_table(&self) -> Result<Vec<FixReport>> {
        self.x.elements().iter().map(|&x| self.fix_count(x)).collect()
    }
}

/// Which case of the classification produced the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixBranch {
    /// `d` odd: a halving lies in `X` itself.
    OddDegree,
    /// No halving of `x` lies in `K(L)`; the translated bundle has no sts.
    NoHalvingInKernel,
    /// A halving `y` in `K(L)` with `t*_{pi(-y)} M` even.
    EvenTranslate,
    /// A halving `y` in `K(L)` with `t*_{pi(-y)} M` odd.
    OddTranslate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixReport {
    pub x: TorsionPoint,
    pub count: u64,
    pub branch: FixBranch,
    pub sts: StsStatus,
    pub parity: Option<Parity>,
    /// Number of halvings of `x` inside `K(L)` that were checked for agreement.
    pub halvings_checked: usize,
}

/// Fixed points on `C` of `[-1] ∘ t_x` are in bijection with fixed points of
/// `[-1]` on `C + y` (`2y = x`), whose class lives in `|t_{-y}^* L|`. The
/// count is read off the eigensystem table for that bundle.
pub fn fix_count(curve: &CoverCurve, x: TorsionPoint) -> Result<FixReport> {
    if !curve.x.contains(&x) {
        return Err(Error::domain(format!("{x} is not in X")));
    }
    let ctx = &curve.ctx;
    let d = ctx.d();
    let halvings = halvings_in(x, ctx.kernel())?;

    if halvings.is_empty() {
        let y = x.some_half();
        let sts = sts_after_translate(ctx, -y)?;
        if sts != StsStatus::NoSts {
            return Err(Error::invariant(format!("x = {x} has no halving in K(L) but t_(-y)^*L has an sts")));
        }
        let profile = profile_lookup(d, sts, Parity::Even)?;
        return Ok(FixReport {
            x,
            count: profile.fixed_points(1),
            branch: FixBranch::NoHalvingInKernel,
            sts,
            parity: None,
            halvings_checked: 0,
        });
    }

    let mut parity = None;
    for &y in &halvings {
        let p = translated_m_parity(&curve.quotient, y)?.parity;
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => {
                return Err(Error::invariant(format!(
                    "halvings of x = {x} disagree on the parity of the translated bundle"
                )))
            }
            _ => {}
        }
    }
    let parity = parity.expect("halvings nonempty");
    // y in K(L), so t_{-y}^*L = L: even with an sts
    let profile = profile_lookup(d, StsStatus::HasSts, Parity::Even)?;
    let count = profile.fixed_points(parity.eigenvalue());
    let branch = match (d % 2 == 1, parity) {
        (true, Parity::Even) => FixBranch::OddDegree,
        (true, Parity::Odd) => return Err(Error::invariant(format!("odd d produced an odd translate at x = {x}"))),
        (false, Parity::Even) => FixBranch::EvenTranslate,
        (false, Parity::Odd) => FixBranch::OddTranslate,
    };
    Ok(FixReport { x, count, branch, sts: StsStatus::HasSts, parity: Some(parity), halvings_checked: halvings.len() })
}

/// Genus of the quotient by an involution with `r` fixed points, by
/// Riemann-Hurwitz: `2g - 2 = 2(2g' - 2) + r`.
pub fn involution_quotient_genus(g: u64, r: u64) -> Result<u64> {
    let num = 2 * g + 2;
    if r > num || (num - r) % 4 != 0 {
        return Err(Error::InconsistentRamification { genus: g, fixed_points: r });
    }
    Ok((num - r) / 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTerm {
    pub description: String,
    /// Generators of `X` as integer pairs mod `d`, empty for external terms.
    pub subgroup: Vec<(u64, u64)>,
    pub count: u64,
    /// Curves that do not come from the cover construction.
    pub external: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub d: u64,
    pub total: u64,
    pub terms: Vec<CensusTerm>,
}

/// Smooth hyperelliptic curves in a fixed symmetric linear system of type `(1,d)`.
///
/// A hyperelliptic involution on a genus `d+1` curve has `2d + 4` fixed points.
/// For every isotropic `X` whose cover carries such an involution, the
/// `|K(L)/X|` translates are counted. For `d = 3` no cover qualifies and the
/// count comes from the `9` translates of the unique curve of the general
/// `(1,3)` surface, which is marked external.
pub fn hyperelliptic_census(d: u64) -> Result<CensusReport> {
    if !(1..=4).contains(&d) {
        return Err(Error::NoHyperellipticCurves(d));
    }
    let ctx = PolarizationContext::new(d)?;
    let mut terms = Vec::new();
    for x in subgroups_of_order(ctx.kernel(), d)? {
        if !ctx.is_isotropic(&x)? {
            continue;
        }
        let curve = CoverCurve::from_subgroup(&ctx, x.clone())?;
        let hyper = curve.fix_table()?.into_iter().find(|r| r.count == 2 * d + 4);
        if let Some(r) = hyper {
            let gens = x.minimal_generators().iter().map(|g| g.ints_over(d)).collect();
            terms.push(CensusTerm {
                description: format!(
                    "cover for X of order {} with hyperelliptic involution [-1]t{}; |K(L)/X| translates",
                    x.order(),
                    r.x
                ),
                subgroup: gens,
                count: ctx.kernel().order() / x.order(),
                external: false,
            });
        }
    }
    if d == 3 {
        terms.push(CensusTerm {
            description: "translates by K(L) of the unique hyperelliptic curve of a general (1,3) surface (not a cover of this construction)".into(),
            subgroup: Vec::new(),
            count: ctx.kernel().order(),
            external: true,
        });
    }
    let total = terms.iter().map(|t| t.count).sum();
    Ok(CensusReport { d, total, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64, n: u64) -> TorsionPoint {
        TorsionPoint::from_ints(a, b, n)
    }

    #[test]
    fn make_cover_curve_examples() {
        assert_eq!(CoverCurve::new(3, &[(1, 0)]).unwrap().genus(), 4);
        assert_eq!(CoverCurve::new(4, &[(2, 0), (0, 2)]).unwrap().genus(), 5);
        assert_eq!(CoverCurve::new(4, &[(1, 0), (0, 2)]).unwrap_err(), Error::NotPolarizingDegree { order: 8, d: 4 });
        assert_eq!(CoverCurve::new(4, &[(1, 0), (0, 1)]).unwrap_err(), Error::NotPolarizingDegree { order: 16, d: 4 });
        assert_eq!(CoverCurve::new(2, &[(1, 1)]).unwrap().subgroup().order(), 2);
    }

    #[test]
    fn order_d_subgroups_are_isotropic() {
        // X of type (d1, d2) with d1 d2 = d pairs into d Z/d, so the order
        // check already rules out every non-isotropic candidate
        for d in 1..=12u64 {
            let ctx = PolarizationContext::new(d).unwrap();
            for x in subgroups_of_order(ctx.kernel(), d).unwrap() {
                assert!(ctx.is_isotropic(&x).unwrap(), "d = {d}");
            }
        }
    }

    #[test]
    fn odd_degree_has_six() {
        let c = CoverCurve::new(3, &[(1, 0)]).unwrap();
        for r in c.fix_table().unwrap() {
            assert_eq!(r.count, 6);
            assert_eq!(r.branch, FixBranch::OddDegree);
        }
    }

    #[test]
    fn degree_two() {
        let c = CoverCurve::new(2, &[(1, 0)]).unwrap();
        assert_eq!(c.fix_count(TorsionPoint::ZERO).unwrap().count, 4);
        let r = c.fix_count(pt(1, 0, 2)).unwrap();
        assert_eq!(r.count, 8);
        assert_eq!(r.branch, FixBranch::NoHalvingInKernel);
        assert_eq!(r.sts, StsStatus::NoSts);
    }

    #[test]
    fn klein_cover() {
        let c = CoverCurve::new(4, &[(2, 0), (0, 2)]).unwrap();
        assert_eq!(c.fix_count(pt(2, 2, 4)).unwrap().count, 12);
        assert_eq!(c.fix_count(pt(2, 0, 4)).unwrap().count, 4);
        assert_eq!(c.fix_count(pt(0, 2, 4)).unwrap().count, 4);
        assert_eq!(c.fix_count(TorsionPoint::ZERO).unwrap().count, 4);
    }

    #[test]
    fn cyclic_four() {
        let c = CoverCurve::new(4, &[(1, 0)]).unwrap();
        assert_eq!(c.fix_count(pt(1, 0, 4)).unwrap().count, 8);
        assert_eq!(c.fix_count(pt(3, 0, 4)).unwrap().count, 8);
        assert_eq!(c.fix_count(pt(2, 0, 4)).unwrap().count, 4);
        assert!(c.fix_count(pt(0, 1, 4)).is_err());
    }

    #[test]
    fn riemann_hurwitz() {
        assert_eq!(involution_quotient_genus(4, 6).unwrap(), 1);
        assert_eq!(involution_quotient_genus(5, 12).unwrap(), 0);
        assert_eq!(involution_quotient_genus(3, 4).unwrap(), 1);
        for d in (1..40u64).step_by(2) {
            assert_eq!(involution_quotient_genus(d + 1, 6).unwrap(), (d - 1) / 2);
        }
        assert!(involution_quotient_genus(4, 5).is_err());
        assert!(involution_quotient_genus(2, 12).is_err());
    }

    #[test]
    fn census_values() {
        let totals: Vec<_> = (1..=4).map(|d| hyperelliptic_census(d).unwrap().total).collect();
        assert_eq!(totals, vec![1, 6, 9, 4]);
        let three = hyperelliptic_census(3).unwrap();
        assert!(three.terms.iter().all(|t| t.external));
        let two = hyperelliptic_census(2).unwrap();
        assert_eq!(two.terms.len(), 3);
        assert!(two.terms.iter().all(|t| t.count == 2 && !t.external));
        assert_eq!(hyperelliptic_census(5).unwrap_err(), Error::NoHyperellipticCurves(5));
        assert_eq!(hyperelliptic_census(0).unwrap_err(), Error::NoHyperellipticCurves(0));
    }

    #[test]
    fn fix_count_is_symmetric_in_x() {
        for d in 1..=8u64 {
            let ctx = PolarizationContext::new(d).unwrap();
            for x in subgroups_of_order(ctx.kernel(), d).unwrap() {
                if !ctx.is_isotropic(&x).unwrap() {
                    continue;
                }
                let c = CoverCurve::from_subgroup(&ctx, x.clone()).unwrap();
                for &v in x.elements() {
                    assert_eq!(c.fix_count(v).unwrap().count, c.fix_count(-v).unwrap().count);
                }
            }
        }
    }
}
