//! Built-in fixture suite: known fixed-point counts, census totals and
//! Jacobian splittings, each checked against the library.

use serde::{Deserialize, Serialize};

use crate::curve::{hyperelliptic_census, CoverCurve};
use crate::engine::{
    automorphism_group, decompose_group, elliptic_cover_report, relation_for_setting, relation_from_partition,
    subgroup_partitions, AutElement, DecomposeOptions, Verdict,
};
use crate::error::Result;
use crate::group::{find_partitions, FiniteGroup};
use crate::isogeny::{IsogenyExpression, IsogenyFactor};
use crate::polarization::PolarizationContext;
use crate::torsion::{span, subgroups_of_order, FiniteSubgroup, TorsionPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&DecomposeOptions) -> Result<std::result::Result<String, String>>;

const FIXTURES: &[(&str, Check)] = &[
    ("odd-degree-six-fixed-points", odd_degree_six),
    ("degree-two-table", degree_two),
    ("degree-four-counts", degree_four),
    ("census-small-degrees", census_small),
    ("even-degree-structural-classification", even_structure),
    ("cyclic-decomposition", cyclic_decomposition),
    ("nine-torsion-lines", nine_torsion_lines),
    ("kani-rosen-dimension-balance", dimension_balance),
    ("partition-search", partition_search),
    ("elliptic-splitting-chains", splitting_chains),
    ("elliptic-covers", elliptic_covers),
];

pub fn fixture_ids() -> Vec<&'static str> {
    FIXTURES.iter().map(|(id, _)| *id).collect()
}

/// Runs every fixture. Library errors inside a fixture are returned as-is so
/// the caller can tell invariant violations from mismatches.
pub fn verify_all(opts: &DecomposeOptions) -> Result<Vec<FixtureResult>> {
    FIXTURES
        .iter()
        .map(|(id, f)| {
            let outcome = f(opts)?;
            let (passed, detail) = match outcome {
                Ok(s) => (true, s),
                Err(s) => (false, s),
            };
            Ok(FixtureResult { id: (*id).into(), passed, detail })
        })
        .collect()
}

fn subgroups(d: u64) -> Result<(PolarizationContext, Vec<FiniteSubgroup>)> {
    let ctx = PolarizationContext::new(d)?;
    let xs = subgroups_of_order(ctx.kernel(), d)?;
    Ok((ctx, xs))
}

fn counts(curve: &CoverCurve) -> Result<Vec<(TorsionPoint, u64)>> {
    Ok(curve.fix_table()?.into_iter().map(|r| (r.x, r.count)).collect())
}

fn ok_if(cond: bool, pass: String, fail: String) -> Result<std::result::Result<String, String>> {
    Ok(if cond { Ok(pass) } else { Err(fail) })
}

fn odd_degree_six(_: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let mut checked = 0;
    for d in [1u64, 3, 5, 7, 9] {
        let (ctx, xs) = subgroups(d)?;
        for x in xs {
            let curve = CoverCurve::from_subgroup(&ctx, x)?;
            for (p, c) in counts(&curve)? {
                if c != 6 {
                    return Ok(Err(format!("d = {d}, x = {p}: {c} fixed points")));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(format!("{checked} involutions, all with 6 fixed points")))
}

fn degree_two(_: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let curve = CoverCurve::new(2, &[(1, 0)])?;
    let c: Vec<u64> = counts(&curve)?.into_iter().map(|(_, c)| c).collect();
    let total = hyperelliptic_census(2)?.total;
    ok_if(c == [4, 8] && total == 6, "counts 4, 8; census 6".into(), format!("counts {c:?}, census {total}"))
}

fn degree_four(_: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let klein = CoverCurve::new(4, &[(2, 0), (0, 2)])?;
    let kc = counts(&klein)?;
    let twelve: Vec<_> = kc.iter().filter(|(_, c)| *c == 12).map(|(p, _)| *p).collect();
    let mut sorted: Vec<u64> = kc.iter().map(|(_, c)| *c).collect();
    sorted.sort();
    if sorted != [4, 4, 4, 12] || twelve != [TorsionPoint::from_ints(2, 2, 4)] {
        return Ok(Err(format!("Klein counts {kc:?}")));
    }
    let cyclic = CoverCurve::new(4, &[(1, 0)])?;
    for (p, c) in counts(&cyclic)? {
        let expect = if p.order() == 4 { 8 } else { 4 };
        if c != expect {
            return Ok(Err(format!("cyclic X, x = {p}: {c}, expected {expect}")));
        }
    }
    Ok(Ok("Klein (4,4,4,12), cyclic (4,8,4,8)".into()))
}

fn census_small(_: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let totals = (1..=4).map(|d| hyperelliptic_census(d).map(|r| r.total)).collect::<Result<Vec<_>>>()?;
    ok_if(totals == [1, 6, 9, 4], "1, 6, 9, 4".into(), format!("{totals:?}"))
}

/// 2-primary part of `x` inside `X`, i.e. `m x` with `m` the odd part of `d`
/// times the inverse that keeps `x`'s 2-component.
fn two_part(x: TorsionPoint, d: u64) -> TorsionPoint {
    let two = 1u64 << d.trailing_zeros();
    let odd = d / two;
    // odd * u = 1 mod two
    let u = (1..=two).find(|u| (odd * u) % two == 1).unwrap_or(1);
    x.scale((odd * u) as i64)
}

fn even_structure(_: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let mut checked = 0;
    for d in [2u64, 4, 6, 8] {
        let (ctx, xs) = subgroups(d)?;
        for x in xs {
            let x2 = x.sylow(2);
            let curve = CoverCurve::from_subgroup(&ctx, x)?;
            let table = curve.fix_table()?;
            let cyclic = x2.is_cyclic();
            for r in &table {
                let ok = if cyclic {
                    let generates = span(&[two_part(r.x, d)]).order() == x2.order();
                    r.count == if generates { 8 } else { 4 }
                } else {
                    r.count == 4 || r.count == 12
                };
                if !ok {
                    return Ok(Err(format!("d = {d}, X = {:?}, x = {}: {}", x2.invariant_factors(), r.x, r.count)));
                }
                checked += 1;
            }
            if !cyclic && !table.iter().any(|r| r.count == 12) {
                return Ok(Err(format!("d = {d}: non-cyclic 2-part without a 12")));
            }
        }
    }
    Ok(Ok(format!("{checked} involutions agree with the 2-part classification")))
}

fn cyclic_decomposition(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    for d in 2..=12u64 {
        let curve = CoverCurve::new(d, &[(1, 0)])?;
        let aut = automorphism_group(&curve)?;
        let dec = decompose_group(&aut, opts)?;
        let Some(primary) = dec.primary else {
            return Ok(Err(format!("d = {d}: no primary relation")));
        };
        let minus = aut.subgroup(&[AutElement::reflection(TorsionPoint::ZERO)])?;
        let a = IsogenyFactor::surface("A");
        let j_minus = aut.factor(&minus)?;
        let mut expect = if d % 2 == 1 {
            IsogenyExpression::single(a, 1).with(j_minus, 2)
        } else {
            let t = aut.subgroup(&[AutElement::reflection(TorsionPoint::from_ints(1, 0, d))])?;
            IsogenyExpression::single(a, 1).with(j_minus, 1).with(aut.factor(&t)?, 1)
        };
        expect.drop_trivial();
        let jc = IsogenyExpression::single(IsogenyFactor::jac_quotient("C", d + 1), 1);
        if primary.lhs != jc || primary.rhs != expect {
            return Ok(Err(format!("d = {d}: {primary}")));
        }
        if d + 1 != expect.dim() || d + 1 != dec.split.dim() {
            return Ok(Err(format!("d = {d}: genus {} vs dimension {}", d + 1, expect.dim())));
        }
    }
    Ok(Ok("d = 2..12 match, genus ledger holds".into()))
}

fn nine_torsion_lines(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let curve = CoverCurve::new(9, &[(3, 0), (0, 3)])?;
    let aut = automorphism_group(&curve)?;
    let lines = subgroup_partitions(curve.subgroup(), opts.max_group_order)?;
    if lines.len() != 1 || lines[0].len() != 4 {
        return Ok(Err(format!("{} partitions of X", lines.len())));
    }
    let g = aut.group();
    let parts = lines[0]
        .iter()
        .map(|l| aut.subgroup(&l.elements().iter().map(|&p| AutElement::translation(p)).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let line_rel = relation_for_setting(&aut, &g.trivial(), &aut.translations(), &parts)?;
    if line_rel.lhs.dim() != 48 || line_rel.rhs.dim() != 48 {
        return Ok(Err(format!("line relation {line_rel}")));
    }
    let Some(canonical) = aut.canonical_partition() else {
        return Ok(Err("no canonical partition".into()));
    };
    if !relation_from_partition(&aut, &canonical)?.is_balanced() {
        return Ok(Err("canonical relation unbalanced".into()));
    }
    let dec = decompose_group(&aut, opts)?;
    let ell: Vec<_> = dec.split.terms().filter(|(f, _)| matches!(f, IsogenyFactor::Elliptic { .. })).collect();
    let a_ok = dec.split.multiplicity(&IsogenyFactor::surface("A")) == 1;
    if !a_ok || ell.len() != 4 || ell.iter().any(|(_, m)| *m != 2) || dec.split.factor_count() != 9 {
        return Ok(Err(format!("split {}", dec.split)));
    }
    let minus = aut.subgroup(&[AutElement::reflection(TorsionPoint::ZERO)])?;
    let jm = aut.factor(&minus)?;
    let companion = dec.quotient_splits.iter().find(|q| q.factor == jm);
    let four: IsogenyExpression = ell.iter().fold(IsogenyExpression::new(), |e, (f, _)| e.with((*f).clone(), 1));
    match companion {
        Some(q) if q.split == four => Ok(Ok(format!("48 = 48; J(C) ~ {}; {jm} ~ {}", dec.split, q.split))),
        _ => Ok(Err(format!("no companion splitting of {jm}"))),
    }
}

fn dimension_balance(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let mut n = 0;
    for d in 1..=8u64 {
        let (ctx, xs) = subgroups(d)?;
        for x in xs {
            let aut = automorphism_group(&CoverCurve::from_subgroup(&ctx, x)?)?;
            for p in aut.partitions(opts.max_group_order)? {
                let r = relation_from_partition(&aut, &p)?;
                if !r.is_balanced() {
                    return Ok(Err(format!("d = {d}: {r}")));
                }
                n += 1;
            }
        }
    }
    Ok(Ok(format!("{n} partitions balance")))
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    let m = 2 * n;
    let table = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let (sa, ia) = (a / n, a % n);
                    let (sb, ib) = (b / n, b % n);
                    let i = if sb == 1 { (n - ia + ib) % n } else { (ia + ib) % n };
                    (sa ^ sb) * n + i
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table)
}

fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    FiniteGroup::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
}

fn partition_search(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    for n in 2..=10 {
        let g = dihedral(n)?;
        let mut parts = vec![g.closure([1])];
        parts.extend((n..2 * n).map(|i| g.closure([i])));
        let canonical = crate::group::Partition::new(parts);
        if !find_partitions(&g, opts.max_group_order)?.contains(&canonical) {
            return Ok(Err(format!("dihedral of order {}: canonical partition missing", 2 * n)));
        }
    }
    let klein = subgroup_partitions(
        &span(&[TorsionPoint::from_ints(1, 0, 2), TorsionPoint::from_ints(0, 1, 2)]),
        opts.max_group_order,
    )?;
    let nine = subgroup_partitions(
        &span(&[TorsionPoint::from_ints(1, 0, 3), TorsionPoint::from_ints(0, 1, 3)]),
        opts.max_group_order,
    )?;
    if klein.len() != 1 || klein[0].len() != 3 || nine.len() != 1 || nine[0].len() != 4 {
        return Ok(Err(format!("Klein {} / (Z/3)^2 {} partitions", klein.len(), nine.len())));
    }
    for n in 1..=12 {
        if !find_partitions(&cyclic_group(n)?, opts.max_group_order)?.is_empty() {
            return Ok(Err(format!("cyclic group of order {n} has a partition")));
        }
    }
    Ok(Ok("dihedral, Klein, (Z/3)^2 and cyclic cases as expected".into()))
}

fn splitting_chains(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    let opts = DecomposeOptions { assume_a_split: true, ..opts.clone() };
    let cases: [(u64, &[(i64, i64)]); 5] =
        [(2, &[(1, 0)]), (3, &[(1, 0)]), (4, &[(1, 0)]), (4, &[(2, 0), (0, 2)]), (6, &[(1, 0)])];
    let mut out = Vec::new();
    for (d, gens) in cases {
        let aut = automorphism_group(&CoverCurve::new(d, gens)?)?;
        let dec = decompose_group(&aut, &opts)?;
        if dec.verdict == Verdict::NotEstablished {
            return Ok(Err(format!("d = {d}: {}", dec.split)));
        }
        if gens.len() == 2 {
            let ell = dec.split.terms().filter(|(f, m)| f.dim() == 1 && *m == 1).count();
            if ell != 3 || dec.split.factor_count() != 4 {
                return Ok(Err(format!("Klein split {}", dec.split)));
            }
        }
        if d == 6 && dec.assumptions.len() < 2 {
            return Ok(Err("d = 6 assumption trace too short".into()));
        }
        out.push(format!("d = {d}: {}", dec.split));
    }
    Ok(Ok(out.join("; ")))
}

fn elliptic_covers(opts: &DecomposeOptions) -> Result<std::result::Result<String, String>> {
    for (d, j, k, g) in [(4, 2, 2, 3), (6, 3, 2, 4), (8, 4, 2, 5)] {
        let r = elliptic_cover_report(d, j, k, opts)?;
        if r.cover.degree != d || r.intermediate_genus != g {
            return Ok(Err(format!(
                "({d},{j},{k}): degree {}, intermediate genus {}",
                r.cover.degree, r.intermediate_genus
            )));
        }
    }
    Ok(Ok("degrees 4, 6, 8; intermediate genera 3, 4, 5".into()))
}
