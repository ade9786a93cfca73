//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.
//!
//! Oracles here are computed independently of the library where possible:
//! subgroups by brute-force closure over integer pairs, genera by
//! Riemann-Hurwitz, group tables written out by hand.

use std::collections::BTreeSet;
use std::process::ExitCode;

use cover_jacobians::engine::{relation_for_setting, relation_from_partition, subgroup_partitions};
use cover_jacobians::group::find_partitions;
use cover_jacobians::parity::translated_m_parity;
use cover_jacobians::{
    automorphism_group, decompose, elliptic_cover_report, hyperelliptic_census, AutElement, AutGroup, CoverCurve,
    DecomposeOptions, FiniteGroup, IsogenyExpression, IsogenyFactor, Partition, TorsionPoint, Verdict,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

/// All subgroups of (Z/d)^2 of order d, as sorted element lists, each with a
/// generating set. Brute force over generator pairs.
fn order_d_subgroups(d: u64) -> Vec<(Vec<(u64, u64)>, Vec<(i64, i64)>)> {
    let n = d as i64;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let pts: Vec<(i64, i64)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    for &p in &pts {
        for &q in &pts {
            let mut elems = BTreeSet::new();
            for i in 0..n {
                for j in 0..n {
                    elems.insert((((i * p.0 + j * q.0) % n) as u64, ((i * p.1 + j * q.1) % n) as u64));
                }
            }
            if elems.len() as u64 == d {
                let v: Vec<_> = elems.into_iter().collect();
                if seen.insert(v.clone()) {
                    out.push((v, vec![p, q]));
                }
            }
        }
    }
    out
}

fn fix_counts(curve: &CoverCurve) -> Result<Vec<(TorsionPoint, u64)>, String> {
    Ok(lib(curve.fix_table())?.into_iter().map(|r| (r.x, r.count)).collect())
}

fn criterion_1() -> Outcome {
    let mut n = 0;
    for d in [1u64, 3, 5, 7, 9] {
        for (_, gens) in order_d_subgroups(d) {
            let curve = lib(CoverCurve::new(d, &gens))?;
            for (x, c) in fix_counts(&curve)? {
                check(c == 6, || format!("d = {d}, x = {x}: {c}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} involutions with 6 fixed points"))
}

fn criterion_2() -> Outcome {
    let curve = lib(CoverCurve::new(2, &[(1, 0)]))?;
    let c = fix_counts(&curve)?;
    let counts: BTreeSet<u64> = c.iter().map(|(_, c)| *c).collect();
    check(counts == BTreeSet::from([4, 8]), || format!("{c:?}"))?;
    check(c[0] == (TorsionPoint::ZERO, 4), || "[-1] should have 4".into())?;
    let total = lib(hyperelliptic_census(2))?.total;
    check(total == 3 * 2, || format!("census {total}"))?;
    Ok("fix {4, 8}, census 6".into())
}

fn criterion_3() -> Outcome {
    let klein = lib(CoverCurve::new(4, &[(2, 0), (0, 2)]))?;
    for (x, c) in fix_counts(&klein)? {
        let expect = if x == TorsionPoint::from_ints(2, 2, 4) { 12 } else { 4 };
        check(c == expect, || format!("Klein x = {x}: {c}"))?;
    }
    let cyclic = lib(CoverCurve::new(4, &[(1, 0)]))?;
    for (x, c) in fix_counts(&cyclic)? {
        // X_2 = X; the 2-part of x generates iff x has order 4
        let expect = if x.order() == 4 { 8 } else { 4 };
        check(c == expect, || format!("cyclic x = {x}: {c}"))?;
    }
    let totals: Vec<u64> = (1..=4)
        .map(|d| hyperelliptic_census(d).map(|r| r.total))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(totals == [1, 6, 9, 4], || format!("census {totals:?}"))?;
    Ok("Klein (4,4,4,12), cyclic by generation, census 1, 6, 9, 4".into())
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for d in [2u64, 4, 6, 8] {
        let two = 1u64 << d.trailing_zeros();
        for (elems, gens) in order_d_subgroups(d) {
            // Sylow 2-subgroup: elements whose order divides 2^m
            let ord = |(a, b): (u64, u64)| {
                let g = num_gcd(num_gcd(a, b), d);
                d / g
            };
            let x2: Vec<(u64, u64)> = elems.iter().copied().filter(|&p| two % ord(p) == 0).collect();
            let x2_order = x2.len() as u64;
            let x2_cyclic = x2.iter().any(|&p| ord(p) == x2_order);
            let curve = lib(CoverCurve::new(d, &gens))?;
            let mut saw_twelve = false;
            for r in lib(curve.fix_table())? {
                let (a, b) = r.x.ints_over(d);
                // 2-primary part: multiply by e with e = 1 mod 2^m, e = 0 mod odd part
                let odd = d / two;
                let e = (0..d).find(|e| e % odd == 0 && e % two == 1 % two).unwrap();
                let p2 = ((a * e) % d, (b * e) % d);
                let count = r.count;
                if x2_cyclic {
                    let expect = if ord(p2) == x2_order { 8 } else { 4 };
                    check(count == expect, || format!("d = {d}, X = {gens:?}, x = ({a},{b}): {count} vs {expect}"))?;
                } else {
                    check(count == 4 || count == 12, || format!("d = {d}, x = ({a},{b}): {count}"))?;
                    saw_twelve |= count == 12;
                }
                // every halving in K(L) gives the same parity
                let halvings: Vec<TorsionPoint> = (0..d as i64)
                    .flat_map(|i| (0..d as i64).map(move |j| TorsionPoint::from_ints(i, j, d)))
                    .filter(|y| y.double() == r.x)
                    .collect();
                let parities: BTreeSet<_> = halvings
                    .iter()
                    .map(|&y| translated_m_parity(curve.quotient(), y).map(|e| format!("{:?}", e.parity)))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                check(parities.len() <= 1, || format!("d = {d}, x = ({a},{b}): parities {parities:?}"))?;
                check(halvings.len() == r.halvings_checked, || format!("halving count at ({a},{b})"))?;
                n += 1;
            }
            check(x2_cyclic || saw_twelve, || format!("d = {d}, X = {gens:?}: no 12"))?;
        }
    }
    Ok(format!("{n} involutions, zero violations"))
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Riemann-Hurwitz genus of `C/H` from fixed-point counts of the reflections.
fn rh_genus(aut: &AutGroup, h: &cover_jacobians::group::ElementSet) -> Result<u64, String> {
    let g_c = aut.curve().genus() as i64;
    let mut fixed = 0i64;
    for i in h.iter() {
        let e = aut.elements()[i];
        if e.sign < 0 {
            fixed += lib(aut.curve().fix_count(e.shift))?.count as i64;
        }
    }
    let n = h.count() as i64;
    let num = 2 * g_c - 2 - fixed;
    check(num % n == 0, || "Riemann-Hurwitz not integral".into())?;
    Ok(((num / n + 2) / 2) as u64)
}

fn criterion_5() -> Outcome {
    for d in 2..=12u64 {
        let curve = lib(CoverCurve::new(d, &[(1, 0)]))?;
        let aut = lib(automorphism_group(&curve))?;
        let dec = lib(decompose(&curve, &DecomposeOptions::default()))?;
        let primary = dec.primary.clone().ok_or("no primary relation")?;
        let minus = lib(aut.subgroup(&[AutElement::reflection(TorsionPoint::ZERO)]))?;
        let g_minus = rh_genus(&aut, &minus)?;
        let a = IsogenyFactor::surface("A");
        let mut expect = IsogenyExpression::new().with(a, 1);
        let mut dims = 2 + g_minus;
        if d % 2 == 1 {
            check(g_minus == (d - 1) / 2, || format!("d = {d}: g(C/<-1>) = {g_minus}"))?;
            expect.add(lib(aut.factor(&minus))?, 2);
            dims += g_minus;
        } else {
            let t = lib(aut.subgroup(&[AutElement::reflection(TorsionPoint::from_ints(1, 0, d))]))?;
            let g_t = rh_genus(&aut, &t)?;
            check(g_minus == d / 2 && g_t == (d - 2) / 2, || format!("d = {d}: genera {g_minus}, {g_t}"))?;
            expect.add(lib(aut.factor(&minus))?, 1);
            if g_t > 0 {
                expect.add(lib(aut.factor(&t))?, 1);
            }
            dims += g_t;
        }
        check(primary.rhs == expect, || format!("d = {d}: {primary}"))?;
        check(primary.lhs.factor_count() == 1 && primary.lhs.dim() == d + 1, || {
            format!("d = {d}: lhs {}", primary.lhs)
        })?;
        check(dims == d + 1 && dec.split.dim() == d + 1, || format!("d = {d}: genus ledger {dims}"))?;
    }
    Ok("d = 2..12 match; d + 1 = 2 + sum of factor dims".into())
}

fn criterion_6() -> Outcome {
    let curve = lib(CoverCurve::new(9, &[(3, 0), (0, 3)]))?;
    let aut = lib(automorphism_group(&curve))?;
    let dec = lib(decompose(&curve, &DecomposeOptions::default()))?;
    let a = IsogenyFactor::surface("A");
    check(dec.split.multiplicity(&a) == 1, || format!("split {}", dec.split))?;
    let p = 3u64;
    let others: Vec<(&IsogenyFactor, u64)> = dec.split.terms().filter(|(f, _)| **f != a).collect();
    check(others.len() == 4 && others.iter().all(|(f, m)| *m == 2 && f.dim() == (p - 1) / 2), || {
        format!("split {}", dec.split)
    })?;
    // C_i = C/<L_i, -1> for the four lines L_i
    let lines = [(1, 0), (0, 1), (1, 1), (1, 2)];
    let mut ci = BTreeSet::new();
    for (u, v) in lines {
        let h = lib(aut.subgroup(&[
            AutElement::translation(TorsionPoint::from_ints(u, v, 3)),
            AutElement::reflection(TorsionPoint::ZERO),
        ]))?;
        check(rh_genus(&aut, &h)? == 1, || "C_i not elliptic".into())?;
        ci.insert(lib(aut.factor(&h))?);
    }
    let split_factors: BTreeSet<_> = others.iter().map(|(f, _)| (*f).clone()).collect();
    check(ci == split_factors, || "elliptic factors are not the C_i".into())?;
    let minus = lib(aut.subgroup(&[AutElement::reflection(TorsionPoint::ZERO)]))?;
    let jm = lib(aut.factor(&minus))?;
    let companion = dec.quotient_splits.iter().find(|q| q.factor == jm).ok_or("no companion relation")?;
    let four = ci.iter().fold(IsogenyExpression::new(), |e, f| e.with(f.clone(), 1));
    check(companion.split == four, || format!("{jm} ~ {}", companion.split))?;

    // line partition of X: (t - 1) g_C + |X| g_{C/X} = sum |L_i| g_{C/L_i}
    let parts = lib(subgroup_partitions(curve.subgroup(), 200))?;
    check(parts.len() == 1 && parts[0].len() == 4, || "line partition not found".into())?;
    let g = aut.group();
    let lifted: Vec<_> = parts[0]
        .iter()
        .map(|l| aut.subgroup(&l.elements().iter().map(|&p| AutElement::translation(p)).collect::<Vec<_>>()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let expected_dim = (4 - 1) * 10 + 9 * rh_genus(&aut, &aut.translations())?;
    let rhs_dim: u64 = lifted.iter().map(|h| rh_genus(&aut, h).map(|gn| 3 * gn)).sum::<Result<u64, _>>()?;
    let rel = lib(relation_for_setting(&aut, &g.trivial(), &aut.translations(), &lifted))?;
    check(expected_dim == 48 && rhs_dim == 48 && rel.lhs.dim() == 48 && rel.rhs.dim() == 48, || format!("{rel}"))?;
    let canonical = aut.canonical_partition().ok_or("no canonical partition")?;
    check(lib(relation_from_partition(&aut, &canonical))?.is_balanced(), || "canonical unbalanced".into())?;
    Ok(format!("J(C) ~ {}; {jm} ~ {}; 48 = 48", dec.split, companion.split))
}

fn criterion_7() -> Outcome {
    let mut n = 0;
    for d in 1..=8u64 {
        for (_, gens) in order_d_subgroups(d) {
            let curve = lib(CoverCurve::new(d, &gens))?;
            let aut = lib(automorphism_group(&curve))?;
            let whole = aut.group().whole();
            let g_c = curve.genus();
            let g_g = rh_genus(&aut, &whole)?;
            for p in lib(aut.partitions(200))? {
                let t = p.len() as u64;
                let lhs = (t - 1) * g_c + aut.order() as u64 * g_g;
                let rhs: u64 = p
                    .parts()
                    .iter()
                    .map(|h| rh_genus(&aut, h).map(|gh| h.count() as u64 * gh))
                    .sum::<Result<u64, _>>()?;
                check(lhs == rhs, || format!("d = {d}: {lhs} != {rhs}"))?;
                let rel = lib(relation_from_partition(&aut, &p))?;
                check(rel.lhs.dim() == lhs && rel.rhs.dim() == rhs, || format!("d = {d}: relation {rel}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} partitions, zero violations"))
}

fn table(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup, String> {
    lib(FiniteGroup::from_table((0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect()))
}

fn criterion_8() -> Outcome {
    for n in 2..=10usize {
        // r^i = i, s r^i = n + i
        let g = table(2 * n, |a, b| {
            let (sa, ia, sb, ib) = (a / n, a % n, b / n, b % n);
            let i = if sb == 1 { (n - ia + ib) % n } else { (ia + ib) % n };
            (sa ^ sb) * n + i
        })?;
        let mut parts = vec![g.closure([1])];
        parts.extend((n..2 * n).map(|i| g.closure([i])));
        let canonical = Partition::new(parts);
        let found = lib(find_partitions(&g, 200))?;
        check(found.contains(&canonical), || format!("dihedral order {}", 2 * n))?;
    }
    let klein = table(4, |a, b| a ^ b)?;
    let k = lib(find_partitions(&klein, 200))?;
    check(k.len() == 1 && k[0].len() == 3, || format!("Klein: {} partitions", k.len()))?;
    let z3 = table(9, |a, b| ((a / 3 + b / 3) % 3) * 3 + (a % 3 + b % 3) % 3)?;
    let z = lib(find_partitions(&z3, 200))?;
    check(z.len() == 1 && z[0].len() == 4 && z[0].parts().iter().all(|h| h.count() == 3), || "(Z/3)^2".into())?;
    for n in 1..=16 {
        let c = lib(find_partitions(&table(n, |a, b| (a + b) % n)?, 200))?;
        check(c.is_empty(), || format!("cyclic {n}"))?;
    }
    Ok("dihedral d <= 10, Klein 3 parts, (Z/3)^2 4 lines, cyclic none".into())
}

fn criterion_9() -> Outcome {
    let opts = DecomposeOptions { assume_a_split: true, ..Default::default() };
    let cases: [(&str, u64, &[(i64, i64)]); 5] = [
        ("2", 2, &[(1, 0)]),
        ("3", 3, &[(1, 0)]),
        ("4-cyclic", 4, &[(1, 0)]),
        ("4-Klein", 4, &[(2, 0), (0, 2)]),
        ("6-cyclic", 6, &[(1, 0)]),
    ];
    let mut out = Vec::new();
    for (name, d, gens) in cases {
        let dec = lib(decompose(&lib(CoverCurve::new(d, gens))?, &opts))?;
        check(dec.verdict.to_string().starts_with("completely decomposable"), || format!("{name}: {}", dec.verdict))?;
        check(dec.verdict != Verdict::NotEstablished, || name.into())?;
        check(dec.split.terms().all(|(f, _)| f.dim() == 1 || *f == IsogenyFactor::surface("A")), || {
            format!("{name}: {}", dec.split)
        })?;
        if name == "4-Klein" {
            let ell: Vec<_> = dec.split.terms().filter(|(f, m)| f.dim() == 1 && *m == 1).collect();
            check(ell.len() == 3 && dec.split.factor_count() == 4, || format!("Klein: {}", dec.split))?;
        }
        if name == "6-cyclic" {
            check(dec.assumptions.iter().any(|a| a.contains("non-isogenous")), || "no distinctness assumption".into())?;
        }
        out.push(format!("{name}: {}", dec.verdict));
    }
    Ok(out.join("; "))
}

fn criterion_10() -> Outcome {
    for (d, j, k, g) in [(4, 2, 2, 3), (6, 3, 2, 4), (8, 4, 2, 5)] {
        let r = lib(elliptic_cover_report(d, j, k, &DecomposeOptions::default()))?;
        check(r.cover.degree == d, || format!("({d},{j},{k}): degree {}", r.cover.degree))?;
        // intermediate curve C/<t_x1> with |<x1>| = k: genus d/k + 1
        check(r.intermediate_genus == g && g == d / k + 1, || {
            format!("({d},{j},{k}): genus {}", r.intermediate_genus)
        })?;
    }
    Ok("degrees 4, 6, 8; intermediate genera 3, 4, 5".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fixed points, d odd", criterion_1),
        ("d = 2 table and census", criterion_2),
        ("d = 4 counts and census", criterion_3),
        ("structural classification, d <= 8 even", criterion_4),
        ("cyclic decomposition, d = 2..12", criterion_5),
        ("(Z/3)^2 splitting at d = 9", criterion_6),
        ("Kani-Rosen dimension balance, d <= 8", criterion_7),
        ("partition search", criterion_8),
        ("splitting chains with A split", criterion_9),
        ("elliptic covers", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
