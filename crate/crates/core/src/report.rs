//! Reports for a single `(d, X)` instance and for the census, in text and JSON.
//!
//! Subgroups are written as integer pairs mod `d` separated by semicolons:
//! `"2,0;0,2"` is `<(2/d, 0), (0, 2/d)>`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curve::{hyperelliptic_census, CensusReport, CoverCurve, FixBranch};
use crate::engine::{automorphism_group, decompose_group, DecomposeOptions, KaniRosenRecord, QuotientSplit, Verdict};
use crate::error::{Error, Result};
use crate::isogeny::{IsogenyExpression, IsogenyFactor, Relation};
use crate::parity::Parity;

/// Largest `d` accepted by [`analyze`]; `K(L)` has `d^2` points.
pub const MAX_DEGREE: u64 = 36;

/// Parses `"a,b;c,e"` into integer pairs. Whitespace around tokens is ignored.
pub fn parse_subgroup(text: &str) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        let comma = chunk.find(',').ok_or_else(|| Error::Parse {
            position: offset + chunk.len(),
            message: "expected ',' between the two coordinates".into(),
        })?;
        let a = parse_int(&chunk[..comma], offset)?;
        let b = parse_int(&chunk[comma + 1..], offset + comma + 1)?;
        out.push((a, b));
        offset += chunk.len() + 1;
    }
    Ok(out)
}

fn parse_int(token: &str, offset: usize) -> Result<i64> {
    let lead = token.len() - token.trim_start().len();
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Parse { position: offset + lead, message: "expected an integer".into() });
    }
    t.parse::<i64>().map_err(|e| Error::Parse { position: offset + lead, message: format!("bad integer {t:?}: {e}") })
}

/// Inverse of [`parse_subgroup`] on reduced pairs.
pub fn format_subgroup(gens: &[(u64, u64)]) -> String {
    gens.iter().map(|(a, b)| format!("{a},{b}")).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub d: u64,
    /// The generators as given, reduced mod `d`.
    pub subgroup: String,
    pub order: u64,
    pub invariant_factors: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedBasis {
    /// `k1`, `k2` as integer pairs mod `d`.
    pub k1: (u64, u64),
    pub k2: (u64, u64),
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixRow {
    pub x: (u64, u64),
    pub count: u64,
    pub branch: FixBranch,
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub primary: Option<Relation>,
    pub split: IsogenyExpression,
    pub atoms: Vec<IsogenyFactor>,
    pub quotient_splits: Vec<QuotientSplit>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: InputEcho,
    pub normalized_basis: NormalizedBasis,
    pub fix_counts: Vec<FixRow>,
    /// Partitions of the whole automorphism group, as subgroup labels.
    pub partitions: Vec<Vec<String>>,
    pub relations: Vec<KaniRosenRecord>,
    pub decomposition: DecompositionSummary,
    pub assumptions: Vec<String>,
    pub census: Option<CensusReport>,
}

pub fn analyze(d: u64, subgroup: &str, opts: &DecomposeOptions) -> Result<ReportDocument> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::domain(format!("d must lie in 1..={MAX_DEGREE}, got {d}")));
    }
    let gens = parse_subgroup(subgroup)?;
    let curve = CoverCurve::new(d, &gens)?;
    let aut = automorphism_group(&curve)?;
    let dec = decompose_group(&aut, opts)?;
    let x = curve.subgroup();
    let reduced: Vec<(u64, u64)> =
        gens.iter().map(|&(a, b)| (a.rem_euclid(d as i64) as u64, b.rem_euclid(d as i64) as u64)).collect();
    let ctx = curve.context();
    let fix_counts = curve
        .fix_table()?
        .into_iter()
        .map(|r| FixRow { x: r.x.ints_over(d), count: r.count, branch: r.branch, parity: r.parity })
        .collect();
    let classes = aut.classes();
    let partitions = aut
        .partitions(opts.max_group_order)?
        .iter()
        .map(|p| {
            p.parts().iter().map(|h| aut.class_index(h).map(|ci| classes[ci].label.clone())).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let census = if d <= 4 { Some(hyperelliptic_census(d)?) } else { None };
    Ok(ReportDocument {
        input: InputEcho {
            d,
            subgroup: format_subgroup(&reduced),
            order: x.order(),
            invariant_factors: x.invariant_factors(),
        },
        normalized_basis: NormalizedBasis {
            k1: ctx.k1().ints_over(d),
            k2: ctx.k2().ints_over(d),
            genus: curve.genus(),
        },
        fix_counts,
        partitions,
        relations: dec.relations,
        decomposition: DecompositionSummary {
            primary: dec.primary,
            split: dec.split,
            atoms: dec.atoms,
            quotient_splits: dec.quotient_splits,
            verdict: dec.verdict,
        },
        assumptions: dec.assumptions,
        census,
    })
}

/// Census for any `d >= 1`; outside `1..=4` the count is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDocument {
    pub d: u64,
    pub total: u64,
    pub report: Option<CensusReport>,
    pub note: Option<String>,
}

pub fn census(d: u64) -> Result<CensusDocument> {
    if d == 0 {
        return Err(Error::domain("d must be positive"));
    }
    match hyperelliptic_census(d) {
        Ok(r) => Ok(CensusDocument { d, total: r.total, report: Some(r), note: None }),
        Err(e @ Error::NoHyperellipticCurves(_)) => {
            Ok(CensusDocument { d, total: 0, report: None, note: Some(e.to_string()) })
        }
        Err(e) => Err(e),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("report types always serialize")
}

pub fn report_from_json(text: &str) -> Result<ReportDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })
}

fn pair(p: (u64, u64)) -> String {
    format!("({},{})", p.0, p.1)
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut s = String::new();
    let i = &doc.input;
    let b = &doc.normalized_basis;
    let _ = writeln!(
        s,
        "d = {}, X = <{}> mod d, order {}, type {:?}",
        i.d,
        i.subgroup.replace(';', "; "),
        i.order,
        i.invariant_factors
    );
    let _ = writeln!(s, "basis k1 = {}, k2 = {} (mod d); genus of C = {}", pair(b.k1), pair(b.k2), b.genus);
    let _ = writeln!(s, "\nfixed points of [-1] t_x:");
    for r in &doc.fix_counts {
        let par = r.parity.map(|p| format!(", {p:?}").to_lowercase()).unwrap_or_default();
        let _ = writeln!(s, "  x = {:<10} {:>3}  ({:?}{par})", pair(r.x), r.count, r.branch);
    }
    let _ = writeln!(s, "\npartitions of <-1> x| X: {}", doc.partitions.len());
    for p in &doc.partitions {
        let _ = writeln!(s, "  {}", p.join(" | "));
    }
    let _ = writeln!(s, "\nKani-Rosen relations: {}", doc.relations.len());
    for r in &doc.relations {
        let tag = r.named.as_ref().map(|n| format!(" [{n}]")).unwrap_or_default();
        let _ = writeln!(s, "  {} over {}: {}{tag}", r.group, r.base, r.relation);
    }
    let dec = &doc.decomposition;
    let _ = writeln!(s, "\ndecomposition:");
    if let Some(p) = &dec.primary {
        let _ = writeln!(s, "  primary: {p}");
    }
    let _ = writeln!(s, "  split:   J(C) ~ {}", dec.split);
    for q in &dec.quotient_splits {
        if q.split != IsogenyExpression::single(q.factor.clone(), 1) {
            let _ = writeln!(s, "           {} ~ {}", q.factor, q.split);
        }
    }
    let _ = writeln!(s, "  verdict: {}", dec.verdict);
    let _ = writeln!(s, "\nassumptions:");
    for a in &doc.assumptions {
        let _ = writeln!(s, "  - {a}");
    }
    if let Some(c) = &doc.census {
        let _ = writeln!(s, "\nhyperelliptic census for d = {}: {}", c.d, c.total);
    }
    s
}

pub fn render_census_text(doc: &CensusDocument) -> String {
    let mut s = format!("hyperelliptic curves in |L| for d = {}: {}\n", doc.d, doc.total);
    if let Some(r) = &doc.report {
        for t in &r.terms {
            let ext = if t.external { " [external]" } else { "" };
            let _ = writeln!(s, "  {:>3}  {}{ext}", t.count, t.description);
        }
    }
    if let Some(n) = &doc.note {
        let _ = writeln!(s, "  {n}");
    }
    s
}
