use cover_jacobians::report::{analyze, format_subgroup, report_from_json, to_json};
use cover_jacobians::torsion::subgroups_of_order;
use cover_jacobians::{
    automorphism_group, decompose, CoverCurve, DecomposeOptions, IsogenyExpression, IsogenyFactor, PolarizationContext,
    Relation,
};
use proptest::prelude::*;

fn pick_subgroup(d: u64, i: usize) -> Vec<(u64, u64)> {
    let ctx = PolarizationContext::new(d).unwrap();
    let xs = subgroups_of_order(ctx.kernel(), d).unwrap();
    let x = &xs[i % xs.len()];
    x.generators().iter().map(|g| g.ints_over(d)).collect()
}

fn as_input(gens: &[(u64, u64)]) -> Vec<(i64, i64)> {
    gens.iter().map(|&(a, b)| (a as i64, b as i64)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fix_counts_take_allowed_values(d in 1u64..=12, i in 0usize..64) {
        let gens = pick_subgroup(d, i);
        let curve = CoverCurve::new(d, &as_input(&gens)).unwrap();
        for r in curve.fix_table().unwrap() {
            if d % 2 == 1 {
                prop_assert_eq!(r.count, 6);
            } else {
                prop_assert!([4, 8, 12].contains(&r.count));
            }
            prop_assert_eq!(curve.fix_count(-r.x).unwrap().count, r.count);
        }
    }

    #[test]
    fn split_accounts_for_the_genus(d in 1u64..=10, i in 0usize..64) {
        let gens = pick_subgroup(d, i);
        let curve = CoverCurve::new(d, &as_input(&gens)).unwrap();
        let dec = decompose(&curve, &DecomposeOptions::default()).unwrap();
        prop_assert_eq!(dec.split.dim(), d + 1);
        prop_assert_eq!(dec.split.multiplicity(&IsogenyFactor::surface("A")), 1);
        if let Some(p) = &dec.primary {
            prop_assert!(p.is_balanced());
        }
        for q in &dec.quotient_splits {
            prop_assert_eq!(q.split.dim(), q.factor.dim());
        }
    }

    #[test]
    fn class_genera_are_conjugation_invariant(d in 2u64..=8, i in 0usize..64) {
        let gens = pick_subgroup(d, i);
        let aut = automorphism_group(&CoverCurve::new(d, &as_input(&gens)).unwrap()).unwrap();
        let g = aut.group();
        for h in g.subgroups() {
            let f = aut.factor(&h).unwrap();
            for x in 0..g.order() {
                prop_assert_eq!(&aut.factor(&g.conjugate(&h, x)).unwrap(), &f);
            }
        }
    }

    #[test]
    fn report_json_round_trip(d in 1u64..=8, i in 0usize..64) {
        let gens = pick_subgroup(d, i);
        let doc = analyze(d, &format_subgroup(&gens), &DecomposeOptions::default()).unwrap();
        let json = to_json(&doc);
        let back = report_from_json(&json).unwrap();
        prop_assert_eq!(to_json(&back), json);
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn reduction_preserves_balance(
        a in 0u64..5, b in 0u64..5, c in 0u64..5, k in 1u64..4, shared in 0u64..4,
    ) {
        let e1 = IsogenyFactor::jac_quotient("E1", 1);
        let e2 = IsogenyFactor::jac_quotient("E2", 1);
        let s = IsogenyFactor::surface("A");
        // k (a E1 + b E2 + shared A) ~ k (a E1 + b E2 + shared A), plus c on both sides
        let lhs = IsogenyExpression::new().with(e1.clone(), k * a).with(s.clone(), k * shared + c);
        let rhs = IsogenyExpression::new().with(e1, k * a).with(e2, 0).with(s, k * shared + c).with(IsogenyFactor::Trivial, b);
        let r = Relation::new(lhs, rhs);
        prop_assert!(r.is_balanced());
        let red = r.reduced();
        prop_assert!(red.is_balanced());
        prop_assert!(red.lhs.is_empty() && red.rhs.is_empty());
    }
}
