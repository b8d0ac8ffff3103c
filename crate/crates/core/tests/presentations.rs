use proptest::prelude::*;

use unigroup::cases::TableCase;
use unigroup::presentation::{tietze_simplify, tietze_simplify_deep, Presentation};
use unigroup::sequences::{factor_language, two_sided_window};
use unigroup::universal::{harvest_equal_length_relations, universal_group_sl, HarvestReport};

fn harvest(case: TableCase, h: usize, n: usize) -> HarvestReport {
    let w = two_sided_window(&case.sequence(), h).unwrap();
    harvest_equal_length_relations(&w, &case.lengths(), n).unwrap()
}

fn case() -> impl Strategy<Value = TableCase> {
    prop::sample::select(TableCase::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tietze_keeps_abelian_invariants(c in case(), h in 4usize..25, n in 2usize..8) {
        let p = harvest(c, h, n).presentation;
        let inv = p.abelian_invariants();
        prop_assert_eq!(tietze_simplify(&p, 50).abelian_invariants(), inv.clone());
        prop_assert_eq!(tietze_simplify_deep(&p, 50, 6).abelian_invariants(), inv);
    }

    #[test]
    fn harvest_is_monotone(c in case(), h in 4usize..20, dh in 0usize..10, n in 2usize..7, dn in 0usize..3) {
        let small = harvest(c, h, n).relation_set();
        let big = harvest(c, h + dh, n + dn).relation_set();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn equal_counts_where_forced(c in case(), h in 4usize..30, n in 2usize..9) {
        let r = harvest(c, h, n);
        if c.forces_equal_counts() {
            prop_assert!(r.require_equal_counts().is_ok());
        }
        for p in &r.pairs {
            prop_assert!(p.u != p.v);
        }
    }

    #[test]
    fn sl_rank_counts_length_two_factors(c in case(), h in 3usize..30, n in 2usize..6) {
        let lang = factor_language(&two_sided_window(&c.sequence(), h).unwrap(), n);
        let (p, rank) = universal_group_sl(&lang).unwrap();
        prop_assert_eq!(rank, lang.of_length(2).len());
        prop_assert!(p.relators.is_empty());
    }

    #[test]
    fn text_format_round_trips(c in case(), h in 4usize..12, n in 2usize..5) {
        let p = harvest(c, h, n).presentation;
        let back: Presentation = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn harvest_json_has_exact_lengths() {
    let r = harvest(TableCase::Fib, 10, 3);
    let v = serde_json::to_value(&r).unwrap();
    let lens: Vec<&str> = v["pairs"].as_array().unwrap().iter().map(|p| p["length"].as_str().unwrap()).collect();
    assert!(lens.contains(&"3/2 + 1/2*sqrt(5)"));
    assert_eq!(v["half_width"], 10);
    assert_eq!(v["max_len"], 3);
}
