use std::sync::OnceLock;

use proptest::prelude::*;

use unigroup::exactnum::{QuadField, QuadraticRational as Q};
use unigroup::modelset::{empire_brute, gxh_multiply, macbeath_data, project_functor, CutProjectScheme, Overlap, WindowSet};
use unigroup::pointset::{delta_chain, diff_set, generator_set_delta, oplus, oplus_values, LengthFunction, PointSet1D};
use unigroup::presentation::PartialTable;
use unigroup::psgamma::{make_element, maxset_table, multiply, natural_leq, theta, PatternClass, Product};
use unigroup::sequences::{two_sided_window, SequenceSpec};

fn fib_ps() -> &'static PointSet1D {
    static PS: OnceLock<PointSet1D> = OnceLock::new();
    PS.get_or_init(|| {
        let g = QuadField::golden();
        let w = two_sided_window(&SequenceSpec::fibonacci(), 30).unwrap();
        let l = LengthFunction::new([('a', g.tau()), ('b', g.one())]).unwrap();
        PointSet1D::build(&w, &l, &g.zero()).unwrap()
    })
}

fn element() -> impl Strategy<Value = PatternClass> {
    (-12i64..8, prop::collection::btree_set(0i64..5, 1..4), any::<prop::sample::Index>(), any::<prop::sample::Index>()).prop_map(
        |(start, offs, o, i)| {
            let idx: Vec<i64> = offs.into_iter().map(|k| start + k).collect();
            make_element(fib_ps(), &idx, *o.get(&idx), *i.get(&idx)).unwrap()
        },
    )
}

#[test]
fn oplus_table_is_group_like_on_truncations() {
    let g = QuadField::golden();
    for b in [2, 3, 5] {
        let t = maxset_table(fib_ps(), &g.int(b)).unwrap();
        let bad = unigroup::verify::group_like_violations(&t, &g.zero(), |x| -x);
        assert!(bad.is_empty(), "bound {b}: {bad:?}");
    }
}

#[test]
fn delta_generates_diff_set() {
    let ps = fib_ps();
    let g = QuadField::golden();
    let delta = generator_set_delta(ps, &g.int(2)).unwrap();
    for d in diff_set(ps, &g.int(6)) {
        for &(i, j) in d.witnesses.iter().filter(|(i, j)| i.abs() < 20 && j.abs() < 20) {
            let chain = delta_chain(ps, i, j, &delta).unwrap_or_else(|| panic!("no chain for {}", d.value));
            assert!(!chain.is_empty());
        }
    }
}

#[test]
fn oplus_is_additive_and_witness_independent() {
    let ps = fib_ps();
    let g = QuadField::golden();
    let diffs = diff_set(ps, &g.int(4));
    for a in &diffs {
        for b in &diffs {
            let r = oplus(a, b, ps);
            if let Some(v) = r.value() {
                assert_eq!(v, &(&a.value + &b.value));
                assert_eq!(oplus_values(&a.value, &b.value, ps).value(), Some(v));
            }
        }
    }
}

#[test]
fn theta_intertwines_with_the_table() {
    let ps = fib_ps();
    let g = QuadField::golden();
    let t: PartialTable<Q> = maxset_table(ps, &g.int(3)).unwrap();
    for (i, a) in t.elements.iter().enumerate() {
        for (j, b) in t.elements.iter().enumerate() {
            let prod = multiply(&theta(a), &theta(b), ps);
            let table = t.products.get(&(i, j)).map(|&k| &t.elements[k]);
            match (prod.defined(), table) {
                (Some(x), Some(c)) => assert_eq!(x.max_above(), theta(c)),
                (None, None) => {}
                // sums leaving the bound are clipped from the table
                (Some(x), None) => assert!(x.phi().abs() > g.int(3)),
                (None, Some(c)) => panic!("table has {a} ⊕ {b} = {c}, semigroup product undefined"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_semigroup_laws(x in element()) {
        let ps = fib_ps();
        let xx = multiply(&x, &x.inverse(), ps);
        let back = xx.defined().map(|e| multiply(e, &x, ps));
        prop_assert!(matches!(back, Some(Product::Defined(ref y)) if y == &x));
        prop_assert!(natural_leq(&x, &x.max_above()));
        prop_assert_eq!(x.phi().is_zero(), x.is_idempotent());
    }

    #[test]
    fn phi_is_a_morphism(x in element(), y in element()) {
        if let Product::Defined(xy) = multiply(&x, &y, fib_ps()) {
            prop_assert_eq!(xy.phi(), &x.phi() + &y.phi());
        }
    }

    #[test]
    fn idempotents_commute(x in element(), y in element()) {
        let ps = fib_ps();
        let (e, f) = (multiply(&x, &x.inverse(), ps), multiply(&y, &y.inverse(), ps));
        let (Some(e), Some(f)) = (e.defined(), f.defined()) else { return Ok(()) };
        if let (Product::Defined(a), Product::Defined(b)) = (multiply(e, f, ps), multiply(f, e, ps)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn unique_maximal_element(x in element()) {
        // maximal elements above x all share φ(x); only max_above(x) is maximal
        let m = x.max_above();
        prop_assert!(natural_leq(&x, &m));
        prop_assert!(natural_leq(&m, &m.max_above()) && m.max_above() == m);
    }

    #[test]
    fn membership_law(n in -30i64..30, m in -30i64..30) {
        let s = CutProjectScheme::fibonacci();
        let t = s.translate(n, m);
        prop_assert_eq!(s.is_member(&t.phys), s.window().contains(&t.internal));
        prop_assert_eq!(s.star(&t.phys).unwrap(), t.internal);
    }

    #[test]
    fn functor_is_idempotent_pure(x in element(), y in element()) {
        let s = CutProjectScheme::fibonacci();
        let g = s.field();
        let ps = s.generate(&g.int(40)).unwrap();
        let place = |c: &PatternClass| ps.points().iter().find_map(|at| project_functor(&s, c, at).ok());
        if let Some(img) = place(&x) {
            let idem = gxh_multiply(&s, &img, &img).as_ref() == Some(&img);
            prop_assert_eq!(idem, x.is_idempotent());
        }
        // composable pair: the image of a product is the product of images
        if let Product::Defined(xy) = multiply(&x, &y, &ps) {
            let at = ps.points()[ps.len() / 2].clone();
            if let (Ok(a), Ok(b), Ok(c)) = (project_functor(&s, &x, &at), project_functor(&s, &y, &(&at + &x.phi())), project_functor(&s, &xy, &at)) {
                let ab = gxh_multiply(&s, &a, &b);
                prop_assert_eq!(ab.map(|p| p.phi), Some(c.phi));
            }
        }
    }

    #[test]
    fn window_law_holds(k in 1usize..4, start in -12i64..10) {
        let s = CutProjectScheme::fibonacci();
        let ps = s.generate(&s.field().int(20)).unwrap();
        let pat: Vec<Q> = (0..k as i64).filter_map(|i| ps.point(start + i).cloned()).collect();
        prop_assume!(pat.len() == k);
        let v = empire_brute(&s, &pat, &pat, 25).unwrap();
        prop_assert_eq!(v.window_law_violations, 0);
        prop_assert!(v.same_empire);
    }
}

#[test]
fn macbeath_relations_close_in_e() {
    let g = QuadField::golden();
    let v = WindowSet::interval(g.zero(), g.one()).unwrap();
    for overlap in [Overlap::Interior, Overlap::DensePoint] {
        let d = macbeath_data((&g.one(), &g.tau()), &v, 4, overlap).unwrap();
        for &(i, j, k) in &d.relations {
            assert_eq!(&(&d.generators[i].0 + &d.generators[j].0), &d.generators[k].0);
        }
    }
}
