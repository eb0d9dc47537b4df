use std::collections::BTreeSet;
use std::sync::Arc;

use doctrines::constructions::{add_axiom, relabel_elements};
use doctrines::doctrine::{check_morphism, check_structure, Doctrine, Layer, ProductPreservation};
use doctrines::fincat::sets::{build_set_category, Functions, SetProduct};
use doctrines::fincat::{tuple, validate_category, ObjId};
use doctrines::io::{named_fixtures, parse_doctrine, powerset_fiber, serialize_doctrine};
use doctrines::model::{extract_model, quotient_by_filter};
use doctrines::order::{
    classify_filter, enumerate_filters, extend_to_ultrafilter, generated_filter, poset_reflection, Fiber, FinPoset,
    Preorder,
};
use proptest::prelude::*;

/// Reflexive-transitive closure of an arbitrary relation.
fn closure(n: usize, mut rel: Vec<bool>) -> Vec<bool> {
    for a in 0..n {
        rel[a * n + a] = true;
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if rel[a * n + k] && rel[k * n + b] {
                    rel[a * n + b] = true;
                }
            }
        }
    }
    rel
}

fn arb_preorder() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..7)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::bool::weighted(0.2), n * n)))
        .prop_map(|(n, rel)| (n, closure(n, rel)))
}

/// Divisors of `n` ordered by divisibility: a finite distributive lattice.
fn divisor_fiber(n: u32) -> Fiber {
    let divs: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let k = divs.len();
    let leq = (0..k * k).map(|i| divs[i % k].is_multiple_of(divs[i / k])).collect();
    Fiber::derived(FinPoset::new(divs.iter().map(|d| d.to_string()).collect(), leq).unwrap())
}

fn arb_fiber() -> impl Strategy<Value = Fiber> {
    prop_oneof![
        (0usize..4).prop_map(|n| powerset_fiber(&(0..n).map(|i| i.to_string()).collect::<Vec<_>>()).unwrap()),
        (1usize..6).prop_map(|n| Fiber::derived(FinPoset::chain((0..n).map(|i| i.to_string()).collect()))),
        (1u32..=60).prop_map(divisor_fiber),
    ]
}

fn fixture(i: usize) -> Arc<Doctrine> {
    let all = named_fixtures();
    Arc::new(all[i % all.len()].1.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_reflects_the_preorder((n, rel) in arb_preorder()) {
        let pre = Preorder::new(n, rel.clone()).unwrap();
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let r = poset_reflection(&pre, &names).unwrap();
        for a in 0..n {
            for b in 0..n {
                let (qa, qb) = (r.quotient.apply(a), r.quotient.apply(b));
                prop_assert_eq!(r.poset.leq(qa, qb), rel[a * n + b]);
                prop_assert_eq!(qa == qb, rel[a * n + b] && rel[b * n + a]);
            }
        }
        for (class, &rep) in r.representatives.iter().enumerate() {
            prop_assert_eq!(r.quotient.apply(rep), class);
            prop_assert!((0..rep).all(|x| r.quotient.apply(x) != class));
        }
    }

    #[test]
    fn heyting_residual_on_random_lattices(f in arb_fiber()) {
        for a in 0..f.len() {
            for b in 0..f.len() {
                let imp = f.imp(a, b).unwrap();
                for c in 0..f.len() {
                    prop_assert_eq!(f.leq(c, imp), f.leq(f.meet(c, a).unwrap(), b));
                }
            }
        }
    }

    #[test]
    fn generated_filter_is_the_least_one(f in arb_fiber(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let gens: Vec<usize> = picks.iter().map(|i| i.index(f.len())).collect();
        let g = generated_filter(&f, &gens).unwrap();
        let all = enumerate_filters(&f).unwrap();
        prop_assert!(all.contains(&g));
        prop_assert!(gens.iter().all(|x| g.contains(*x)));
        for h in &all {
            if gens.iter().all(|x| h.contains(*x)) {
                prop_assert!(g.is_subset(h));
            }
        }
    }

    #[test]
    fn ultrafilter_extension_is_ultra_and_contains_its_input(f in arb_fiber(), pick in any::<prop::sample::Index>()) {
        let g = generated_filter(&f, &[pick.index(f.len())]).unwrap();
        let class = classify_filter(&f, &g).unwrap();
        match extend_to_ultrafilter(&f, &g) {
            Ok(u) => {
                prop_assert!(class.proper);
                prop_assert!(g.is_subset(&u));
                let c = classify_filter(&f, &u).unwrap();
                prop_assert!(c.proper && c.maximal);
                prop_assert_eq!(c.ultra, c.maximal);
            }
            Err(_) => prop_assert!(!class.proper),
        }
    }

    #[test]
    fn ultra_iff_maximal_on_every_filter(f in arb_fiber()) {
        for g in enumerate_filters(&f).unwrap() {
            let c = classify_filter(&f, &g).unwrap();
            prop_assert_eq!(c.ultra, c.maximal, "{:?}", g.names(&f));
        }
    }

    #[test]
    fn tupling_under_any_pair_encoding(m in 1usize..3, perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        // Element `e` of A×A encodes the pair `code[e]`.
        let code: Vec<usize> = perm.into_iter().filter(|&e| e < m * m).collect();
        let labels = |k: usize| (0..k).map(|i| i.to_string()).collect::<Vec<_>>();
        let objects = vec![("1".to_string(), labels(1)), ("A".to_string(), labels(m)), ("A×A".to_string(), labels(m * m))];
        let products = [
            SetProduct { left: 0, right: 0, object: 0, pr1: vec![0], pr2: vec![0] },
            SetProduct { left: 0, right: 1, object: 1, pr1: vec![0; m], pr2: (0..m).collect() },
            SetProduct { left: 1, right: 0, object: 1, pr1: (0..m).collect(), pr2: vec![0; m] },
            SetProduct {
                left: 1,
                right: 1,
                object: 2,
                pr1: code.iter().map(|c| c / m).collect(),
                pr2: code.iter().map(|c| c % m).collect(),
            },
        ];
        let s = build_set_category(&objects, 0, Functions::All { max_morphisms: 1000 }, &products).unwrap();
        let cat = &s.category;
        prop_assert!(validate_category(cat).is_valid());
        let (a, aa) = (ObjId::new(1), ObjId::new(2));
        let p = *cat.product(a, a).unwrap();
        for c in cat.objects() {
            for &h in cat.hom(c, aa) {
                prop_assert_eq!(tuple(cat, cat.compose(p.pr1, h).unwrap(), cat.compose(p.pr2, h).unwrap()).unwrap(), h);
            }
        }
        let diag = s.table(cat.diagonal(a).unwrap()).to_vec();
        for (x, &e) in diag.iter().enumerate() {
            prop_assert_eq!(code[e], x * m + x);
        }
    }

    #[test]
    fn quotients_are_sound_for_random_generators(i in 0usize..6, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let p = fixture(i);
        let t = p.terminal_fiber();
        let gens: Vec<usize> = picks.iter().map(|x| x.index(t.len())).collect();
        let filter = generated_filter(t, &gens).unwrap();
        let qp = quotient_by_filter(&p, &filter).unwrap();
        let layers: Vec<Layer> = p.layers.iter().copied().collect();
        prop_assert!(check_morphism(&qp.q, &layers, ProductPreservation::Strict).unwrap().passes());
        prop_assert!(check_structure(&qp.result, &layers).unwrap().passes());
        // Over 1 the order of the quotient is `θ ∧ a ≤ b` for some θ ∈ ∇, i.e. `a → b ∈ ∇`.
        let base = p.base.terminal();
        for a in 0..t.len() {
            for b in 0..t.len() {
                let expected = filter.contains(t.imp(a, b).unwrap());
                prop_assert_eq!(qp.result.fiber(base).leq(qp.class(base, a), qp.class(base, b)), expected);
            }
        }
    }

    #[test]
    fn models_from_random_ultrafilters_preserve_structure(i in 0usize..6, pick in any::<prop::sample::Index>()) {
        let p = fixture(i);
        let t = p.terminal_fiber();
        let start = generated_filter(t, &[pick.index(t.len())]).unwrap();
        let Ok(ultra) = extend_to_ultrafilter(t, &start) else {
            prop_assert!(!classify_filter(t, &start).unwrap().proper);
            return Ok(());
        };
        match extract_model(&p, &ultra) {
            Ok(model) => {
                let report = model.verify();
                prop_assert!(report.passes(), "{}: {:?}", p.name, report.violations);
            }
            // Only the doctrines that are not rich refuse extraction.
            Err(e) => prop_assert!(!doctrines::doctrine::check_rich(&p).is_rich(), "{}: {}", p.name, e),
        }
    }

    #[test]
    fn documents_round_trip_through_constructions(i in 0usize..6, steps in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>()), 0..3)) {
        let mut d = fixture(i);
        for (k, (relabel, pick)) in steps.iter().enumerate() {
            d = if *relabel {
                relabel_elements(&d, &format!("{k}")).unwrap().doctrine
            } else {
                let phi = pick.index(d.terminal_fiber().len());
                add_axiom(&d, phi).unwrap().doctrine
            };
        }
        let text = serialize_doctrine(&d);
        let back = parse_doctrine(&text).unwrap();
        prop_assert_eq!(&back, &*d);
        prop_assert_eq!(serialize_doctrine(&back), text);
        let names: BTreeSet<&str> = back.terminal_fiber().poset.names().iter().map(|s| s.as_str()).collect();
        prop_assert_eq!(names.len(), back.terminal_fiber().len());
    }
}
