use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use doctrines::doctrine::{
    check_2cell, check_epsilon_operator, check_rich, consistency_status, Consistency, Doctrine, DoctrineMorphism,
    Layer, TwoCell, TwoCellViolation,
};
use doctrines::fincat::{CategoryBuilder, Product};
use doctrines::io::{named_fixtures, subsets_fixture, trivial_fixture};
use doctrines::order::{Fiber, FinPoset, MonotoneMap};

/// One object whose only fiber is the given poset; no structure beyond functoriality.
fn over_a_point(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Doctrine {
    let mut b = CategoryBuilder::new();
    let t = b.object("1");
    let id = b.morphism("id_1", t, t);
    b.identity(t, id).terminal(t).bang(t, id).composite(id, id, id);
    b.product(t, t, Product { object: t, pr1: id, pr2: id });
    let n = names.len();
    let table = (0..n * n).map(|i| leq(i / n, i % n)).collect();
    let poset = FinPoset::new(names.iter().map(|s| s.to_string()).collect(), table).unwrap();
    Doctrine::new(
        "point",
        b.build().unwrap(),
        vec![Fiber::derived(poset)],
        vec![MonotoneMap::identity(n)],
        BTreeMap::new(),
        BTreeMap::new(),
        BTreeMap::new(),
        BTreeSet::from([Layer::Functorial]),
    )
    .unwrap()
}

#[test]
fn richness_witness_for_a_singleton_subset_is_that_constant() {
    let d = subsets_fixture();
    let bit = d.object("{0,1}").unwrap();
    let one = d.element(bit, "{1}").unwrap();
    let report = check_rich(&d);
    assert!(report.is_rich());
    assert!(report.witnesses_are_equalities());
    let entry = report.entries.iter().find(|e| e.object == bit && e.element == one).unwrap();
    // Brute force over Hom(1, {0,1}): only the constant 1 pulls {1} back to ⊤.
    let top = d.terminal_fiber().top().unwrap();
    let good: Vec<_> = d.base.hom(d.base.terminal(), bit).iter().filter(|&&c| d.reindex_elem(c, one) == top).collect();
    assert_eq!(good.len(), 1);
    assert_eq!(entry.witness, Some(*good[0]));
    assert_eq!(d.base.morphism_name(*good[0]), "1>{0,1}:1");
}

#[test]
fn singleton_fibers_are_rich() {
    let d = trivial_fixture();
    assert!(check_rich(&d).is_rich());
    assert!(check_epsilon_operator(&d).unwrap().passes());
}

#[test]
fn consistency_by_scanning_the_terminal_fiber() {
    assert_eq!(consistency_status(&trivial_fixture()).status, Consistency::Inconsistent);
    let two = over_a_point(&["⊥", "⊤"], |a, b| a <= b);
    let r = consistency_status(&two);
    assert_eq!(r.status, Consistency::TwoValued);
    assert_eq!(r.equivalents, Some([true; 4]));

    // Three incomparable elements: separated, but no pair lies below everything.
    let antichain = over_a_point(&["a", "b", "c"], |a, b| a == b);
    let r = consistency_status(&antichain);
    assert_eq!(r.status, Consistency::Consistent);
    assert_eq!(r.equivalents, None);
    assert!(r.equivalents_agree());
}

#[test]
fn bounded_fixtures_agree_on_the_four_predicates() {
    for (name, d) in named_fixtures() {
        let r = consistency_status(&d);
        assert!(r.equivalents.is_some(), "{name}");
        assert!(r.equivalents_agree(), "{name}: {r:?}");
        if check_rich(&d).is_rich() && r.status.is_consistent() {
            assert!(d.fibers.iter().all(|f| f.len() > 1), "{name}");
        }
    }
}

#[test]
fn epsilon_of_the_graph_of_negation_is_negation() {
    let d = subsets_fixture();
    let bit = d.object("{0,1}").unwrap();
    let pair = d.base.product(bit, bit).unwrap().object;
    let graph = d.element(pair, "{(0,1),(1,0)}").unwrap();
    let report = check_epsilon_operator(&d).unwrap();
    assert!(report.passes());
    assert!(report.terminal_condition && report.agrees_with_rich);
    let entry = report.entries.iter().find(|e| e.context == bit && e.object == bit && e.element == graph).unwrap();
    assert_eq!(d.base.morphism_name(entry.witness.unwrap()), "{0,1}>{0,1}:1.0");
}

#[test]
fn identity_two_cell_passes() {
    for (name, d) in named_fixtures() {
        let id = DoctrineMorphism::identity(Arc::new(d));
        let theta = TwoCell { components: id.src.base.objects().map(|a| id.src.base.identity(a)).collect() };
        assert_eq!(check_2cell(&id, &id, &theta).unwrap(), vec![], "{name}");
    }
}

#[test]
fn two_cell_reports_a_failed_inequality() {
    let p = Arc::new(subsets_fixture());
    let bit = p.object("{0,1}").unwrap();
    let full = p.element(bit, "{0,1}").unwrap();
    let half = p.element(bit, "{0}").unwrap();
    let id = DoctrineMorphism::identity(p.clone());
    let mut lower = id.clone();
    lower.components[bit.index()].table[full] = half;
    let theta = TwoCell { components: p.base.objects().map(|a| p.base.identity(a)).collect() };
    assert_eq!(
        check_2cell(&id, &lower, &theta).unwrap(),
        vec![TwoCellViolation::Inequality { object: bit, element: full }]
    );
    // The other direction only asks `lower ≤ id`, which holds everywhere.
    assert_eq!(check_2cell(&lower, &id, &theta).unwrap(), vec![]);
}

#[test]
fn two_cell_reports_a_non_natural_component() {
    let p = Arc::new(subsets_fixture());
    let bit = p.object("{0,1}").unwrap();
    let swap = p.base.find_morphism("{0,1}>{0,1}:1.0").unwrap();
    let id = DoctrineMorphism::identity(p.clone());
    let mut components: Vec<_> = p.base.objects().map(|a| p.base.identity(a)).collect();
    components[bit.index()] = swap;
    let violations = check_2cell(&id, &id, &TwoCell { components }).unwrap();
    // The constant 0 : 1 → {0,1} is not fixed by the swap.
    let zero = p.base.find_morphism("1>{0,1}:0").unwrap();
    assert!(violations.contains(&TwoCellViolation::Naturality { morphism: zero }));
    assert!(violations.iter().any(|v| matches!(v, TwoCellViolation::Inequality { object, .. } if *object == bit)));
}
