use std::collections::BTreeSet;

use doctrines::io::{gen_chain_fixture, powerset_fiber};
use doctrines::order::{
    classify_filter, derive_lattice_ops, enumerate_filters, extend_to_ultrafilter, generated_filter, poset_reflection,
    Fiber, Filter, FinPoset, Preorder,
};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn chain() -> Fiber {
    gen_chain_fixture().terminal_fiber().clone()
}

fn by_name(f: &Fiber, name: &str) -> usize {
    f.poset.find(name).unwrap_or_else(|| panic!("no element {name}"))
}

fn member_names(f: &Fiber, filter: &Filter) -> BTreeSet<String> {
    filter.members().map(|x| f.name(x).to_string()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Equivalence classes of a preorder by scanning mutual relatedness.
fn oracle_classes(n: usize, rel: impl Fn(usize, usize) -> bool) -> BTreeSet<BTreeSet<usize>> {
    (0..n).map(|a| (0..n).filter(|&b| rel(a, b) && rel(b, a)).collect()).collect()
}

#[test]
fn reflection_of_a_poset_is_identity_shaped() {
    let pre = Preorder::from_fn(3, |a, b| a <= b);
    let r = poset_reflection(&pre, &names(&["a", "b", "c"])).unwrap();
    assert_eq!(r.poset.len(), 3);
    assert_eq!((0..3).map(|x| r.quotient.apply(x)).collect::<Vec<_>>(), vec![0, 1, 2]);
}

#[test]
fn reflection_collapses_a_symmetric_pair() {
    let pre = Preorder::from_fn(2, |_, _| true);
    let r = poset_reflection(&pre, &names(&["a", "b"])).unwrap();
    assert_eq!(r.poset.len(), 1);
    assert_eq!(r.quotient.apply(0), r.quotient.apply(1));
    assert_eq!(r.representatives, vec![0]);
}

#[test]
fn reflection_of_a_two_cycle_with_incomparables() {
    // 0 ⇄ 1, and 2, 3 incomparable to everything else.
    let rel = |a: usize, b: usize| a == b || (a < 2 && b < 2);
    let pre = Preorder::from_fn(4, rel);
    let r = poset_reflection(&pre, &names(&["a", "b", "c", "d"])).unwrap();
    let classes = oracle_classes(4, rel);
    assert_eq!(classes.len(), 3);
    assert_eq!(r.poset.len(), 3);
    for class in &classes {
        let images: BTreeSet<usize> = class.iter().map(|&x| r.quotient.apply(x)).collect();
        assert_eq!(images.len(), 1);
        let rep = r.representatives[*images.iter().next().unwrap()];
        assert_eq!(rep, *class.iter().min().unwrap());
    }
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(r.poset.leq(r.quotient.apply(a), r.quotient.apply(b)), rel(a, b));
        }
    }
}

#[test]
fn preorders_must_be_reflexive_and_transitive() {
    assert!(Preorder::new(2, vec![true; 3]).is_err());
    let irreflexive = Preorder::new(2, vec![false, false, false, true]).unwrap();
    assert!(poset_reflection(&irreflexive, &names(&["a", "b"])).is_err());
    // 0 ≤ 1 ≤ 2 without 0 ≤ 2.
    let rel = |a: usize, b: usize| a == b || (a, b) == (0, 1) || (a, b) == (1, 2);
    let intransitive = Preorder::new(3, (0..9).map(|i| rel(i / 3, i % 3)).collect()).unwrap();
    assert!(poset_reflection(&intransitive, &names(&["a", "b", "c"])).is_err());
}

#[test]
fn chain_operations() {
    let f = chain();
    let (zero, half, one) = (by_name(&f, "0"), by_name(&f, "½"), by_name(&f, "1"));
    assert_eq!(f.top().unwrap(), one);
    assert_eq!(f.bottom().unwrap(), zero);
    for a in [zero, half, one] {
        for b in [zero, half, one] {
            let min = if f.leq(a, b) { a } else { b };
            assert_eq!(f.meet(a, b).unwrap(), min);
            let residual = if f.leq(a, b) { one } else { b };
            assert_eq!(f.imp(a, b).unwrap(), residual, "{} → {}", f.name(a), f.name(b));
        }
    }
}

#[test]
fn two_element_boolean_fiber() {
    let f = Fiber::derived(FinPoset::chain(names(&["⊥", "⊤"])));
    let ops = &f.ops;
    assert!(ops.top.is_some() && ops.bottom.is_some() && ops.meet.is_some() && ops.join.is_some() && ops.imp.is_some());
    assert_eq!(f.neg(0).unwrap(), 1);
    assert_eq!(f.neg(1).unwrap(), 0);
}

#[test]
fn join_is_absent_without_least_upper_bounds() {
    // ⊥ < a < c and ⊥ < b: `b` and `c` have no common upper bound.
    let p = FinPoset::from_pairs(names(&["⊥", "a", "b", "c"]), &[(0, 1), (0, 2), (1, 3), (0, 3)]).unwrap();
    let ops = derive_lattice_ops(&p);
    assert!(ops.join.is_none());
    assert!(ops.top.is_none());
    assert_eq!(ops.bottom, Some(0));
}

#[test]
fn residual_law_holds_for_all_triples_of_every_powerset() {
    for n in 0..=3 {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let f = powerset_fiber(&labels).unwrap();
        let m = f.len();
        for a in 0..m {
            for b in 0..m {
                let imp = f.imp(a, b).unwrap();
                for c in 0..m {
                    assert_eq!(f.leq(c, imp), f.leq(f.meet(c, a).unwrap(), b));
                }
            }
        }
    }
}

#[test]
fn generated_filters() {
    let f = chain();
    assert_eq!(member_names(&f, &generated_filter(&f, &[]).unwrap()), set(&["1"]));
    assert_eq!(member_names(&f, &generated_filter(&f, &[by_name(&f, "½")]).unwrap()), set(&["½", "1"]));
    let cube = powerset_fiber(&names(&["x", "y"])).unwrap();
    let atoms = [by_name(&cube, "{x}"), by_name(&cube, "{y}")];
    let whole = generated_filter(&cube, &atoms).unwrap();
    assert!(whole.is_whole(&cube));
    assert_eq!(whole.len(), 4);
}

#[test]
fn chain_classification() {
    let f = chain();
    let top_only = Filter::new(&f, [by_name(&f, "1")]).unwrap();
    let c = classify_filter(&f, &top_only).unwrap();
    assert!(c.proper && !c.ultra && !c.maximal);
    let upper = Filter::new(&f, [by_name(&f, "½"), by_name(&f, "1")]).unwrap();
    let c = classify_filter(&f, &upper).unwrap();
    assert!(c.proper && c.ultra && c.maximal);
    let all = Filter::new(&f, 0..f.len()).unwrap();
    let c = classify_filter(&f, &all).unwrap();
    assert!(!c.proper && !c.ultra && !c.maximal);
}

#[test]
fn ultrafilter_extension() {
    let f = chain();
    let start = generated_filter(&f, &[]).unwrap();
    let ultra = extend_to_ultrafilter(&f, &start).unwrap();
    assert_eq!(member_names(&f, &ultra), set(&["½", "1"]));
    assert_eq!(extend_to_ultrafilter(&f, &ultra).unwrap(), ultra);

    // In 𝒫({x,y}) the greedy scan keeps the first atom it can.
    let cube = powerset_fiber(&names(&["x", "y"])).unwrap();
    let ultras: Vec<Filter> =
        enumerate_filters(&cube).unwrap().into_iter().filter(|g| classify_filter(&cube, g).unwrap().ultra).collect();
    assert_eq!(ultras.len(), 2);
    let first_atom =
        (0..cube.len()).find(|&x| ultras.iter().any(|u| u.contains(x) && x != cube.top().unwrap())).unwrap();
    let expected = ultras.iter().find(|u| u.contains(first_atom)).unwrap();
    let greedy = extend_to_ultrafilter(&cube, &generated_filter(&cube, &[]).unwrap()).unwrap();
    assert_eq!(&greedy, expected);
    assert_eq!(member_names(&cube, &greedy), set(&["{x}", "{x,y}"]));
}

#[test]
fn filter_enumerations() {
    let f = chain();
    let all: BTreeSet<BTreeSet<String>> = enumerate_filters(&f).unwrap().iter().map(|g| member_names(&f, g)).collect();
    assert_eq!(all, [set(&["1"]), set(&["½", "1"]), set(&["0", "½", "1"])].into_iter().collect());

    let two = Fiber::derived(FinPoset::chain(names(&["⊥", "⊤"])));
    let all: BTreeSet<BTreeSet<String>> =
        enumerate_filters(&two).unwrap().iter().map(|g| member_names(&two, g)).collect();
    assert_eq!(all, [set(&["⊤"]), set(&["⊥", "⊤"])].into_iter().collect());

    let cube = powerset_fiber(&names(&["x", "y"])).unwrap();
    let filters = enumerate_filters(&cube).unwrap();
    // {⊤}, ↑{x}, ↑{y} and the whole fiber.
    assert_eq!(filters.len(), 4);
    assert_eq!(filters.iter().filter(|g| classify_filter(&cube, g).unwrap().ultra).count(), 2);
}

#[test]
fn separation_by_ultrafilters_fails_on_the_chain() {
    // 1 ≰ ½, yet the only ultrafilter contains both.
    let f = chain();
    let (half, one) = (by_name(&f, "½"), by_name(&f, "1"));
    assert!(!f.leq(one, half));
    let ultras: Vec<Filter> =
        enumerate_filters(&f).unwrap().into_iter().filter(|g| classify_filter(&f, g).unwrap().ultra).collect();
    assert_eq!(ultras.len(), 1);
    assert!(!ultras.iter().any(|u| u.contains(one) && !u.contains(half)));

    // In a Boolean algebra the separation holds.
    let cube = powerset_fiber(&names(&["x", "y"])).unwrap();
    let ultras: Vec<Filter> =
        enumerate_filters(&cube).unwrap().into_iter().filter(|g| classify_filter(&cube, g).unwrap().ultra).collect();
    for a in 0..cube.len() {
        for b in 0..cube.len() {
            if !cube.leq(a, b) {
                assert!(ultras.iter().any(|u| u.contains(a) && !u.contains(b)));
            }
        }
    }
}

#[test]
fn filters_must_be_upward_and_meet_closed() {
    let cube = powerset_fiber(&names(&["x", "y"])).unwrap();
    let top = cube.top().unwrap();
    let (x, y) = (by_name(&cube, "{x}"), by_name(&cube, "{y}"));
    assert!(Filter::new(&cube, [x]).is_err());
    assert!(Filter::new(&cube, [x, y, top]).is_err());
    assert!(Filter::new(&cube, [x, top]).is_ok());
}
