use std::sync::Arc;

use doctrines::constructions::{
    add_axiom, add_constant, colimit_mediator, directed_colimit, henkin_step, relabel_elements, FiniteDirectedDiagram,
};
use doctrines::doctrine::{check_morphism, is_isomorphism, Doctrine, DoctrineMorphism, Layer, ProductPreservation};
use doctrines::io::{boolean_cube_fixture, named_fixtures, subterminal_fixture};

fn identity_tables(m: &DoctrineMorphism) -> bool {
    let base = &m.src.base;
    base.objects().all(|a| m.object(a) == a)
        && base.morphisms().all(|f| m.morphism(f) == f)
        && base.objects().all(|a| (0..m.src.fiber(a).len()).all(|x| m.apply(a, x) == x))
}

fn same_tables(a: &DoctrineMorphism, b: &DoctrineMorphism) -> bool {
    a.obj_map == b.obj_map && a.mor_map == b.mor_map && a.components == b.components
}

fn shared_layers(m: &DoctrineMorphism) -> Vec<Layer> {
    m.src.layers.intersection(&m.dst.layers).copied().collect()
}

/// The colimit is a cocone, and its leg at the maximum node is inverted by the mediator
/// built from the edges into that node.
fn assert_colimit_is_maximum(label: &str, d: &FiniteDirectedDiagram) {
    let c = directed_colimit(d).unwrap_or_else(|e| panic!("{label}: {e}"));
    let n = d.nodes().len();
    for i in 0..n {
        let check = check_morphism(&c.cocone[i], &shared_layers(&c.cocone[i]), ProductPreservation::Strict).unwrap();
        assert!(check.passes(), "{label}: leg {i} {:?}", check.violations.first());
        for j in 0..n {
            if let Some(e) = d.edge(i, j) {
                assert!(same_tables(&e.then(&c.cocone[j]).unwrap(), &c.cocone[i]), "{label}: {i} → {j}");
            }
        }
    }
    let max = d.maximum();
    let leg = &c.cocone[max];
    assert!(is_isomorphism(leg), "{label}");
    let into_max: Vec<DoctrineMorphism> = (0..n).map(|i| d.edge(i, max).unwrap().clone()).collect();
    let inverse = colimit_mediator(d, &c, &into_max).unwrap();
    assert!(identity_tables(&leg.then(&inverse).unwrap()), "{label}: leg then inverse");
    assert!(identity_tables(&inverse.then(leg).unwrap()), "{label}: inverse then leg");
}

fn relabel_cycle(p: &Arc<Doctrine>) -> FiniteDirectedDiagram {
    let r = relabel_elements(p, "'").unwrap();
    FiniteDirectedDiagram::new(vec![p.clone(), r.doctrine.clone()], vec![(0, 1, r.forward), (1, 0, r.backward)])
        .unwrap()
}

/// Henkin steps whose morphism starts at the current node itself, first admissible target first.
fn henkin_chain(p: &Arc<Doctrine>, length: usize) -> Vec<DoctrineMorphism> {
    let mut current = p.clone();
    let mut steps = Vec::new();
    'grow: while steps.len() < length {
        let objects: Vec<_> = current.base.objects().collect();
        for b in objects {
            for phi in 0..current.fiber(b).len() {
                let Ok(step) = henkin_step(&current, b, phi) else { continue };
                if *step.morphism.src == *current {
                    assert!(step.inequality && step.equality);
                    current = step.doctrine.clone();
                    steps.push(step.morphism);
                    continue 'grow;
                }
            }
        }
        break;
    }
    steps
}

#[test]
fn two_cycle_of_relabelings() {
    for (name, d) in named_fixtures() {
        assert_colimit_is_maximum(&format!("2-cycle {name}"), &relabel_cycle(&Arc::new(d)));
    }
}

#[test]
fn single_nodes() {
    for (name, d) in named_fixtures() {
        assert_colimit_is_maximum(&format!("single {name}"), &FiniteDirectedDiagram::single(Arc::new(d)));
    }
}

#[test]
fn henkin_chains() {
    for p in [subterminal_fixture(), boolean_cube_fixture()] {
        let p = Arc::new(p);
        let steps = henkin_chain(&p, 2);
        assert!(!steps.is_empty(), "{}", p.name);
        let d = FiniteDirectedDiagram::chain(steps).unwrap();
        assert_colimit_is_maximum(&format!("henkin chain {}", p.name), &d);
    }
}

#[test]
fn axiom_chain_on_cube() {
    let p = Arc::new(boolean_cube_fixture());
    let t = p.base.terminal();
    let fiber = p.fiber(t);
    // Two coatoms in turn; their meet is not ⊥, so both steps stay consistent.
    let top = fiber.top().unwrap();
    let coatoms: Vec<usize> = (0..fiber.len())
        .filter(|&x| x != top && (0..fiber.len()).all(|y| !fiber.leq(x, y) || y == x || y == top))
        .collect();
    assert!(coatoms.len() >= 2);
    let first = add_axiom(&p, coatoms[0]).unwrap();
    let q = first.doctrine.clone();
    let second = add_axiom(&q, first.morphism.apply(t, coatoms[1])).unwrap();
    let d = FiniteDirectedDiagram::chain(vec![first.morphism, second.morphism]).unwrap();
    assert_eq!(d.nodes().len(), 3);
    assert_colimit_is_maximum("axiom chain", &d);
}

#[test]
fn relabel_chain_of_three() {
    let p = Arc::new(boolean_cube_fixture());
    let a = relabel_elements(&p, "a").unwrap();
    let b = relabel_elements(&a.doctrine, "b").unwrap();
    let d = FiniteDirectedDiagram::chain(vec![a.forward, b.forward]).unwrap();
    assert_colimit_is_maximum("relabel chain", &d);
}

#[test]
fn incomparable_nodes_under_a_common_top() {
    let p = Arc::new(boolean_cube_fixture());
    let a = relabel_elements(&p, "a").unwrap();
    let b = relabel_elements(&a.doctrine, "b").unwrap();
    let through = a.forward.then(&b.forward).unwrap();
    // Nodes 0 and 1 are incomparable; node 2 bounds both.
    let d = FiniteDirectedDiagram::new(
        vec![p.clone(), a.doctrine.clone(), b.doctrine.clone()],
        vec![(0, 2, through), (1, 2, b.forward)],
    )
    .unwrap();
    assert!(!d.leq(0, 1) && !d.leq(1, 0));
    assert_colimit_is_maximum("wedge", &d);
}

#[test]
fn constant_chain_on_subterminal() {
    let p = Arc::new(subterminal_fixture());
    let steps: Vec<DoctrineMorphism> = p
        .base
        .objects()
        .filter_map(|x| add_constant(&p, x).ok())
        .filter(|c| *c.source == *p)
        .take(1)
        .map(|c| c.morphism)
        .collect();
    assert_eq!(steps.len(), 1);
    assert_colimit_is_maximum("constant", &FiniteDirectedDiagram::chain(steps).unwrap());
}

#[test]
fn diagrams_reject_bad_edges() {
    let p = Arc::new(boolean_cube_fixture());
    let a = relabel_elements(&p, "a").unwrap();
    // Reversed endpoints.
    assert!(FiniteDirectedDiagram::new(vec![p.clone(), a.doctrine.clone()], vec![(1, 0, a.forward.clone())]).is_err());
    // No upper bound for two unrelated nodes.
    assert!(FiniteDirectedDiagram::new(vec![p.clone(), a.doctrine.clone()], vec![]).is_err());
    assert!(FiniteDirectedDiagram::chain(vec![]).is_err());
}
