use std::sync::Arc;

use doctrines::constructions::{
    directed_colimit, double_negation_fragment, henkin_saturate, henkin_step, relabel_elements, FiniteDirectedDiagram,
    SaturationOptions, SaturationPolicy, Targets,
};
use doctrines::doctrine::{
    check_morphism, check_rich, check_rich_for, check_structure, consistency_status, is_isomorphism, Consistency,
    Layer, ProductPreservation,
};
use doctrines::io::{named_fixtures, subsets_fixture, subterminal_fixture};

#[test]
fn henkin_step_on_subsets() {
    let p = Arc::new(subsets_fixture());
    for b in p.base.objects() {
        for phi in 0..p.fiber(b).len() {
            match henkin_step(&p, b, phi) {
                Ok(step) => {
                    assert!(step.inequality && step.equality, "{} {}", p.base.object_name(b), phi);
                    assert_eq!(consistency_status(&step.doctrine).status, Consistency::TwoValued);
                }
                // Only the square lacks the products a sort needs.
                Err(e) => {
                    assert_eq!(p.base.object_name(b), "{0,1}×{0,1}", "{e}");
                    assert!(e.to_string().contains("cannot serve as a sort"), "{e}");
                }
            }
        }
    }
}

#[test]
fn saturate_subsets_all() {
    let p = Arc::new(subsets_fixture());
    let sat = henkin_saturate(&p, &SaturationOptions::default()).unwrap();
    assert!(!sat.trace.truncated);
    assert!(!sat.trace.steps.is_empty());
    assert!(sat.trace.first_inconsistent().is_none());
    let images = sat.original_images(&p);
    assert!(!images.is_empty());
    let r = check_rich_for(&sat.doctrine, &images);
    assert!(r.is_rich(), "{:?}", r.failures().collect::<Vec<_>>());
    let layers: Vec<Layer> = sat.doctrine.layers.iter().copied().collect();
    let m = check_morphism(&sat.morphism, &layers, ProductPreservation::UpToIso).unwrap();
    assert!(m.passes(), "{:?}", m.violations.first());
}

#[test]
fn saturate_subterminal() {
    let p = Arc::new(subterminal_fixture());
    assert!(!check_rich(&p).is_rich());
    let opts = SaturationOptions { policy: SaturationPolicy::Unwitnessed, ..Default::default() };
    let sat = henkin_saturate(&p, &opts).unwrap();
    assert_eq!(sat.trace.steps.len(), 1);
    assert!(sat.trace.blocked.is_empty() && !sat.trace.truncated);
    assert!(check_rich(&sat.doctrine).is_rich());
    let one = SaturationOptions { budget: Some(1), targets: Targets::All, ..Default::default() };
    let sat = henkin_saturate(&p, &one).unwrap();
    assert!(sat.trace.truncated);
    assert_eq!(sat.trace.steps.len(), 1);
}

#[test]
fn colimits_and_negation() {
    for (name, d) in named_fixtures() {
        let p = Arc::new(d);
        let r = relabel_elements(&p, "'").unwrap();
        let diagram = FiniteDirectedDiagram::new(
            vec![p.clone(), r.doctrine.clone()],
            vec![(0, 1, r.forward.clone()), (1, 0, r.backward.clone())],
        )
        .unwrap();
        let c = directed_colimit(&diagram).unwrap();
        let leg = &c.cocone[diagram.maximum()];
        assert!(is_isomorphism(leg), "{name}");
        if p.fibers.iter().all(|f| f.ops.imp.is_some() && f.ops.bottom.is_some()) {
            let nn = double_negation_fragment(&p).unwrap();
            let rep = check_structure(&nn.doctrine, &[Layer::Boolean]).unwrap();
            assert!(rep.passes(), "{name}");
        }
    }
}
