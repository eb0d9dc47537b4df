use std::sync::Arc;

use doctrines::constructions::{
    add_axiom, add_constant, double_negation_fragment, henkin_saturate, henkin_step, mediate_constant,
    SaturationOptions, Targets,
};
use doctrines::doctrine::{consistency_status, is_isomorphism, Consistency, DoctrineMorphism};
use doctrines::io::{
    boolean_cube_fixture, gen_chain_fixture, parse_doctrine, serialize_doctrine, subsets_fixture, IoError,
};
use serde_json::Value;

fn subsets() -> Arc<doctrines::doctrine::Doctrine> {
    Arc::new(subsets_fixture())
}

#[test]
fn constant_at_the_terminal_changes_nothing() {
    let p = subsets();
    let ext = add_constant(&p, p.base.terminal()).unwrap();
    assert!(is_isomorphism(&ext.morphism));
    assert_eq!(ext.doctrine.fibers.len(), p.fibers.len());
}

#[test]
fn constant_of_sort_bits_squares_the_terminal_fiber() {
    let p = subsets();
    let bit = p.object("{0,1}").unwrap();
    let ext = add_constant(&p, bit).unwrap();
    let kt = ext.kleisli.kleisli_object(p.base.terminal()).unwrap();
    // 𝒫({0,1} × {∗}) has 2^(2·1) elements.
    assert_eq!(ext.doctrine.fiber(kt).len(), 4);
}

#[test]
fn evaluating_the_new_constant() {
    let p = subsets();
    let bit = p.object("{0,1}").unwrap();
    let ext = add_constant(&p, bit).unwrap();
    let kt = ext.kleisli.kleisli_object(p.base.terminal()).unwrap();
    // Over 1 the fiber of P_X is 𝒫({0,1}×1) = 𝒫({0,1}); "x = 1" is the subset {1}.
    let x_is_one = ext.doctrine.element(kt, "{1}").unwrap();
    let id = DoctrineMorphism::identity(p.clone());
    for (constant, expected) in [("1>{0,1}:0", "{}"), ("1>{0,1}:1", "{*}")] {
        let c = p.base.find_morphism(constant).unwrap();
        let m = mediate_constant(&ext, &id, c).unwrap();
        let image = m.apply(kt, x_is_one);
        assert_eq!(p.fiber(m.object(kt)).name(image), expected, "{constant}");
    }
}

#[test]
fn false_axioms_collapse_every_fiber() {
    for p in [subsets(), Arc::new(gen_chain_fixture()), Arc::new(boolean_cube_fixture())] {
        let bottom = p.terminal_fiber().bottom().unwrap();
        let ext = add_axiom(&p, bottom).unwrap();
        assert!(ext.doctrine.fibers.iter().all(|f| f.len() == 1), "{}", p.name);
        assert_eq!(consistency_status(&ext.doctrine).status, Consistency::Inconsistent);
    }
    // In the subsets doctrine ⊥ over 1 is the empty subset.
    let p = subsets();
    let empty = p.element(p.base.terminal(), "{}").unwrap();
    let ext = add_axiom(&p, empty).unwrap();
    for a in ext.doctrine.base.objects() {
        assert_eq!(ext.doctrine.fiber(a).len(), 1);
        assert_eq!(ext.doctrine.fiber(a).name(0), "{}");
    }
}

#[test]
fn axiom_of_truth_only_renames() {
    let p = subsets();
    let top = p.terminal_fiber().top().unwrap();
    let ext = add_axiom(&p, top).unwrap();
    assert!(is_isomorphism(&ext.morphism));
    let strip = |text: &str| {
        let mut v: Value = serde_json::from_str(text).unwrap();
        v["meta"] = Value::Null;
        for fiber in v["fibers"].as_array_mut().unwrap() {
            fiber["elements"] = Value::Null;
        }
        v
    };
    assert_eq!(strip(&serialize_doctrine(&ext.doctrine)), strip(&serialize_doctrine(&p)));
}

#[test]
fn henkin_step_on_a_tautology_adds_only_the_constant() {
    let p = subsets();
    for b in [p.base.terminal(), p.object("{0,1}").unwrap()] {
        let top = p.fiber(b).top().unwrap();
        let step = henkin_step(&p, b, top).unwrap();
        let pb = &step.constant.doctrine;
        assert_eq!(pb.fiber(pb.base.terminal()).ops.top, Some(step.psi));
        assert!(is_isomorphism(&step.axiom.morphism));
        assert!(step.inequality && step.equality);
    }
}

#[test]
fn henkin_witness_for_the_bit_one() {
    let p = subsets();
    let bit = p.object("{0,1}").unwrap();
    let one = p.element(bit, "{1}").unwrap();
    let step = henkin_step(&p, bit, one).unwrap();
    let t = step.doctrine.base.terminal();
    let top = step.doctrine.fiber(t).top().unwrap();
    // ∃ of a nonempty subset is true, so the constant must satisfy it.
    assert_eq!(step.exists_image, top);
    assert_eq!(step.instance, top);
    assert_eq!(consistency_status(&step.doctrine).status, Consistency::TwoValued);
}

#[test]
fn saturation_with_no_targets_is_the_identity() {
    let p = subsets();
    let options = SaturationOptions { targets: Targets::Listed(vec![]), ..SaturationOptions::default() };
    let sat = henkin_saturate(&p, &options).unwrap();
    assert!(sat.trace.steps.is_empty() && !sat.trace.truncated);
    assert_eq!(*sat.doctrine, *p);
    let id = DoctrineMorphism::identity(p.clone());
    assert_eq!(
        (&sat.morphism.obj_map, &sat.morphism.mor_map, &sat.morphism.components),
        (&id.obj_map, &id.mor_map, &id.components)
    );
}

#[test]
fn saturation_budget_truncates() {
    let p = subsets();
    let t = p.base.terminal();
    let options = SaturationOptions {
        targets: Targets::Listed(vec![(t, 0), (t, 1)]),
        budget: Some(1),
        ..SaturationOptions::default()
    };
    let sat = henkin_saturate(&p, &options).unwrap();
    assert_eq!(sat.trace.steps.len(), 1);
    assert!(sat.trace.truncated);
    assert_eq!(sat.trace.unprocessed, vec![(t, 1)]);
}

#[test]
fn double_negation_of_a_boolean_doctrine_is_itself() {
    let p = Arc::new(boolean_cube_fixture());
    let frag = double_negation_fragment(&p).unwrap();
    assert_eq!(
        frag.doctrine.fibers.iter().map(|f| f.len()).collect::<Vec<_>>(),
        p.fibers.iter().map(|f| f.len()).collect::<Vec<_>>()
    );
    assert!(is_isomorphism(&frag.morphism));
    assert!(frag.elements.iter().all(|e| e.iter().enumerate().all(|(i, x)| i == *x)));
}

#[test]
fn dangling_and_syntax_errors_are_distinct() {
    let text = serialize_doctrine(&subsets_fixture());
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["category"]["composition"][0][0] = Value::from(1_000_000);
    let err = parse_doctrine(&v.to_string()).unwrap_err();
    assert!(matches!(err, IoError::Dangling(_)), "{err}");

    let err = parse_doctrine("{\n  \"meta\": ,\n}").unwrap_err();
    assert!(matches!(err, IoError::Syntax { line: 2, .. }), "{err}");
}
