use std::collections::BTreeSet;
use std::sync::Arc;

use doctrines::constructions::add_axiom;
use doctrines::doctrine::{
    check_morphism, consistency_status, is_isomorphism, Consistency, Doctrine, DoctrineMorphism, Layer,
    ProductPreservation,
};
use doctrines::io::{gen_subset_doctrine, named_fixtures, subsets_fixture, subterminal_fixture, trivial_fixture};
use doctrines::model::{
    extract_model, extract_model_elementary, henkin_model_pipeline, quotient_by_filter, quotient_mediator,
    quotient_mediator_uniqueness, ModelError, ModelLaw, ModelMode, PipelineOptions,
};
use doctrines::order::{classify_filter, enumerate_filters, extend_to_ultrafilter, generated_filter, Filter};

fn layers(d: &Doctrine) -> Vec<Layer> {
    d.layers.iter().copied().collect()
}

fn top_filter(d: &Doctrine) -> Filter {
    generated_filter(d.terminal_fiber(), &[]).unwrap()
}

fn greedy(d: &Doctrine) -> Filter {
    extend_to_ultrafilter(d.terminal_fiber(), &top_filter(d)).unwrap()
}

#[test]
fn quotients_preserve_every_layer_and_are_sound() {
    for (name, d) in named_fixtures() {
        let p = Arc::new(d);
        let cat = &p.base;
        for filter in enumerate_filters(p.terminal_fiber()).unwrap() {
            let qp = quotient_by_filter(&p, &filter).unwrap();
            let check = check_morphism(&qp.q, &layers(&p), ProductPreservation::Strict).unwrap();
            assert!(check.passes(), "{name}: {:?}", check.violations.first());
            let t = cat.terminal();
            let top = qp.result.terminal_fiber().top().unwrap();
            assert!(filter.members().all(|th| qp.class(t, th) == top), "{name}");
            // q(α) ≤ q(β) iff P(!)θ ∧ α ≤ β for some θ ∈ ∇.
            for a in cat.objects() {
                let f = p.fiber(a);
                for x in 0..f.len() {
                    for y in 0..f.len() {
                        let guarded = filter.members().any(|th| {
                            let g = p.reindex_elem(cat.bang(a), th);
                            f.leq(f.meet(g, x).unwrap(), y)
                        });
                        assert_eq!(qp.result.fiber(a).leq(qp.class(a, x), qp.class(a, y)), guarded, "{name}");
                    }
                }
            }
            let whole = filter.is_whole(p.terminal_fiber());
            if whole {
                assert_eq!(consistency_status(&qp.result).status, Consistency::Inconsistent, "{name}");
                assert!(qp.result.fibers.iter().all(|f| f.len() == 1), "{name}");
            }
            if filter.len() == 1 {
                assert!(is_isomorphism(&qp.q), "{name}: trivial filter");
            }
        }
    }
}

#[test]
fn subsets_quotient_by_its_ultrafilter_is_an_isomorphism() {
    let p = Arc::new(subsets_fixture());
    let star = p.element(p.base.terminal(), "{*}").unwrap();
    let filter = Filter::new(p.terminal_fiber(), [star]).unwrap();
    assert!(classify_filter(p.terminal_fiber(), &filter).unwrap().ultra);
    let qp = quotient_by_filter(&p, &filter).unwrap();
    assert!(is_isomorphism(&qp.q));
}

#[test]
fn quotient_universal_property() {
    for (name, d) in named_fixtures() {
        let p = Arc::new(d);
        for filter in enumerate_filters(p.terminal_fiber()).unwrap() {
            let qp = quotient_by_filter(&p, &filter).unwrap();
            // q itself sends ∇ to ⊤ and factors through q by the identity.
            let mediator = quotient_mediator(&qp, &qp.q).unwrap();
            assert_eq!(mediator.components, DoctrineMorphism::identity(qp.result.clone()).components, "{name}");
            let u = quotient_mediator_uniqueness(&qp, &qp.q).unwrap();
            assert!(u.confirmed(), "{name}: {u:?}");
            // The identity factors only when ∇ = {⊤}.
            let id = DoctrineMorphism::identity(p.clone());
            match quotient_mediator(&qp, &id) {
                Ok(m) => {
                    assert_eq!(filter.len(), 1, "{name}");
                    assert!(qp.q.then(&m).unwrap().components == id.components);
                    assert!(quotient_mediator_uniqueness(&qp, &id).unwrap().confirmed());
                }
                Err(e) => {
                    assert!(filter.len() > 1, "{name}");
                    assert!(matches!(e, ModelError::NoFactorization(_)), "{name}: {e}");
                }
            }
        }
    }
}

#[test]
fn subsets_model_reproduces_subsets() {
    let p = Arc::new(subsets_fixture());
    let cat = &p.base;
    let model = extract_model(&p, &greedy(&p)).unwrap();
    assert_eq!(model.mode, ModelMode::Plain);
    let x = p.object("{0,1}").unwrap();
    // Constants 1 → {0,1} are the two points; P(c)S ∈ ∇ iff c ∈ S.
    let points: Vec<usize> = cat.hom(cat.terminal(), x).iter().map(|c| c.index()).collect();
    assert_eq!(points.len(), 2);
    for s in 0..p.fiber(x).len() {
        let expect: BTreeSet<usize> = cat
            .hom(cat.terminal(), x)
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let name = cat.morphism_name(**c);
                let point = &name[name.len() - 1..];
                p.fiber(x).name(s).trim_matches(['{', '}']).split(',').any(|m| m == point)
            })
            .map(|(i, _)| i)
            .collect();
        assert_eq!(model.interp(x, s), &expect, "{}", p.fiber(x).name(s));
    }
    let report = model.verify();
    assert!(report.passes(), "{:?}", report.violations);
    assert!(report.holds(ModelLaw::Forall));
    assert!(report.holds(ModelLaw::Delta));
    let adapter = model.adapter().unwrap();
    let check = check_morphism(
        &adapter.morphism,
        &[Layer::Bounded, Layer::Implicational, Layer::Existential],
        ProductPreservation::UpToIso,
    )
    .unwrap();
    assert!(check.passes(), "{:?}", check.violations.first());
}

#[test]
fn elementary_model_on_subsets_identifies_nothing() {
    let p = Arc::new(subsets_fixture());
    let filter = top_filter(&p);
    let plain = extract_model(&p, &filter).unwrap();
    let model = extract_model_elementary(&p, &filter).unwrap();
    assert_eq!(model.mode, ModelMode::Elementary);
    for a in p.base.objects() {
        assert_eq!(model.carrier(a).len(), plain.carrier(a).len());
        assert_eq!(model.interp[a.index()], plain.interp[a.index()]);
    }
    assert_eq!(model.arrow_action, plain.arrow_action);
    let report = model.verify();
    assert!(report.passes(), "{:?}", report.violations);
    assert!(report.laws[&ModelLaw::Delta].claimed && report.holds(ModelLaw::Delta));
    let adapter = model.adapter().unwrap();
    let check = check_morphism(
        &adapter.morphism,
        &[Layer::Bounded, Layer::Implicational, Layer::Existential, Layer::Elementary],
        ProductPreservation::UpToIso,
    )
    .unwrap();
    assert!(check.passes(), "{:?}", check.violations.first());
}

#[test]
fn extraction_gates() {
    let sub = Arc::new(subterminal_fixture());
    assert!(matches!(extract_model(&sub, &greedy(&sub)), Err(ModelError::NotRich(_))));
    let triv = Arc::new(trivial_fixture());
    assert!(matches!(extract_model(&triv, &top_filter(&triv)), Err(ModelError::Inconsistent { step: None })));
    let cube = Arc::new(doctrines::io::boolean_cube_fixture());
    assert!(matches!(extract_model(&cube, &top_filter(&cube)), Err(ModelError::NotUltra)));
    let whole = Filter::new(cube.terminal_fiber(), 0..cube.terminal_fiber().len()).unwrap();
    assert!(matches!(extract_model(&cube, &whole), Err(ModelError::Improper)));
    let model = extract_model(&cube, &greedy(&cube)).unwrap();
    assert!(model.verify().passes());
    let chain = Arc::new(doctrines::io::gen_chain_fixture());
    let model = extract_model(&chain, &greedy(&chain)).unwrap();
    let report = model.verify();
    assert!(report.passes(), "{:?}", report.violations);
    assert!(!report.laws[&ModelLaw::Forall].claimed);
}

#[test]
fn pipeline_on_rich_input_skips_saturation() {
    let p = Arc::new(subsets_fixture());
    let run = henkin_model_pipeline(&p, &PipelineOptions::with_budget(0)).unwrap();
    assert!(run.trace.saturation.steps.is_empty());
    assert!(!run.trace.saturation.truncated);
    assert!(run.passes(), "{:?} {:?}", run.trace.model_report.violations, run.trace.composite_check.violations.first());
    let direct = extract_model_elementary(&p, &greedy(&p)).unwrap();
    assert_eq!(run.model.interp, direct.interp);
    assert_eq!(run.model.carriers, direct.carriers);
}

#[test]
fn pipeline_witnesses_the_missing_constant() {
    let p = Arc::new(subterminal_fixture());
    let run = henkin_model_pipeline(&p, &PipelineOptions::default()).unwrap();
    assert_eq!(run.trace.saturation.steps.len(), 1);
    assert!(run.passes(), "{:?} {:?}", run.trace.model_report.violations, run.trace.composite_check.violations.first());
    // interp(𝐭, ∃φ) = interp(𝐭, P(c)φ) for the added constant.
    let step = &run.trace.saturation.steps[0];
    let (b, phi) = run.saturation.image(step.sort, step.element).unwrap();
    let sat = &run.saturation.doctrine;
    let t = sat.base.terminal();
    let pr = sat.base.product(t, b).unwrap();
    let exists = sat.exists[&(t, b)].apply(sat.reindex_elem(pr.pr2, phi));
    let witness =
        sat.base.hom(t, b).iter().copied().find(|c| sat.terminal_fiber().leq(exists, sat.reindex_elem(*c, phi)));
    let c = witness.expect("rich after saturation");
    assert_eq!(run.model.interp(t, exists), run.model.interp(t, sat.reindex_elem(c, phi)));
}

#[test]
fn pipeline_gates() {
    let triv = Arc::new(trivial_fixture());
    assert!(matches!(henkin_model_pipeline(&triv, &PipelineOptions::default()), Err(ModelError::Inconsistent { .. })));
    let p = Arc::new(subsets_fixture());
    let bottom = p.terminal_fiber().bottom().unwrap();
    let ax = add_axiom(&p, bottom).unwrap();
    assert!(matches!(
        henkin_model_pipeline(&ax.doctrine, &PipelineOptions::default()),
        Err(ModelError::Inconsistent { step: None })
    ));
    let sub = Arc::new(subterminal_fixture());
    let err = henkin_model_pipeline(&sub, &PipelineOptions::with_budget(0)).unwrap_err();
    assert!(matches!(err, ModelError::Truncated { ref uncovered } if !uncovered.is_empty()), "{err}");
}

#[test]
fn pipeline_on_generated_subset_doctrines() {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for carriers in [vec![s(&["*"])], vec![s(&["*"]), s(&["0", "1"])], vec![s(&["a", "b"])]] {
        let p = Arc::new(gen_subset_doctrine(&carriers).unwrap());
        for elementary in [false, true] {
            let options = PipelineOptions { elementary: Some(elementary), ..PipelineOptions::default() };
            let run = henkin_model_pipeline(&p, &options).unwrap();
            let r = &run.trace.model_report;
            assert!(run.passes(), "{}: {:?} {:?}", p.name, r.violations, run.trace.composite_check.violations.first());
            for law in
                [ModelLaw::Top, ModelLaw::Bottom, ModelLaw::Meet, ModelLaw::Imp, ModelLaw::Exists, ModelLaw::Forall]
            {
                assert!(r.holds(law), "{}: {law}", p.name);
            }
            assert!(r.holds(ModelLaw::Delta), "{}", p.name);
            assert_eq!(r.laws[&ModelLaw::Delta].claimed, elementary);
        }
    }
}
