use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::constructions::{
    add_axiom, add_constant, directed_colimit, double_negation_fragment, henkin_saturate, henkin_step,
    relabel_elements, ConstructionError, FiniteDirectedDiagram, SaturationOptions, SaturationPolicy,
};
use crate::doctrine::{
    check_morphism, check_rich_for, check_structure, consistency_status, is_isomorphism, same_doctrine, Doctrine,
    DoctrineError, DoctrineMorphism, Layer, MorphismCheck, ProductPreservation,
};
use crate::fincat::ObjId;
use crate::io::{fixture, parse_doctrine, serialize_doctrine, to_canonical_json};
use crate::model::{henkin_model_pipeline, quotient_by_filter, FilterChoice, ModelError, PipelineOptions};
use crate::order::{classify_filter, enumerate_filters, extend_to_ultrafilter, generated_filter, Filter};

use super::{CliError, Command, Construction, Policy, Report};

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Loads a document path or `fixture:NAME` and records the digest of its text.
fn load(input: &str, report: &mut Report) -> Result<Arc<Doctrine>, CliError> {
    let (text, d) = if let Some(name) = input.strip_prefix("fixture:") {
        let d = fixture(name).ok_or_else(|| usage(format!("unknown fixture `{name}`")))?;
        (serialize_doctrine(&d), d)
    } else {
        let text = fs::read_to_string(input).map_err(|e| usage(format!("cannot read `{input}`: {e}")))?;
        let d = parse_doctrine(&text).map_err(|e| usage(format!("{input}: {e}")))?;
        (text, d)
    };
    report.inputs.insert(input.to_string(), super::sha256_hex(&text));
    Ok(Arc::new(d))
}

fn write_output(path: &Option<String>, text: &str, report: &mut Report) -> Result<(), CliError> {
    if let Some(path) = path {
        fs::write(path, text).map_err(|e| usage(format!("cannot write `{path}`: {e}")))?;
        report.set("output", json!({ "path": path, "sha256": super::sha256_hex(text) }));
    }
    Ok(())
}

fn object(d: &Doctrine, name: &str) -> Result<ObjId, CliError> {
    d.object(name).map_err(usage)
}

fn element(d: &Doctrine, a: ObjId, name: &str) -> Result<usize, CliError> {
    d.element(a, name).map_err(usage)
}

fn terminal_elements(d: &Doctrine, names: &[String]) -> Result<Vec<usize>, CliError> {
    names.iter().map(|n| element(d, d.base.terminal(), n)).collect()
}

fn common_layers(m: &DoctrineMorphism) -> Vec<Layer> {
    m.src.layers.intersection(&m.dst.layers).copied().collect()
}

fn record_morphism(report: &mut Report, name: &str, check: &MorphismCheck) {
    let detail = match check.violations.first() {
        None => format!("{} instances, 0 failures", check.checked),
        Some(v) => format!("{} instances, {} failures; first: {}", check.checked, check.failure_count(), v.detail),
    };
    report.check(name, check.passes(), detail);
}

fn record_structure(report: &mut Report, d: &Doctrine, layers: &[Layer]) -> Result<(), CliError> {
    match check_structure(d, layers) {
        Ok(rep) => {
            for (layer, lr) in &rep.layers {
                report.check(
                    format!("layer {layer}"),
                    lr.failures == 0,
                    format!("{} instances, {} failures", lr.checked, lr.failures),
                );
            }
            let examples: Vec<String> = rep.counterexamples().map(|c| c.describe(d)).collect();
            if !examples.is_empty() {
                report.set("counterexamples", json!(examples));
            }
        }
        Err(e @ DoctrineError::MissingWitness { .. }) => report.fail("witnesses", e.to_string()),
        Err(e) => return Err(usage(e)),
    }
    Ok(())
}

fn summary(d: &Doctrine) -> Value {
    json!({
        "name": d.name,
        "objects": d.base.object_count(),
        "morphisms": d.base.morphism_count(),
        "elements": d.element_count(),
        "layers": d.layers.iter().map(|l| l.name()).collect::<Vec<_>>(),
    })
}

/// Unknown names are usage errors; everything else a construction reports is semantic.
fn construction_failed(report: &mut Report, what: &str, e: ConstructionError) -> Result<(), CliError> {
    match e {
        ConstructionError::ElementOutOfRange { .. } | ConstructionError::Doctrine(DoctrineError::UnknownObject(_)) => {
            Err(usage(e))
        }
        e => {
            report.fail(what, e.to_string());
            Ok(())
        }
    }
}

pub(super) fn execute(command: &Command, mut report: Report) -> Result<Report, CliError> {
    match command {
        Command::Check { input, layers } => {
            let d = load(input, &mut report)?;
            let layers: Vec<Layer> = if layers.is_empty() {
                d.layers.iter().copied().collect()
            } else {
                layers.iter().map(|l| Layer::from_str(l.trim())).collect::<Result<_, _>>().map_err(usage)?
            };
            record_structure(&mut report, &d, &layers)?;
            report.set("doctrine", summary(&d));
        }
        Command::Construct { input, action, out } => {
            let p = load(input, &mut report)?;
            construct(&p, action, out, &mut report)?;
        }
        Command::Saturate { input, budget, per_object, policy, out } => {
            let p = load(input, &mut report)?;
            let mut options = SaturationOptions {
                budget: *budget,
                policy: match policy {
                    Policy::Every => SaturationPolicy::EveryTarget,
                    Policy::Unwitnessed => SaturationPolicy::Unwitnessed,
                },
                ..SaturationOptions::default()
            };
            for entry in per_object {
                let (name, n) =
                    entry.split_once('=').ok_or_else(|| usage(format!("expected OBJECT=N, got `{entry}`")))?;
                let n: usize = n.parse().map_err(|_| usage(format!("bad budget in `{entry}`")))?;
                options.per_object.insert(object(&p, name)?, n);
            }
            saturate(&p, &options, out, &mut report)?;
        }
        Command::Ultrafilter { input, generators } => {
            let p = load(input, &mut report)?;
            let gens = terminal_elements(&p, generators)?;
            ultrafilter(&p, &gens, &mut report);
        }
        Command::Quotient { input, filter, out } => {
            let p = load(input, &mut report)?;
            let gens = terminal_elements(&p, filter)?;
            quotient(&p, &gens, out, &mut report)?;
        }
        Command::Model { input, budget, elementary, filter, out } => {
            let p = load(input, &mut report)?;
            let mut options = PipelineOptions::default();
            options.saturation.budget = *budget;
            options.elementary = elementary.then_some(true);
            if !(filter.is_empty() || filter.as_slice() == ["greedy"]) {
                options.filter = FilterChoice::Explicit(filter.clone());
            }
            model(&p, &options, out, &mut report)?;
        }
        Command::Colimit { input, steps } => {
            let p = load(input, &mut report)?;
            colimit(&p, steps, &mut report)?;
        }
    }
    Ok(report)
}

fn construct(
    p: &Arc<Doctrine>,
    action: &Construction,
    out: &Option<String>,
    report: &mut Report,
) -> Result<(), CliError> {
    let t = p.base.terminal();
    let (doctrine, morphism) = match action {
        Construction::AddConstant { object: x } => {
            let x = object(p, x)?;
            match add_constant(p, x) {
                Ok(ext) => {
                    report.set("constant", json!(ext.doctrine.base.morphism_name(ext.constant)));
                    (ext.doctrine, ext.morphism)
                }
                Err(e) => return construction_failed(report, "add-constant", e),
            }
        }
        Construction::AddAxiom { element: phi } => {
            let phi = element(p, t, phi)?;
            match add_axiom(p, phi) {
                Ok(ax) => {
                    report.info("isomorphism", if is_isomorphism(&ax.morphism) { "yes" } else { "no" });
                    (ax.doctrine, ax.morphism)
                }
                Err(e) => return construction_failed(report, "add-axiom", e),
            }
        }
        Construction::Henkin { object: b, element: phi } => {
            let b = object(p, b)?;
            let phi = element(p, b, phi)?;
            match henkin_step(p, b, phi) {
                Ok(step) => {
                    let kt = step.doctrine.base.terminal();
                    let fiber = step.doctrine.fiber(kt);
                    report.check(
                        "axiom inequality",
                        step.inequality,
                        format!("{} ≤ {}", fiber.name(step.exists_image), fiber.name(step.instance)),
                    );
                    report.info("equality", if step.equality { "yes" } else { "no" });
                    report.set("witness", json!(step.doctrine.base.morphism_name(step.witness)));
                    (step.doctrine, step.morphism)
                }
                Err(e) => return construction_failed(report, "henkin", e),
            }
        }
        Construction::Notnot => match double_negation_fragment(p) {
            Ok(nn) => {
                let f = nn.doctrine.terminal_fiber();
                if let Ok(neg) = (0..f.len())
                    .map(|x| Ok((f.name(x).to_string(), json!(f.name(f.neg(x)?)))))
                    .collect::<Result<BTreeMap<_, _>, crate::order::OrderError>>()
                {
                    report.set("negation", json!(neg));
                }
                record_structure(report, &nn.doctrine, &[Layer::Boolean])?;
                let check =
                    check_morphism(&nn.morphism, &[Layer::Primary], ProductPreservation::Strict).map_err(usage)?;
                record_morphism(report, "morphism", &check);
                report.set("result", summary(&nn.doctrine));
                return write_output(out, &serialize_doctrine(&nn.doctrine), report);
            }
            Err(e) => return construction_failed(report, "notnot", e),
        },
    };
    let layers: Vec<Layer> = doctrine.layers.iter().copied().collect();
    record_structure(report, &doctrine, &layers)?;
    let check = check_morphism(&morphism, &common_layers(&morphism), ProductPreservation::UpToIso).map_err(usage)?;
    record_morphism(report, "morphism", &check);
    report.set("result", summary(&doctrine));
    write_output(out, &serialize_doctrine(&doctrine), report)
}

fn saturate(
    p: &Arc<Doctrine>,
    options: &SaturationOptions,
    out: &Option<String>,
    report: &mut Report,
) -> Result<(), CliError> {
    let sat = match henkin_saturate(p, options) {
        Ok(s) => s,
        Err(e) => return construction_failed(report, "saturation", e),
    };
    let cat = &p.base;
    let label = |(b, x): (ObjId, usize)| format!("{} over {}", p.fiber(b).name(x), cat.object_name(b));
    let trace = &sat.trace;
    report.check(
        "steps consistent",
        trace.first_inconsistent().is_none(),
        match trace.first_inconsistent() {
            None => format!("{} steps", trace.steps.len()),
            Some(i) => format!("step {i} is inconsistent"),
        },
    );
    let images = sat.original_images(p);
    let rich = check_rich_for(&sat.doctrine, &images);
    let witnessed = rich.entries.iter().filter(|e| e.witness.is_some()).count();
    report.info("images witnessed", format!("{witnessed} of {}", rich.entries.len()));
    let check =
        check_morphism(&sat.morphism, &common_layers(&sat.morphism), ProductPreservation::UpToIso).map_err(usage)?;
    record_morphism(report, "composite", &check);
    report.info("truncated", if trace.truncated { "yes" } else { "no" });
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "target": label((s.sort, s.element)),
                "label": format!("{}#{}", cat.object_name(s.label.0), s.label.1),
                "psi": s.psi,
                "inequality": s.inequality,
                "equality": s.equality,
                "consistency": s.consistency.name(),
            })
        })
        .collect();
    report.set("steps", json!(steps));
    report.set("blocked", json!(trace.blocked.iter().map(|t| label(*t)).collect::<Vec<_>>()));
    report.set("witnessed", json!(trace.witnessed.iter().map(|t| label(*t)).collect::<Vec<_>>()));
    report.set("unprocessed", json!(trace.unprocessed.iter().map(|t| label(*t)).collect::<Vec<_>>()));
    report.set("result", summary(&sat.doctrine));
    write_output(out, &serialize_doctrine(&sat.doctrine), report)
}

fn ultrafilter(p: &Doctrine, gens: &[usize], report: &mut Report) {
    let fiber = p.terminal_fiber();
    let run = || -> Result<(Filter, Filter), crate::order::OrderError> {
        let start = generated_filter(fiber, gens)?;
        let ultra = extend_to_ultrafilter(fiber, &start)?;
        Ok((start, ultra))
    };
    let (start, ultra) = match run() {
        Ok(v) => v,
        Err(e) => return report.fail("ultrafilter", e.to_string()),
    };
    match classify_filter(fiber, &ultra) {
        Ok(class) => {
            report.check("proper", class.proper, "");
            report.check("ultra", class.ultra, "");
            report.check("maximal", class.maximal, "");
        }
        Err(e) => report.fail("classify", e.to_string()),
    }
    if fiber.len() <= 16 {
        match enumerate_filters(fiber) {
            Ok(all) => {
                let classes: Vec<_> = all.iter().filter_map(|f| classify_filter(fiber, f).ok()).collect();
                let agree = classes.len() == all.len() && classes.iter().all(|c| c.ultra == c.maximal);
                let ultras = classes.iter().filter(|c| c.ultra).count();
                report.check(
                    "ultra iff maximal",
                    agree,
                    format!("{} filters, {ultras} proper ultrafilters", all.len()),
                );
            }
            Err(e) => report.fail("enumerate", e.to_string()),
        }
    }
    report.set("generated", json!(start.names(fiber)));
    report.set("ultrafilter", json!(ultra.names(fiber)));
}

fn quotient(p: &Arc<Doctrine>, gens: &[usize], out: &Option<String>, report: &mut Report) -> Result<(), CliError> {
    let filter = generated_filter(p.terminal_fiber(), gens).map_err(usage)?;
    let qp = match quotient_by_filter(p, &filter) {
        Ok(q) => q,
        Err(e) => {
            report.fail("quotient", e.to_string());
            return Ok(());
        }
    };
    let layers: Vec<Layer> = p.layers.iter().copied().collect();
    let check = check_morphism(&qp.q, &layers, ProductPreservation::Strict).map_err(usage)?;
    record_morphism(report, "quotient morphism", &check);
    let t = p.base.terminal();
    let top = qp.result.terminal_fiber().top().ok();
    report.check("filter sent to top", filter.members().all(|th| Some(qp.class(t, th)) == top), "");
    report.info("isomorphism", if is_isomorphism(&qp.q) { "yes" } else { "no" });
    report.info("consistency", consistency_status(&qp.result).status.name());
    let classes: BTreeMap<String, Vec<Vec<String>>> = p
        .base
        .objects()
        .map(|a| {
            let f = p.fiber(a);
            let cs =
                qp.classes(a).into_iter().map(|c| c.into_iter().map(|x| f.name(x).to_string()).collect()).collect();
            (p.base.object_name(a).to_string(), cs)
        })
        .collect();
    report.set("filter", json!(filter.names(p.terminal_fiber())));
    report.set("classes", json!(classes));
    report.set("result", summary(&qp.result));
    write_output(out, &serialize_doctrine(&qp.result), report)
}

fn model(
    p: &Arc<Doctrine>,
    options: &PipelineOptions,
    out: &Option<String>,
    report: &mut Report,
) -> Result<(), CliError> {
    let run = match henkin_model_pipeline(p, options) {
        Ok(run) => run,
        Err(ModelError::Doctrine(e @ (DoctrineError::UnknownElement { .. } | DoctrineError::UnknownObject(_)))) => {
            return Err(usage(e))
        }
        Err(e) => {
            report.fail("gate", e.to_string());
            return Ok(());
        }
    };
    let trace = &run.trace;
    report.info("saturation", format!("{} steps", trace.saturation.steps.len()));
    report.info("mode", trace.mode.name());
    for (law, tally) in &trace.model_report.laws {
        let detail = format!("{} instances, {} failures", tally.checked, tally.failed);
        if tally.claimed {
            report.check(format!("preserves {law}"), tally.failed == 0, detail);
        } else {
            report.info(format!("preserves {law} (not claimed)"), detail);
        }
    }
    record_morphism(report, "composite morphism", &trace.composite_check);
    if !trace.model_report.violations.is_empty() {
        report.set("violations", json!(trace.model_report.violations));
    }
    let document = run.model.document();
    report.set("model", document.clone());
    report.set("filter", json!(trace.filter));
    report.set("saturated", json!(trace.saturated));
    write_output(out, &to_canonical_json(&document), report)
}

fn colimit(p: &Arc<Doctrine>, steps: &[String], report: &mut Report) -> Result<(), CliError> {
    let mut current = p.clone();
    let mut morphisms: Vec<DoctrineMorphism> = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let (kind, arg) = step.split_once(':').unwrap_or((step.as_str(), ""));
        let t = current.base.terminal();
        let result = match kind {
            "relabel" => relabel_elements(&current, arg).map(|r| r.forward),
            "add-axiom" => add_axiom(&current, element(&current, t, arg)?).map(|a| a.morphism),
            "add-constant" => add_constant(&current, object(&current, arg)?).map(|c| c.morphism),
            "henkin" => {
                let (b, phi) =
                    arg.split_once(':').ok_or_else(|| usage(format!("expected henkin:B:φ, got `{step}`")))?;
                let b = object(&current, b)?;
                henkin_step(&current, b, element(&current, b, phi)?).map(|h| h.morphism)
            }
            _ => return Err(usage(format!("unknown step `{step}`"))),
        };
        let m = match result {
            Ok(m) => m,
            Err(e) => return construction_failed(report, &format!("step {i}"), e),
        };
        if !same_doctrine(&m.src, &current) {
            report.fail(format!("step {i}"), "its morphism starts at a restriction, so the chain does not compose");
            return Ok(());
        }
        current = m.dst.clone();
        morphisms.push(m);
    }
    let colimit = FiniteDirectedDiagram::chain(morphisms).and_then(|d| Ok((directed_colimit(&d)?, d)));
    let (c, d) = match colimit {
        Ok(v) => v,
        Err(e) => return construction_failed(report, "colimit", e),
    };
    for (i, leg) in c.cocone.iter().enumerate() {
        let check = check_morphism(leg, &common_layers(leg), ProductPreservation::Strict).map_err(usage)?;
        record_morphism(report, &format!("cocone leg {i}"), &check);
    }
    let max = d.maximum();
    report.check("maximum leg is an isomorphism", is_isomorphism(&c.cocone[max]), format!("node {max}"));
    report.set("nodes", json!(d.nodes().iter().map(|n| n.name.clone()).collect::<Vec<_>>()));
    report.set("result", summary(&c.doctrine));
    Ok(())
}
