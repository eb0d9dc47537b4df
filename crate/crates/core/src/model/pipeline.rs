use std::sync::Arc;

use crate::constructions::{henkin_saturate, HenkinSaturation, HenkinTrace, SaturationOptions, SaturationPolicy};
use crate::doctrine::{
    check_morphism, check_rich, consistency_status, Doctrine, DoctrineMorphism, Layer, MorphismCheck,
    ProductPreservation,
};
use crate::order::{extend_to_ultrafilter, generated_filter, Filter};

use super::extract::{extract_model, extract_model_elementary, ModelAdapter, ModelMode, ModelReport, SubsetModel};
use super::ModelError;

/// How the ultrafilter on the saturated terminal fiber is chosen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum FilterChoice {
    /// Greedy extension of `{⊤}` in element order.
    #[default]
    Greedy,
    /// The filter generated by the named elements; it must be a proper ultrafilter.
    Explicit(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub saturation: SaturationOptions,
    pub filter: FilterChoice,
    /// `None` extracts the elementary model exactly when the saturated doctrine is elementary.
    pub elementary: Option<bool>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            saturation: SaturationOptions { policy: SaturationPolicy::Unwitnessed, ..SaturationOptions::default() },
            filter: FilterChoice::Greedy,
            elementary: None,
        }
    }
}

impl PipelineOptions {
    pub fn with_budget(budget: usize) -> Self {
        let mut o = PipelineOptions::default();
        o.saturation.budget = Some(budget);
        o
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineTrace {
    pub saturation: HenkinTrace,
    /// Name of the saturated doctrine.
    pub saturated: String,
    /// Members of the chosen ultrafilter, by name.
    pub filter: Vec<String>,
    /// Per object name, the quotient classes by element name.
    pub classes: Vec<(String, Vec<Vec<String>>)>,
    pub mode: ModelMode,
    pub model_report: ModelReport,
    /// Layers checked on the composite into the subsets doctrine.
    pub composite_layers: Vec<Layer>,
    pub composite_check: MorphismCheck,
}

#[derive(Clone, Debug)]
pub struct ModelPipeline {
    pub model: SubsetModel,
    pub trace: PipelineTrace,
    pub saturation: HenkinSaturation,
    pub adapter: ModelAdapter,
    /// From the surviving part of the input to the subsets doctrine over the carriers.
    pub composite: DoctrineMorphism,
}

impl ModelPipeline {
    /// The model passes every claimed law and the composite passes its check.
    pub fn passes(&self) -> bool {
        self.trace.model_report.passes() && self.trace.composite_check.passes()
    }
}

fn choose_filter(d: &Doctrine, choice: &FilterChoice) -> Result<Filter, ModelError> {
    let fiber = d.terminal_fiber();
    match choice {
        FilterChoice::Greedy => Ok(extend_to_ultrafilter(fiber, &generated_filter(fiber, &[])?)?),
        FilterChoice::Explicit(names) => {
            let t = d.base.terminal();
            let gens = names.iter().map(|n| d.element(t, n)).collect::<Result<Vec<_>, _>>()?;
            Ok(generated_filter(fiber, &gens)?)
        }
    }
}

/// Saturates, chooses an ultrafilter, quotients and extracts, gating at every stage.
///
/// Gates, in order: the input declares bounded, implicational and existential
/// structure; the input is consistent; every saturation step stays consistent;
/// the saturated doctrine is rich (otherwise the saturation was truncated);
/// extraction preconditions. The composite into the subsets doctrine is
/// checked and reported, not gated.
pub fn henkin_model_pipeline(p: &Arc<Doctrine>, options: &PipelineOptions) -> Result<ModelPipeline, ModelError> {
    for layer in [Layer::Bounded, Layer::Implicational, Layer::Existential] {
        if !p.declares(layer) {
            return Err(ModelError::MissingLayer(layer));
        }
    }
    if !consistency_status(p).status.is_consistent() {
        return Err(ModelError::Inconsistent { step: None });
    }
    let saturation = henkin_saturate(p, &options.saturation)?;
    if let Some(step) = saturation.trace.first_inconsistent() {
        return Err(ModelError::Inconsistent { step: Some(step) });
    }
    let sat = saturation.doctrine.clone();
    if !consistency_status(&sat).status.is_consistent() {
        return Err(ModelError::Inconsistent { step: saturation.trace.steps.len().checked_sub(1) });
    }
    let rich = check_rich(&sat);
    if !rich.is_rich() {
        let cat = &sat.base;
        let mut uncovered: Vec<String> =
            rich.missing_quantifier.iter().map(|a| format!("∃ over 𝐭×{}", cat.object_name(*a))).collect();
        uncovered.extend(
            rich.failures()
                .map(|e| format!("{} over {}", sat.fiber(e.object).name(e.element), cat.object_name(e.object))),
        );
        return Err(ModelError::Truncated { uncovered });
    }
    let filter = choose_filter(&sat, &options.filter)?;
    let elementary = match options.elementary {
        Some(e) => e,
        None => sat.declares(Layer::Elementary),
    };
    let model = if elementary { extract_model_elementary(&sat, &filter)? } else { extract_model(&sat, &filter)? };
    let adapter = model.adapter()?;
    let composite = saturation.morphism.then(&adapter.from_source()?)?;
    let mut composite_layers = vec![Layer::Bounded, Layer::Implicational, Layer::Existential];
    if elementary {
        composite_layers.push(Layer::Elementary);
    }
    let composite_check = check_morphism(&composite, &composite_layers, ProductPreservation::UpToIso)?;
    let cat = &sat.base;
    let classes = cat
        .objects()
        .map(|a| {
            let f = sat.fiber(a);
            let classes = adapter
                .quotient
                .classes(a)
                .into_iter()
                .map(|c| c.into_iter().map(|x| f.name(x).to_string()).collect())
                .collect();
            (cat.object_name(a).to_string(), classes)
        })
        .collect();
    let trace = PipelineTrace {
        saturation: saturation.trace.clone(),
        saturated: sat.name.clone(),
        filter: model.filter.names(sat.terminal_fiber()),
        classes,
        mode: model.mode,
        model_report: model.verify(),
        composite_layers,
        composite_check,
    };
    Ok(ModelPipeline { model, trace, saturation, adapter, composite })
}
