use std::collections::BTreeMap;
use std::sync::Arc;

use crate::doctrine::{check_rich_for, consistency_status, Consistency, Doctrine, DoctrineMorphism};
use crate::fincat::{Embedding, MorId, ObjId};

use super::axiom::{add_axiom, AxiomExtension};
use super::constant::{add_constant, ConstantExtension};
use super::ConstructionError;

/// One Henkin step `P → (P_B)_ψ` with `ψ = P(pr1)∃φ → φ` read in `P_B(𝐭)`.
#[derive(Clone, Debug)]
pub struct HenkinStep {
    pub constant: ConstantExtension,
    pub axiom: AxiomExtension,
    pub doctrine: Arc<Doctrine>,
    /// `(F_B, 𝔣_B)` followed by `(id, 𝔣_ψ)`; its source is `constant.source`.
    pub morphism: DoctrineMorphism,
    /// The added constant `𝐭 ⇝ B` in the new base.
    pub witness: MorId,
    /// `ψ` as an element of `P_B(𝐭)`.
    pub psi: usize,
    /// Image of `∃_{𝐭}^{B}φ` in the new fiber over `𝐭`.
    pub exists_image: usize,
    /// `P'(c)` applied to the image of `φ`.
    pub instance: usize,
    /// `exists_image ≤ instance`.
    pub inequality: bool,
    /// `exists_image = instance`.
    pub equality: bool,
}

/// Adds a fresh constant of sort `b` and the axiom making it a witness for `φ`.
pub fn henkin_step(p: &Arc<Doctrine>, b: ObjId, phi: usize) -> Result<HenkinStep, ConstructionError> {
    let cat = &p.base;
    if b.index() >= cat.object_count() {
        return Err(crate::fincat::CategoryError::UnknownObject(b.0).into());
    }
    if phi >= p.fiber(b).len() {
        return Err(ConstructionError::ElementOutOfRange { object: cat.object_name(b).to_string(), element: phi });
    }
    let t = cat.terminal();
    let e = crate::doctrine::exists_to_terminal(p, b, phi)
        .ok_or_else(|| ConstructionError::MissingStructure(format!("∃ along 𝐭×{}", cat.object_name(b))))?;
    let ext = add_constant(p, b)?;
    let k = &ext.kleisli;
    let not_admissible = || ConstructionError::NotAdmissible(cat.object_name(b).to_string());
    let (kt, kb) = (k.kleisli_object(t).ok_or_else(not_admissible)?, k.kleisli_object(b).ok_or_else(not_admissible)?);
    let (st, sb) = (
        ext.source_embedding.object_position(t).ok_or_else(not_admissible)?,
        ext.source_embedding.object_position(b).ok_or_else(not_admissible)?,
    );
    let px = &ext.doctrine;
    let lifted_e = ext.morphism.apply(st, e);
    let lifted_phi = ext.morphism.apply(sb, phi);
    let c_phi = px.reindex_elem(ext.constant, lifted_phi);
    let psi = px.fiber(kt).imp(lifted_e, c_phi)?;

    let ax = add_axiom(px, psi)?;
    let morphism = ext.morphism.then(&ax.morphism)?;
    let q = &ax.doctrine;
    let exists_image = ax.morphism.apply(kt, lifted_e);
    let instance = q.reindex_elem(ext.constant, ax.morphism.apply(kb, lifted_phi));
    let fiber = q.fiber(kt);
    Ok(HenkinStep {
        inequality: fiber.leq(exists_image, instance),
        equality: exists_image == instance,
        witness: ext.constant,
        doctrine: q.clone(),
        constant: ext,
        axiom: ax,
        morphism,
        psi,
        exists_image,
        instance,
    })
}

/// Which `(B, φ)` of the original doctrine to saturate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Targets {
    /// Every element of every fiber, in `(object, element)` order.
    #[default]
    All,
    Listed(Vec<(ObjId, usize)>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SaturationPolicy {
    /// One step per target.
    #[default]
    EveryTarget,
    /// Skip a target whose image already has a witness constant.
    Unwitnessed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SaturationOptions {
    pub targets: Targets,
    /// Global step budget; `None` is unlimited.
    pub budget: Option<usize>,
    /// Per original object step budgets.
    pub per_object: BTreeMap<ObjId, usize>,
    pub policy: SaturationPolicy,
}

/// One executed step of a saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Original sort and formula.
    pub sort: ObjId,
    pub element: usize,
    /// Fresh label `(B, k)`: the `k`-th constant of sort `B`.
    pub label: (ObjId, usize),
    /// Name of `ψ` in the fiber it was added to.
    pub psi: String,
    pub inequality: bool,
    pub equality: bool,
    /// Consistency of the doctrine right after this step.
    pub consistency: Consistency,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HenkinTrace {
    pub steps: Vec<TraceStep>,
    /// Next free label per original object.
    pub labels: BTreeMap<ObjId, usize>,
    /// Targets skipped because their image was already witnessed.
    pub witnessed: Vec<(ObjId, usize)>,
    /// Targets whose sort has no admissible image in the current doctrine.
    pub blocked: Vec<(ObjId, usize)>,
    /// Targets left over when a budget ran out.
    pub unprocessed: Vec<(ObjId, usize)>,
    pub truncated: bool,
}

impl HenkinTrace {
    pub fn first_inconsistent(&self) -> Option<usize> {
        self.steps.iter().position(|s| !s.consistency.is_consistent())
    }
}

#[derive(Clone, Debug)]
pub struct HenkinSaturation {
    pub doctrine: Arc<Doctrine>,
    /// The part of the original doctrine that survives every step.
    pub source: Arc<Doctrine>,
    /// Original → `source`.
    pub source_embedding: Embedding,
    /// `source → doctrine`.
    pub morphism: DoctrineMorphism,
    pub trace: HenkinTrace,
}

impl HenkinSaturation {
    /// Images of the original `(B, φ)` whose sort survived.
    pub fn image(&self, b: ObjId, phi: usize) -> Option<(ObjId, usize)> {
        let s = self.source_embedding.object_position(b)?;
        Some((self.morphism.object(s), self.morphism.apply(s, phi)))
    }

    /// Images of every original element whose sort survived.
    pub fn original_images(&self, original: &Doctrine) -> Vec<(ObjId, usize)> {
        original
            .base
            .objects()
            .flat_map(|b| (0..original.fiber(b).len()).map(move |x| (b, x)))
            .filter_map(|(b, x)| self.image(b, x))
            .collect()
    }
}

/// The running composite from the surviving part of the original.
struct Running {
    source: Arc<Doctrine>,
    embedding: Embedding,
    morphism: DoctrineMorphism,
}

impl Running {
    /// Precomposes the step, first dropping original objects whose image the step discards.
    fn advance(self, step: &HenkinStep) -> Result<Running, ConstructionError> {
        let view = &step.constant.source_embedding;
        let keep: Vec<ObjId> =
            self.source.base.objects().filter(|s| view.object_position(self.morphism.object(*s)).is_some()).collect();
        let (source, embedding, morphism) = if keep.len() == self.source.base.object_count() {
            (self.source, self.embedding, self.morphism)
        } else {
            let (d, inner) = self.source.restrict(&keep)?;
            let d = Arc::new(d);
            let embedding = Embedding {
                objects: inner.objects.iter().map(|s| self.embedding.objects[s.index()]).collect(),
                morphisms: inner.morphisms.iter().map(|f| self.embedding.morphisms[f.index()]).collect(),
            };
            let m = self.morphism.restrict_source(d.clone(), &inner);
            (d, embedding, m)
        };
        let narrowed = DoctrineMorphism {
            src: morphism.src.clone(),
            dst: step.constant.source.clone(),
            obj_map: morphism.obj_map.iter().map(|a| view.object_position(*a).expect("kept")).collect(),
            mor_map: morphism
                .mor_map
                .iter()
                .map(|f| MorId::new(view.morphisms.binary_search(f).expect("full subcategory")))
                .collect(),
            components: morphism.components,
        };
        let morphism = narrowed.then(&step.morphism)?;
        Ok(Running { source, embedding, morphism })
    }
}

fn admissible(d: &Doctrine, b: ObjId) -> bool {
    let cat = &d.base;
    cat.product(b, b).is_some() && cat.product(b, cat.terminal()).is_some()
}

/// Folds [`henkin_step`] over the targets in `(object, element)` order.
pub fn henkin_saturate(p: &Arc<Doctrine>, options: &SaturationOptions) -> Result<HenkinSaturation, ConstructionError> {
    let mut targets: Vec<(ObjId, usize)> = match &options.targets {
        Targets::All => p.base.objects().flat_map(|b| (0..p.fiber(b).len()).map(move |x| (b, x))).collect(),
        Targets::Listed(list) => list.clone(),
    };
    targets.sort();
    targets.dedup();
    for &(b, x) in &targets {
        if b.index() >= p.base.object_count() || x >= p.fiber(b).len() {
            return Err(ConstructionError::ElementOutOfRange { object: format!("#{}", b.0), element: x });
        }
    }
    let mut run = Running {
        source: p.clone(),
        embedding: Embedding { objects: p.base.objects().collect(), morphisms: p.base.morphisms().collect() },
        morphism: DoctrineMorphism::identity(p.clone()),
    };
    let mut current = p.clone();
    let mut trace = HenkinTrace::default();
    let mut used: BTreeMap<ObjId, usize> = BTreeMap::new();
    for (i, &(b, x)) in targets.iter().enumerate() {
        let Some(s) = run.embedding.object_position(b) else {
            trace.blocked.push((b, x));
            continue;
        };
        let (bc, xc) = (run.morphism.object(s), run.morphism.apply(s, x));
        if options.policy == SaturationPolicy::Unwitnessed
            && check_rich_for(&current, &[(bc, xc)]).entries.first().is_some_and(|e| e.witness.is_some())
        {
            trace.witnessed.push((b, x));
            continue;
        }
        if !admissible(&current, bc) {
            trace.blocked.push((b, x));
            continue;
        }
        let over_global = options.budget.is_some_and(|n| trace.steps.len() >= n);
        let over_local = options.per_object.get(&b).is_some_and(|n| used.get(&b).copied().unwrap_or(0) >= *n);
        if over_global {
            trace.truncated = true;
            trace.unprocessed.extend_from_slice(&targets[i..]);
            break;
        }
        if over_local {
            trace.truncated = true;
            trace.unprocessed.push((b, x));
            continue;
        }
        let step = henkin_step(&current, bc, xc)?;
        let counter = trace.labels.entry(b).or_insert(0);
        let label = (b, *counter);
        *counter += 1;
        *used.entry(b).or_insert(0) += 1;
        let kt = step.constant.kleisli.kleisli_object(current.base.terminal()).expect("terminal is admissible");
        trace.steps.push(TraceStep {
            sort: b,
            element: x,
            label,
            psi: step.constant.doctrine.fiber(kt).name(step.psi).to_string(),
            inequality: step.inequality,
            equality: step.equality,
            consistency: consistency_status(&step.doctrine).status,
        });
        current = step.doctrine.clone();
        run = run.advance(&step)?;
    }
    Ok(HenkinSaturation {
        doctrine: current,
        source: run.source,
        source_embedding: run.embedding,
        morphism: run.morphism,
        trace,
    })
}
