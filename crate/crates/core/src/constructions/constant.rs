use std::collections::BTreeMap;
use std::sync::Arc;

use crate::doctrine::{inverse, same_doctrine, Doctrine, DoctrineMorphism, Layer};
use crate::fincat::{kleisli_reader, CategoryError, Embedding, KleisliPresentation, MorId, ObjId};
use crate::order::MonotoneMap;
use crate::search::{Csp, Uniqueness};

use super::ConstructionError;

/// `P_X` together with `(F_X, 𝔣_X) : P|adm → P_X`, where `P|adm` is `P` restricted to the X-admissible objects.
#[derive(Clone, Debug)]
pub struct ConstantExtension {
    pub parent: Arc<Doctrine>,
    pub sort: ObjId,
    /// Source of `morphism`: the parent itself when every object is admissible.
    pub source: Arc<Doctrine>,
    pub source_embedding: Embedding,
    pub kleisli: KleisliPresentation,
    pub doctrine: Arc<Doctrine>,
    pub morphism: DoctrineMorphism,
    /// The generic constant `𝐭 ⇝ X`.
    pub constant: MorId,
    /// Layers of the parent that could not be transported for lack of witnesses.
    pub dropped_layers: Vec<Layer>,
}

/// The associator `(X×C)×B → X×(C×B)`.
fn associator(k: &KleisliPresentation, kc: ObjId, b: ObjId, kp: ObjId) -> Result<MorId, CategoryError> {
    let base = &k.base;
    let xc = k.contexts[kc.index()];
    let outer = *base.require_product(xc.object, b)?;
    let inner = base.tuple(base.try_compose(xc.pr2, outer.pr1)?, outer.pr2)?;
    let assoc = base.tuple(base.try_compose(xc.pr1, outer.pr1)?, inner)?;
    debug_assert_eq!(base.cod(assoc), k.contexts[kp.index()].object);
    Ok(assoc)
}

/// Adds a generic constant of sort `x`: the base becomes the reader Kleisli category at `x`.
pub fn add_constant(p: &Arc<Doctrine>, x: ObjId) -> Result<ConstantExtension, ConstructionError> {
    if x.index() >= p.base.object_count() {
        return Err(CategoryError::UnknownObject(x.0).into());
    }
    let xname = p.base.object_name(x).to_string();
    let k = kleisli_reader(&p.base, x)?;
    let constant = k.constant.ok_or_else(|| ConstructionError::NotAdmissible(xname.clone()))?;
    let kc = &k.category;

    let fibers = k.contexts.iter().map(|ctx| p.fiber(ctx.object).clone()).collect();
    let reindex = kc
        .morphisms()
        .map(|f| Ok(p.reindex[k.context_map(f)?.index()].clone()))
        .collect::<Result<Vec<_>, CategoryError>>()?;

    let mut dropped = Vec::new();
    let mut delta = BTreeMap::new();
    for ka in kc.objects() {
        let Some(sq) = kc.product(ka, ka) else { continue };
        match p.delta.get(&k.objects[ka.index()]) {
            Some(&d) => {
                let pr2 = k.contexts[sq.object.index()].pr2;
                delta.insert(ka, p.reindex_elem(pr2, d));
            }
            None => dropped.push(Layer::Elementary),
        }
    }
    let mut quantifiers = |tables: &BTreeMap<(ObjId, ObjId), MonotoneMap>, layer: Layer| {
        let mut out = BTreeMap::new();
        for ((kl, kr), prod) in kc.products() {
            let b = k.objects[kr.index()];
            let xc = k.contexts[kl.index()].object;
            let Some(q) = tables.get(&(xc, b)) else {
                dropped.push(layer);
                continue;
            };
            let assoc = associator(&k, kl, b, prod.object)?;
            let n = p.fiber(k.contexts[prod.object.index()].object).len();
            out.insert((kl, kr), MonotoneMap::new((0..n).map(|a| q.apply(p.reindex_elem(assoc, a))).collect()));
        }
        Ok::<_, ConstructionError>(out)
    };
    let exists = quantifiers(&p.exists, Layer::Existential)?;
    let forall = quantifiers(&p.forall, Layer::Universal)?;
    dropped.sort();
    dropped.dedup();
    let layers = p.layers.iter().copied().filter(|l| !dropped.contains(l)).collect();
    let dropped_layers = dropped.into_iter().filter(|l| p.layers.contains(l)).collect();

    let doctrine = Arc::new(Doctrine::new(
        format!("{}+const:{}", p.name, xname),
        kc.clone(),
        fibers,
        reindex,
        delta,
        exists,
        forall,
        layers,
    )?);

    let (source, source_embedding) = if k.objects.len() == p.base.object_count() {
        let emb = Embedding { objects: p.base.objects().collect(), morphisms: p.base.morphisms().collect() };
        (p.clone(), emb)
    } else {
        let (d, emb) = p.restrict(&k.objects)?;
        (Arc::new(d), emb)
    };
    let mor_map = source_embedding
        .morphisms
        .iter()
        .map(|g| k.lift(*g).ok_or_else(|| ConstructionError::NotAdmissible(p.base.morphism_name(*g).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let components = k.contexts.iter().map(|ctx| p.reindex[ctx.pr2.index()].clone()).collect();
    let morphism = DoctrineMorphism {
        src: source.clone(),
        dst: doctrine.clone(),
        obj_map: kc.objects().collect(),
        mor_map,
        components,
    };
    Ok(ConstantExtension {
        parent: p.clone(),
        sort: x,
        source,
        source_embedding,
        kleisli: k,
        doctrine,
        morphism,
        constant,
        dropped_layers,
    })
}

/// How a target morphism out of the parent (or out of `P|adm`) sees parent ids.
struct SourceView<'a> {
    ext: &'a ConstantExtension,
    via_parent: bool,
}

impl SourceView<'_> {
    fn new<'a>(ext: &'a ConstantExtension, target: &DoctrineMorphism) -> Result<SourceView<'a>, ConstructionError> {
        if same_doctrine(&target.src, &ext.parent) {
            Ok(SourceView { ext, via_parent: true })
        } else if same_doctrine(&target.src, &ext.source) {
            Ok(SourceView { ext, via_parent: false })
        } else {
            Err(ConstructionError::WrongSource(format!(
                "expected `{}` or its admissible part, got `{}`",
                ext.parent.name, target.src.name
            )))
        }
    }

    fn object(&self, a: ObjId) -> Result<ObjId, ConstructionError> {
        if self.via_parent {
            return Ok(a);
        }
        self.ext.source_embedding.object_position(a).ok_or_else(|| {
            ConstructionError::WrongSource(format!(
                "the target is only defined on admissible objects, and `{}` is not one",
                self.ext.parent.base.object_name(a)
            ))
        })
    }

    fn morphism(&self, f: MorId) -> Result<MorId, ConstructionError> {
        if self.via_parent {
            return Ok(f);
        }
        self.ext.source_embedding.morphisms.binary_search(&f).map(MorId::new).map_err(|_| {
            ConstructionError::WrongSource(format!(
                "the target is only defined on admissible objects, so `{}` has no image",
                self.ext.parent.base.morphism_name(f)
            ))
        })
    }
}

/// Per Kleisli object `A`, the arrow `φ⁻¹∘⟨c∘!, id⟩ : GA → G(X×A)` of the target base.
fn context_arrows(
    ext: &ConstantExtension,
    target: &DoctrineMorphism,
    view: &SourceView,
    c: MorId,
) -> Result<Vec<MorId>, ConstructionError> {
    let rb = &target.dst.base;
    let gx = target.object(view.object(ext.sort)?);
    if rb.dom(c) != rb.terminal() || rb.cod(c) != gx {
        return Err(ConstructionError::BadConstant(format!(
            "`{}` should go from the terminal object to `{}`",
            rb.morphism_name(c),
            rb.object_name(gx)
        )));
    }
    let mut out = Vec::new();
    for (i, ctx) in ext.kleisli.contexts.iter().enumerate() {
        let a = ext.kleisli.objects[i];
        let ga = target.object(view.object(a)?);
        let g1 = target.morphism(view.morphism(ctx.pr1)?);
        let g2 = target.morphism(view.morphism(ctx.pr2)?);
        let phi = rb.tuple(g1, g2)?;
        let phi_inv = inverse(rb, phi).ok_or_else(|| {
            ConstructionError::MissingStructure(format!(
                "the image of {}×{} to be a product in the target",
                ext.parent.base.object_name(ext.sort),
                ext.parent.base.object_name(a)
            ))
        })?;
        let u = rb.tuple(rb.try_compose(c, rb.bang(ga))?, rb.identity(ga))?;
        out.push(rb.try_compose(phi_inv, u)?);
    }
    Ok(out)
}

/// The mediator `(G', 𝔤') : P_X → R` with `G'∘F_X = G` and `G'(𝐭 ⇝ X) = c`.
///
/// `G'(f) = G(f̂)∘φ⁻¹∘⟨c∘!, id⟩` and `𝔤'_A = R(⟨c∘!, id⟩)∘R(φ⁻¹)∘𝔤_{X×A}`.
pub fn mediate_constant(
    ext: &ConstantExtension,
    target: &DoctrineMorphism,
    c: MorId,
) -> Result<DoctrineMorphism, ConstructionError> {
    target.check_shape()?;
    let view = SourceView::new(ext, target)?;
    let rb = &target.dst.base;
    let pre = context_arrows(ext, target, &view, c)?;
    let k = &ext.kleisli;
    let mut mor_map = Vec::with_capacity(k.category.morphism_count());
    for f in k.category.morphisms() {
        let a = k.category.dom(f);
        let gf = target.morphism(view.morphism(k.backing[f.index()])?);
        mor_map.push(rb.try_compose(gf, pre[a.index()])?);
    }
    let mut components = Vec::new();
    for (i, ctx) in k.contexts.iter().enumerate() {
        let xa = view.object(ctx.object)?;
        let n = ext.parent.fiber(ctx.object).len();
        components
            .push(MonotoneMap::new((0..n).map(|al| target.dst.reindex_elem(pre[i], target.apply(xa, al))).collect()));
    }
    let obj_map =
        k.objects.iter().map(|a| Ok(target.object(view.object(*a)?))).collect::<Result<Vec<_>, ConstructionError>>()?;
    Ok(DoctrineMorphism { src: ext.doctrine.clone(), dst: target.dst.clone(), obj_map, mor_map, components })
}

impl ConstantExtension {
    /// The target viewed as a morphism out of `P|adm`, for comparison with `mediator ∘ F_X`.
    pub fn restrict_target(&self, target: &DoctrineMorphism) -> Result<DoctrineMorphism, ConstructionError> {
        let view = SourceView::new(self, target)?;
        if !view.via_parent {
            return Ok(target.clone());
        }
        Ok(target.restrict_source(self.source.clone(), &self.source_embedding))
    }
}

/// Exhaustive search over all functor and component tables `P_X → R` satisfying the two equations,
/// functoriality, naturality and monotonicity; confirms the mediator is the only one.
pub fn constant_mediator_uniqueness(
    ext: &ConstantExtension,
    target: &DoctrineMorphism,
    c: MorId,
) -> Result<Uniqueness, ConstructionError> {
    let mediator = mediate_constant(ext, target, c)?;
    let view = SourceView::new(ext, target)?;
    let (kc, r) = (&ext.kleisli.category, &*target.dst);
    let rb = &r.base;
    let px = &*ext.doctrine;
    let mut csp = Csp::new();
    let mor: Vec<usize> = kc
        .morphisms()
        .map(|f| {
            let (a, b) = (mediator.object(kc.dom(f)), mediator.object(kc.cod(f)));
            csp.variable(rb.hom(a, b).iter().map(|m| m.index()).collect())
        })
        .collect();
    let comp: Vec<Vec<usize>> = kc
        .objects()
        .map(|a| {
            let n = r.fiber(mediator.object(a)).len();
            (0..px.fiber(a).len()).map(|_| csp.variable((0..n).collect())).collect()
        })
        .collect();

    for a in kc.objects() {
        csp.fix(mor[kc.identity(a).index()], rb.identity(mediator.object(a)).index());
    }
    csp.fix(mor[ext.constant.index()], c.index());
    for (s, &base_g) in ext.source_embedding.morphisms.iter().enumerate() {
        let lifted = ext.morphism.morphism(MorId::new(s));
        csp.fix(mor[lifted.index()], target.morphism(view.morphism(base_g)?).index());
    }
    for (s, &a) in ext.source_embedding.objects.iter().enumerate() {
        let ga = view.object(a)?;
        for al in 0..ext.parent.fiber(a).len() {
            let image = ext.morphism.apply(ObjId::new(s), al);
            csp.fix(comp[s][image], target.apply(ga, al));
        }
    }
    for (g, f, h) in kc.composition_triples() {
        csp.ternary(mor[g.index()], mor[f.index()], mor[h.index()], move |vg, vf, vh| {
            rb.compose(MorId::new(vg), MorId::new(vf)) == Some(MorId::new(vh))
        });
    }
    for a in kc.objects() {
        let (src, dst) = (px.fiber(a), r.fiber(mediator.object(a)));
        for (x, y) in src.poset.leq_pairs() {
            if x != y {
                csp.binary(comp[a.index()][x], comp[a.index()][y], move |u, v| dst.leq(u, v));
            }
        }
    }
    for f in kc.morphisms() {
        let (a, b) = (kc.dom(f), kc.cod(f));
        for beta in 0..px.fiber(b).len() {
            let pulled = px.reindex_elem(f, beta);
            csp.ternary(mor[f.index()], comp[b.index()][beta], comp[a.index()][pulled], move |m, y, z| {
                r.reindex_elem(MorId::new(m), y) == z
            });
        }
    }
    let expected: Vec<usize> = mediator
        .mor_map
        .iter()
        .map(|m| m.index())
        .chain(mediator.components.iter().flat_map(|c| c.table.iter().copied()))
        .collect();
    Ok(Uniqueness::from_solutions(&csp.solve(2), &expected))
}
