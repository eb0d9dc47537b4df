use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::fincat::{Embedding, FinCategory, MorId, ObjId};
use crate::order::MonotoneMap;

use super::{Doctrine, DoctrineError, Layer};

/// Violations kept per check; the per-law failure counts are exact.
const KEPT_VIOLATIONS: usize = 32;

/// A doctrine morphism `(F, 𝔣) : P → R`.
///
/// `components[A]` maps the fiber of `src` over `A` to the fiber of `dst` over `F(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoctrineMorphism {
    pub src: Arc<Doctrine>,
    pub dst: Arc<Doctrine>,
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
    pub components: Vec<MonotoneMap>,
}

/// Pointer or structural equality.
pub(crate) fn same_doctrine(a: &Arc<Doctrine>, b: &Arc<Doctrine>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl DoctrineMorphism {
    pub fn identity(d: Arc<Doctrine>) -> Self {
        DoctrineMorphism {
            obj_map: d.base.objects().collect(),
            mor_map: d.base.morphisms().collect(),
            components: d.fibers.iter().map(|f| MonotoneMap::identity(f.len())).collect(),
            src: d.clone(),
            dst: d,
        }
    }

    pub fn object(&self, a: ObjId) -> ObjId {
        self.obj_map[a.index()]
    }

    pub fn morphism(&self, f: MorId) -> MorId {
        self.mor_map[f.index()]
    }

    /// `𝔣_A(x)`.
    pub fn apply(&self, a: ObjId, x: usize) -> usize {
        self.components[a.index()].apply(x)
    }

    /// `next ∘ self`; requires `self.dst` to equal `next.src`.
    pub fn then(&self, next: &DoctrineMorphism) -> Result<DoctrineMorphism, DoctrineError> {
        if !same_doctrine(&self.dst, &next.src) {
            return Err(DoctrineError::Mismatch(format!(
                "cannot compose `{}` → `{}` with `{}` → `{}`",
                self.src.name, self.dst.name, next.src.name, next.dst.name
            )));
        }
        let obj_map = self.obj_map.iter().map(|a| next.object(*a)).collect();
        let mor_map = self.mor_map.iter().map(|f| next.morphism(*f)).collect();
        let components =
            self.components.iter().zip(&self.obj_map).map(|(c, fa)| next.components[fa.index()].after(c)).collect();
        Ok(DoctrineMorphism { src: self.src.clone(), dst: next.dst.clone(), obj_map, mor_map, components })
    }

    /// Precomposition with the inclusion of a restricted source `new_src` along `emb`.
    pub fn restrict_source(&self, new_src: Arc<Doctrine>, emb: &Embedding) -> DoctrineMorphism {
        DoctrineMorphism {
            obj_map: emb.objects.iter().map(|a| self.object(*a)).collect(),
            mor_map: emb.morphisms.iter().map(|f| self.morphism(*f)).collect(),
            components: emb.objects.iter().map(|a| self.components[a.index()].clone()).collect(),
            src: new_src,
            dst: self.dst.clone(),
        }
    }

    /// Checks that every table has the size and range its endpoints demand.
    pub fn check_shape(&self) -> Result<(), DoctrineError> {
        let (s, t) = (&self.src.base, &self.dst.base);
        if self.obj_map.len() != s.object_count()
            || self.mor_map.len() != s.morphism_count()
            || self.components.len() != s.object_count()
        {
            return Err(DoctrineError::Mismatch("table lengths differ from the source base".into()));
        }
        if self.obj_map.iter().any(|a| a.index() >= t.object_count())
            || self.mor_map.iter().any(|f| f.index() >= t.morphism_count())
        {
            return Err(DoctrineError::Mismatch("functor tables point outside the target base".into()));
        }
        for a in s.objects() {
            let comp = &self.components[a.index()];
            let target = self.dst.fiber(self.object(a)).len();
            if comp.len() != self.src.fiber(a).len() || comp.table.iter().any(|x| *x >= target) {
                return Err(DoctrineError::Mismatch(format!(
                    "component over `{}` has the wrong shape",
                    s.object_name(a)
                )));
            }
        }
        Ok(())
    }
}

/// How strictly chosen products must be preserved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProductPreservation {
    /// The image cone is a product cone.
    #[default]
    UpToIso,
    /// The image cone is the chosen product cone.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorphismLaw {
    FunctorEndpoints,
    FunctorIdentity,
    FunctorComposition,
    FunctorTerminal,
    FunctorProduct,
    ComponentMonotone,
    Naturality,
    PreservesTop,
    PreservesMeet,
    PreservesBottom,
    PreservesJoin,
    PreservesImp,
    PreservesDelta,
    PreservesExists,
    PreservesForall,
}

impl fmt::Display for MorphismLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A failing instance of a morphism law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismViolation {
    pub law: MorphismLaw,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
    pub elements: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismCheck {
    pub checked: u64,
    pub failures: BTreeMap<MorphismLaw, u64>,
    pub violations: Vec<MorphismViolation>,
}

impl MorphismCheck {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure_count(&self) -> u64 {
        self.failures.values().sum()
    }

    pub fn fails(&self, law: MorphismLaw) -> bool {
        self.failures.contains_key(&law)
    }

    fn record(
        &mut self,
        ok: bool,
        law: MorphismLaw,
        objects: &[ObjId],
        morphisms: &[MorId],
        elements: &[usize],
        detail: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if ok {
            return;
        }
        *self.failures.entry(law).or_default() += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(MorphismViolation {
                law,
                objects: objects.to_vec(),
                morphisms: morphisms.to_vec(),
                elements: elements.to_vec(),
                detail: detail(),
            });
        }
    }
}

/// Whether `(p, pr1, pr2)` is a product cone in `cat`: for every `X`, `h ↦ (pr1∘h, pr2∘h)` is a bijection.
pub(crate) fn is_product_cone(cat: &FinCategory, p: ObjId, pr1: MorId, pr2: MorId) -> bool {
    if cat.dom(pr1) != p || cat.dom(pr2) != p {
        return false;
    }
    let (a, b) = (cat.cod(pr1), cat.cod(pr2));
    cat.objects().all(|x| {
        let hom = cat.hom(x, p);
        if hom.len() != cat.hom(x, a).len() * cat.hom(x, b).len() {
            return false;
        }
        let mut images: Vec<(MorId, MorId)> =
            hom.iter().filter_map(|h| Some((cat.compose(pr1, *h)?, cat.compose(pr2, *h)?))).collect();
        let before = images.len();
        images.sort();
        images.dedup();
        before == hom.len() && images.len() == before
    })
}

/// The two-sided inverse of `f`, if any.
pub(crate) fn inverse(cat: &FinCategory, f: MorId) -> Option<MorId> {
    let (a, b) = (cat.dom(f), cat.cod(f));
    cat.hom(b, a)
        .iter()
        .copied()
        .find(|g| cat.compose(*g, f) == Some(cat.identity(a)) && cat.compose(f, *g) == Some(cat.identity(b)))
}

/// `φ = ⟨F pr1, F pr2⟩ : F(C×B) → FC×FB` and its inverse, when the target declares `FC×FB`.
pub(crate) fn comparison(m: &DoctrineMorphism, c: ObjId, b: ObjId) -> Option<(MorId, MorId)> {
    let p = m.src.base.product(c, b)?;
    let t = &m.dst.base;
    let phi = t.tuple(m.morphism(p.pr1), m.morphism(p.pr2)).ok()?;
    Some((phi, inverse(t, phi)?))
}

/// Checks functoriality, naturality, and preservation of the structure of `layers`.
///
/// Preservation is only checked for structure the source carries; the target must carry the matching structure.
pub fn check_morphism(
    m: &DoctrineMorphism,
    layers: &[Layer],
    products: ProductPreservation,
) -> Result<MorphismCheck, DoctrineError> {
    m.check_shape()?;
    let (src, dst) = (&*m.src, &*m.dst);
    let (s, t) = (&src.base, &dst.base);
    let mut out = MorphismCheck::default();
    use MorphismLaw::*;

    let mut endpoints_ok = true;
    for f in s.morphisms() {
        let ff = m.morphism(f);
        let ok = t.dom(ff) == m.object(s.dom(f)) && t.cod(ff) == m.object(s.cod(f));
        endpoints_ok &= ok;
        out.record(ok, FunctorEndpoints, &[], &[f], &[], || {
            format!("F({}) has the wrong endpoints", s.morphism_name(f))
        });
    }
    for a in s.objects() {
        let ok = m.morphism(s.identity(a)) == t.identity(m.object(a));
        out.record(ok, FunctorIdentity, &[a], &[], &[], || format!("F(id_{}) is not an identity", s.object_name(a)));
    }
    if endpoints_ok {
        for (g, f, h) in s.composition_triples() {
            let ok = t.compose(m.morphism(g), m.morphism(f)) == Some(m.morphism(h));
            out.record(ok, FunctorComposition, &[], &[g, f], &[], || {
                format!(
                    "F({}∘{}) ≠ F({})∘F({})",
                    s.morphism_name(g),
                    s.morphism_name(f),
                    s.morphism_name(g),
                    s.morphism_name(f)
                )
            });
        }
    }
    let ft = m.object(s.terminal());
    let terminal_ok = match products {
        ProductPreservation::Strict => ft == t.terminal(),
        ProductPreservation::UpToIso => t.objects().all(|x| t.hom(x, ft).len() == 1),
    };
    out.record(terminal_ok, FunctorTerminal, &[s.terminal()], &[], &[], || {
        format!("F({}) = {} is not terminal", s.object_name(s.terminal()), t.object_name(ft))
    });
    if endpoints_ok {
        for ((l, r), p) in s.products() {
            let (fp, f1, f2) = (m.object(p.object), m.morphism(p.pr1), m.morphism(p.pr2));
            let ok = match products {
                ProductPreservation::Strict => {
                    t.product(m.object(l), m.object(r)).is_some_and(|q| q.object == fp && q.pr1 == f1 && q.pr2 == f2)
                }
                ProductPreservation::UpToIso => is_product_cone(t, fp, f1, f2),
            };
            out.record(ok, FunctorProduct, &[l, r], &[], &[], || {
                format!("the image of {}×{} is not a product", s.object_name(l), s.object_name(r))
            });
        }
    }

    for a in s.objects() {
        let comp = &m.components[a.index()];
        let fail = comp.monotonicity_failure(&src.fiber(a).poset, &dst.fiber(m.object(a)).poset);
        out.record(
            fail.is_none(),
            ComponentMonotone,
            &[a],
            &[],
            &fail.map(|(x, y)| vec![x, y]).unwrap_or_default(),
            || format!("component over {} is not monotone", s.object_name(a)),
        );
    }
    if endpoints_ok {
        for f in s.morphisms() {
            let (a, b) = (s.dom(f), s.cod(f));
            for x in 0..src.fiber(b).len() {
                let lhs = m.apply(a, src.reindex_elem(f, x));
                let rhs = dst.reindex_elem(m.morphism(f), m.apply(b, x));
                out.record(lhs == rhs, Naturality, &[], &[f], &[x], || {
                    format!("naturality fails along {} at {}", s.morphism_name(f), src.fiber(b).name(x))
                });
            }
        }
    }

    let layers = Layer::closure(layers.iter().copied());
    for a in s.objects() {
        let (sf, tf) = (src.fiber(a), dst.fiber(m.object(a)));
        let name = || s.object_name(a).to_string();
        let unary = |law: MorphismLaw, out: &mut MorphismCheck, sv: Option<usize>, tv: Option<usize>| {
            if let Some(x) = sv {
                let ok = tv.is_some_and(|y| m.apply(a, x) == y);
                out.record(ok, law, &[a], &[], &[x], || format!("{law} fails over {}", name()));
            }
        };
        if layers.contains(&Layer::Primary) || layers.contains(&Layer::Bounded) {
            unary(PreservesTop, &mut out, sf.ops.top, tf.ops.top);
        }
        if layers.contains(&Layer::Bounded) || layers.contains(&Layer::Joins) {
            unary(PreservesBottom, &mut out, sf.ops.bottom, tf.ops.bottom);
        }
        let mut binary =
            |law: MorphismLaw,
             layer: Layer,
             op: fn(&crate::order::Fiber, usize, usize) -> Result<usize, crate::order::OrderError>| {
                if !layers.contains(&layer) {
                    return;
                }
                for x in 0..sf.len() {
                    for y in 0..sf.len() {
                        let Ok(sv) = op(sf, x, y) else { return };
                        let ok = op(tf, m.apply(a, x), m.apply(a, y)).is_ok_and(|tv| m.apply(a, sv) == tv);
                        out.record(ok, law, &[a], &[], &[x, y], || format!("{law} fails over {}", name()));
                    }
                }
            };
        binary(PreservesMeet, Layer::Primary, |f, x, y| f.meet(x, y));
        binary(PreservesJoin, Layer::Joins, |f, x, y| f.join(x, y));
        binary(PreservesImp, Layer::Implicational, |f, x, y| f.imp(x, y));
    }

    if layers.contains(&Layer::Elementary) && endpoints_ok {
        for (&a, &da) in &src.delta {
            let fa = m.object(a);
            let ok = match (comparison(m, a, a), dst.delta.get(&fa)) {
                (Some((phi, _)), Some(&dfa)) => {
                    m.apply(s.require_product(a, a)?.object, da) == dst.reindex_elem(phi, dfa)
                }
                _ => false,
            };
            out.record(ok, PreservesDelta, &[a], &[], &[], || format!("δ over {} is not preserved", s.object_name(a)));
        }
    }
    for (law, layer, exists) in
        [(PreservesExists, Layer::Existential, true), (PreservesForall, Layer::Universal, false)]
    {
        if !layers.contains(&layer) || !endpoints_ok {
            continue;
        }
        let (stabs, ttabs) = if exists { (&src.exists, &dst.exists) } else { (&src.forall, &dst.forall) };
        for (&(c, b), q) in stabs {
            let z = s.require_product(c, b)?.object;
            let target = comparison(m, c, b).and_then(|(_, inv)| Some((inv, ttabs.get(&(m.object(c), m.object(b)))?)));
            for x in 0..src.fiber(z).len() {
                let ok = target
                    .is_some_and(|(inv, tq)| m.apply(c, q.apply(x)) == tq.apply(dst.reindex_elem(inv, m.apply(z, x))));
                out.record(ok, law, &[c, b], &[], &[x], || {
                    format!("{law} fails over ({}, {}) at {}", s.object_name(c), s.object_name(b), src.fiber(z).name(x))
                });
            }
        }
    }
    Ok(out)
}

/// Whether `m` is an isomorphism: bijective on objects and arrows, with order-isomorphic components.
pub fn is_isomorphism(m: &DoctrineMorphism) -> bool {
    if m.check_shape().is_err() {
        return false;
    }
    let bijective = |table: &[usize], n: usize| {
        let mut seen = vec![false; n];
        table.len() == n && table.iter().all(|x| !std::mem::replace(&mut seen[*x], true))
    };
    let objs: Vec<usize> = m.obj_map.iter().map(|a| a.index()).collect();
    let mors: Vec<usize> = m.mor_map.iter().map(|f| f.index()).collect();
    if !bijective(&objs, m.dst.base.object_count()) || !bijective(&mors, m.dst.base.morphism_count()) {
        return false;
    }
    m.src.base.objects().all(|a| {
        let (sf, tf) = (m.src.fiber(a), m.dst.fiber(m.object(a)));
        let comp = &m.components[a.index()];
        bijective(&comp.table, tf.len())
            && (0..sf.len()).all(|x| (0..sf.len()).all(|y| sf.leq(x, y) == tf.leq(comp.apply(x), comp.apply(y))))
    })
}

/// A 2-cell `θ : (F, 𝔣) ⇒ (G, 𝔤)` given by arrows `θ_A : F(A) → G(A)` of the target base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    pub components: Vec<MorId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoCellViolation {
    Endpoints { object: ObjId },
    Naturality { morphism: MorId },
    Inequality { object: ObjId, element: usize },
}

/// Checks naturality of `θ` and `𝔣_A(α) ≤ R(θ_A)(𝔤_A(α))`.
pub fn check_2cell(
    f: &DoctrineMorphism,
    g: &DoctrineMorphism,
    theta: &TwoCell,
) -> Result<Vec<TwoCellViolation>, DoctrineError> {
    f.check_shape()?;
    g.check_shape()?;
    if !same_doctrine(&f.src, &g.src) || !same_doctrine(&f.dst, &g.dst) {
        return Err(DoctrineError::Mismatch("2-cell between morphisms with different endpoints".into()));
    }
    let (s, t) = (&f.src.base, &f.dst.base);
    if theta.components.len() != s.object_count() || theta.components.iter().any(|m| m.index() >= t.morphism_count()) {
        return Err(DoctrineError::Mismatch("2-cell has the wrong number of components".into()));
    }
    let mut out = Vec::new();
    for a in s.objects() {
        let th = theta.components[a.index()];
        if t.dom(th) != f.object(a) || t.cod(th) != g.object(a) {
            out.push(TwoCellViolation::Endpoints { object: a });
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    for h in s.morphisms() {
        let (a, b) = (s.dom(h), s.cod(h));
        let lhs = t.compose(g.morphism(h), theta.components[a.index()]);
        let rhs = t.compose(theta.components[b.index()], f.morphism(h));
        if lhs.is_none() || lhs != rhs {
            out.push(TwoCellViolation::Naturality { morphism: h });
        }
    }
    for a in s.objects() {
        let th = theta.components[a.index()];
        let fiber = f.dst.fiber(f.object(a));
        for x in 0..f.src.fiber(a).len() {
            if !fiber.leq(f.apply(a, x), f.dst.reindex_elem(th, g.apply(a, x))) {
                out.push(TwoCellViolation::Inequality { object: a, element: x });
            }
        }
    }
    Ok(out)
}
