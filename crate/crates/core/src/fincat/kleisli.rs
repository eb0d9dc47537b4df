use std::collections::HashMap;

use super::category::{CategoryBuilder, CategoryError, FinCategory, MorId, ObjId, Product};

/// The Kleisli category of the reader comonad `X × −` over a finite base.
///
/// Only X-admissible objects (those `A` with a chosen `X×A`) appear. An arrow
/// `A ⇝ B` is a base arrow `X×A → B`; identities are `pr2` and composition is
/// `g ∘ f = ĝ ∘ ⟨pr1, f̂⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleisliPresentation {
    pub base: FinCategory,
    pub sort: ObjId,
    pub category: FinCategory,
    /// Kleisli object id → base object id.
    pub objects: Vec<ObjId>,
    /// Kleisli object `A` → the chosen base product `X×A`.
    pub contexts: Vec<Product>,
    /// Kleisli arrow `A ⇝ B` → base arrow `X×A → B`.
    pub backing: Vec<MorId>,
    /// The generic constant `𝐭 ⇝ X`, backed by `pr1 : X×𝐭 → X`; absent unless `X` is admissible.
    pub constant: Option<MorId>,
    arrow_index: HashMap<(ObjId, MorId), MorId>,
}

impl KleisliPresentation {
    /// Kleisli object corresponding to a base object, if admissible.
    pub fn kleisli_object(&self, base_obj: ObjId) -> Option<ObjId> {
        self.objects.iter().position(|o| *o == base_obj).map(ObjId::new)
    }

    /// Kleisli arrow out of `a` backed by the base arrow `backing`.
    pub fn arrow_for(&self, a: ObjId, backing: MorId) -> Option<MorId> {
        self.arrow_index.get(&(a, backing)).copied()
    }

    /// The image `g ∘ pr2` of a base arrow under the free functor `C → C_X`.
    pub fn lift(&self, g: MorId) -> Option<MorId> {
        let a = self.kleisli_object(self.base.dom(g))?;
        self.kleisli_object(self.base.cod(g))?;
        let ctx = self.contexts[a.index()];
        let backing = self.base.compose(g, ctx.pr2)?;
        self.arrow_for(a, backing)
    }

    /// `⟨pr1, f̂⟩ : X×A → X×B`, the base arrow along which `f : A ⇝ B` reindexes.
    pub fn context_map(&self, f: MorId) -> Result<MorId, CategoryError> {
        let a = self.category.dom(f);
        self.base.tuple(self.contexts[a.index()].pr1, self.backing[f.index()])
    }
}

/// Builds the reader-comonad Kleisli category of `cat` at the sort `x`.
pub fn kleisli_reader(cat: &FinCategory, x: ObjId) -> Result<KleisliPresentation, CategoryError> {
    if x.index() >= cat.object_count() {
        return Err(CategoryError::UnknownObject(x.0));
    }
    let admissible: Vec<ObjId> = cat.objects().filter(|a| cat.product(x, *a).is_some()).collect();
    if !admissible.contains(&cat.terminal()) {
        return Err(CategoryError::NotAdmissible(cat.object_name(cat.terminal()).to_string()));
    }
    let position = |a: ObjId| admissible.iter().position(|o| *o == a).map(ObjId::new);
    let contexts: Vec<Product> = admissible.iter().map(|a| *cat.product(x, *a).expect("admissible")).collect();
    let xname = cat.object_name(x);

    // Arrow names carry the domain when two objects share the context `X×A`.
    let shared_context: Vec<bool> =
        contexts.iter().map(|c| contexts.iter().filter(|d| d.object == c.object).count() > 1).collect();
    let mut b = CategoryBuilder::default();
    for &a in &admissible {
        b.object(cat.object_name(a));
    }
    let mut backing = Vec::new();
    let mut arrow_index = HashMap::new();
    let mut homs: Vec<Vec<MorId>> = vec![Vec::new(); admissible.len() * admissible.len()];
    let n = admissible.len();
    for ai in 0..admissible.len() {
        for (bi, &bo) in admissible.iter().enumerate() {
            for &f in cat.hom(contexts[ai].object, bo) {
                let name = if shared_context[ai] {
                    format!("{xname}|{}|{}", cat.object_name(admissible[ai]), cat.morphism_name(f))
                } else {
                    format!("{xname}|{}", cat.morphism_name(f))
                };
                let id = b.morphism(name, ObjId::new(ai), ObjId::new(bi));
                backing.push(f);
                arrow_index.insert((ObjId::new(ai), f), id);
                homs[ai * n + bi].push(id);
            }
        }
    }
    for ai in 0..n {
        let ka = ObjId::new(ai);
        b.identity(ka, arrow_index[&(ka, contexts[ai].pr2)]);
        b.bang(ka, arrow_index[&(ka, cat.bang(contexts[ai].object))]);
    }
    let kt = position(cat.terminal()).expect("terminal admissible");
    b.terminal(kt);

    for ai in 0..n {
        for bi in 0..n {
            for &f in &homs[ai * n + bi] {
                let lifted = cat.tuple(contexts[ai].pr1, backing[f.index()])?;
                for ci in 0..n {
                    for &g in &homs[bi * n + ci] {
                        let h = cat.try_compose(backing[g.index()], lifted)?;
                        b.composite(g, f, arrow_index[&(ObjId::new(ai), h)]);
                    }
                }
            }
        }
    }

    for ((l, r), p) in cat.products() {
        let (Some(kl), Some(kr), Some(kp)) = (position(l), position(r), position(p.object)) else {
            continue;
        };
        let lctx = contexts[kl.index()].object;
        if cat.product(lctx, r).is_none() {
            continue;
        }
        let pctx = contexts[kp.index()];
        let pr1 = cat.try_compose(p.pr1, pctx.pr2)?;
        let pr2 = cat.try_compose(p.pr2, pctx.pr2)?;
        b.product(kl, kr, Product { object: kp, pr1: arrow_index[&(kp, pr1)], pr2: arrow_index[&(kp, pr2)] });
    }

    let constant = position(x).map(|kx| {
        let ctx = contexts[kt.index()];
        debug_assert_eq!(cat.cod(ctx.pr1), admissible[kx.index()]);
        arrow_index[&(kt, ctx.pr1)]
    });

    let category = b.build()?;
    Ok(KleisliPresentation {
        base: cat.clone(),
        sort: x,
        category,
        objects: admissible,
        contexts,
        backing,
        constant,
        arrow_index,
    })
}
