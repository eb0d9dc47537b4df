use std::collections::BTreeMap;
use std::sync::Arc;

use crate::doctrine::{Doctrine, DoctrineMorphism, Layer};
use crate::fincat::ObjId;
use crate::order::{Fiber, LatticeOps, MonotoneMap};

use super::ConstructionError;

/// The doctrine of `¬¬`-closed elements and the morphism `(id, ¬¬)` onto it.
#[derive(Clone, Debug)]
pub struct NegationFragment {
    pub doctrine: Arc<Doctrine>,
    pub morphism: DoctrineMorphism,
    /// Per object, new element id → parent element id.
    pub elements: Vec<Vec<usize>>,
}

/// Restricts every fiber to `{α | ¬¬α = α}`; the result is Boolean.
///
/// Joins become `¬(¬a ∧ ¬b)`, `∃` and `δ` are closed by `¬¬`; everything else restricts.
/// A doctrine that is already Boolean is returned unchanged, with the identity.
pub fn double_negation_fragment(p: &Arc<Doctrine>) -> Result<NegationFragment, ConstructionError> {
    let cat = &p.base;
    for a in cat.objects() {
        let f = p.fiber(a);
        if f.ops.meet.is_none() || f.ops.imp.is_none() || f.ops.bottom.is_none() || f.ops.top.is_none() {
            return Err(ConstructionError::MissingStructure(format!(
                "⊤, ⊥, ∧ and → in the fiber over `{}`",
                cat.object_name(a)
            )));
        }
    }
    let nn = |a: ObjId, x: usize| -> Result<usize, ConstructionError> {
        let f = p.fiber(a);
        Ok(f.neg(f.neg(x)?)?)
    };
    let mut elements = Vec::new();
    let mut closure = Vec::new();
    for a in cat.objects() {
        let table = (0..p.fiber(a).len()).map(|x| nn(a, x)).collect::<Result<Vec<_>, _>>()?;
        elements.push((0..table.len()).filter(|x| table[*x] == *x).collect::<Vec<_>>());
        closure.push(table);
    }
    if elements.iter().zip(&p.fibers).all(|(keep, f)| keep.len() == f.len()) {
        return Ok(NegationFragment { doctrine: p.clone(), morphism: DoctrineMorphism::identity(p.clone()), elements });
    }
    let position: Vec<BTreeMap<usize, usize>> =
        elements.iter().map(|keep| keep.iter().enumerate().map(|(i, x)| (*x, i)).collect()).collect();
    // ¬¬ lands in the closed elements, so `pos` of a closure never fails.
    let close = |a: ObjId, x: usize| position[a.index()][&closure[a.index()][x]];

    let mut fibers = Vec::new();
    for a in cat.objects() {
        let f = p.fiber(a);
        let keep = &elements[a.index()];
        let binary = |op: &dyn Fn(usize, usize) -> Result<usize, crate::order::OrderError>| {
            let mut table = Vec::with_capacity(keep.len() * keep.len());
            for &x in keep {
                for &y in keep {
                    table.push(close(a, op(x, y)?));
                }
            }
            Ok::<_, ConstructionError>(table)
        };
        let ops = LatticeOps {
            top: Some(close(a, f.top()?)),
            bottom: Some(close(a, f.bottom()?)),
            meet: Some(binary(&|x, y| f.meet(x, y))?),
            join: Some(binary(&|x, y| f.neg(f.meet(f.neg(x)?, f.neg(y)?)?))?),
            imp: Some(binary(&|x, y| f.imp(x, y))?),
        };
        fibers.push(Fiber::new(f.poset.restrict(keep), ops));
    }
    let reindex = cat
        .morphisms()
        .map(|f| {
            let a = cat.dom(f);
            MonotoneMap::new(elements[cat.cod(f).index()].iter().map(|x| close(a, p.reindex_elem(f, *x))).collect())
        })
        .collect();
    let mut delta = BTreeMap::new();
    for (&a, &d) in &p.delta {
        let sq = cat.require_product(a, a)?.object;
        delta.insert(a, close(sq, d));
    }
    let quantifier = |tables: &BTreeMap<(ObjId, ObjId), MonotoneMap>| -> Result<_, ConstructionError> {
        let mut out = BTreeMap::new();
        for (&(c, b), q) in tables {
            let z = cat.require_product(c, b)?.object;
            out.insert((c, b), MonotoneMap::new(elements[z.index()].iter().map(|x| close(c, q.apply(*x))).collect()));
        }
        Ok(out)
    };
    let exists = quantifier(&p.exists)?;
    let forall = quantifier(&p.forall)?;
    let mut layers = p.layers.clone();
    layers.extend([
        Layer::Functorial,
        Layer::Primary,
        Layer::Bounded,
        Layer::Implicational,
        Layer::Joins,
        Layer::Heyting,
        Layer::Boolean,
    ]);
    let doctrine =
        Arc::new(Doctrine::new(format!("{}¬¬", p.name), cat.clone(), fibers, reindex, delta, exists, forall, layers)?);
    let components =
        cat.objects().map(|a| MonotoneMap::new((0..p.fiber(a).len()).map(|x| close(a, x)).collect())).collect();
    let morphism = DoctrineMorphism {
        src: p.clone(),
        dst: doctrine.clone(),
        obj_map: cat.objects().collect(),
        mor_map: cat.morphisms().collect(),
        components,
    };
    Ok(NegationFragment { doctrine, morphism, elements })
}
