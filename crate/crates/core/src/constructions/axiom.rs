use std::collections::BTreeMap;
use std::sync::Arc;

use crate::doctrine::{same_doctrine, Doctrine, DoctrineMorphism};
use crate::fincat::{MorId, ObjId};
use crate::order::{Fiber, LatticeOps, MonotoneMap};
use crate::search::{Csp, Uniqueness};

use super::ConstructionError;

/// `P_φ` together with `(id, 𝔣_φ) : P → P_φ`.
#[derive(Clone, Debug)]
pub struct AxiomExtension {
    pub parent: Arc<Doctrine>,
    pub axiom: usize,
    pub doctrine: Arc<Doctrine>,
    pub morphism: DoctrineMorphism,
    /// Per object, new element id → parent element id.
    pub elements: Vec<Vec<usize>>,
}

impl AxiomExtension {
    /// `P(!_A)φ` in the parent fiber over `A`.
    pub fn bound(&self, a: ObjId) -> usize {
        self.parent.reindex_elem(self.parent.base.bang(a), self.axiom)
    }
}

/// Restricts every fiber to the downset of `P(!_A)φ`, forcing `φ` to become true.
pub fn add_axiom(p: &Arc<Doctrine>, phi: usize) -> Result<AxiomExtension, ConstructionError> {
    let cat = &p.base;
    let t = cat.terminal();
    if phi >= p.fiber(t).len() {
        return Err(ConstructionError::ElementOutOfRange { object: cat.object_name(t).to_string(), element: phi });
    }
    let bound: Vec<usize> = cat.objects().map(|a| p.reindex_elem(cat.bang(a), phi)).collect();
    let elements: Vec<Vec<usize>> = cat
        .objects()
        .map(|a| (0..p.fiber(a).len()).filter(|x| p.fiber(a).leq(*x, bound[a.index()])).collect())
        .collect();
    let position: Vec<BTreeMap<usize, usize>> =
        elements.iter().map(|keep| keep.iter().enumerate().map(|(i, x)| (*x, i)).collect()).collect();
    let pos = |a: ObjId, x: usize| -> Result<usize, ConstructionError> {
        position[a.index()].get(&x).copied().ok_or_else(|| ConstructionError::NotClosed(cat.object_name(a).to_string()))
    };

    let mut fibers = Vec::new();
    for a in cat.objects() {
        let f = p.fiber(a);
        let keep = &elements[a.index()];
        let m = bound[a.index()];
        let binary = |op: &dyn Fn(usize, usize) -> Result<usize, crate::order::OrderError>| -> Result<Vec<usize>, ConstructionError> {
            let mut table = Vec::with_capacity(keep.len() * keep.len());
            for &x in keep {
                for &y in keep {
                    table.push(pos(a, op(x, y)?)?);
                }
            }
            Ok(table)
        };
        let ops = LatticeOps {
            top: Some(pos(a, m)?),
            bottom: f.ops.bottom.map(|b| pos(a, b)).transpose()?,
            meet: f.ops.meet.as_ref().map(|_| binary(&|x, y| f.meet(x, y))).transpose()?,
            join: f.ops.join.as_ref().map(|_| binary(&|x, y| f.join(x, y))).transpose()?,
            imp: match (&f.ops.imp, &f.ops.meet) {
                (Some(_), Some(_)) => Some(binary(&|x, y| f.meet(f.imp(x, y)?, m))?),
                _ => None,
            },
        };
        fibers.push(Fiber::new(f.poset.restrict(keep), ops));
    }
    if p.fibers.iter().any(|f| f.ops.meet.is_none()) {
        return Err(ConstructionError::MissingStructure("meets in every fiber".into()));
    }

    let reindex = cat
        .morphisms()
        .map(|f| {
            let (a, b) = (cat.dom(f), cat.cod(f));
            let table = elements[b.index()].iter().map(|x| pos(a, p.reindex_elem(f, *x))).collect::<Result<_, _>>()?;
            Ok(MonotoneMap::new(table))
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let mut delta = BTreeMap::new();
    for (&a, &d) in &p.delta {
        let sq = cat.require_product(a, a)?.object;
        delta.insert(a, pos(sq, p.fiber(sq).meet(d, bound[sq.index()])?)?);
    }
    let mut exists = BTreeMap::new();
    for (&(c, b), q) in &p.exists {
        let z = cat.require_product(c, b)?.object;
        let table = elements[z.index()].iter().map(|x| pos(c, q.apply(*x))).collect::<Result<_, _>>()?;
        exists.insert((c, b), MonotoneMap::new(table));
    }
    let mut forall = BTreeMap::new();
    for (&(c, b), q) in &p.forall {
        let z = cat.require_product(c, b)?.object;
        let fc = p.fiber(c);
        let table = elements[z.index()]
            .iter()
            .map(|x| pos(c, fc.meet(q.apply(*x), bound[c.index()])?))
            .collect::<Result<_, _>>()?;
        forall.insert((c, b), MonotoneMap::new(table));
    }
    let doctrine = Arc::new(Doctrine::new(
        format!("{}+ax:{}", p.name, p.fiber(t).name(phi)),
        cat.clone(),
        fibers,
        reindex,
        delta,
        exists,
        forall,
        p.layers.clone(),
    )?);
    let components = cat
        .objects()
        .map(|a| {
            let f = p.fiber(a);
            let table = (0..f.len()).map(|x| pos(a, f.meet(bound[a.index()], x)?)).collect::<Result<_, _>>()?;
            Ok(MonotoneMap::new(table))
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let morphism = DoctrineMorphism {
        src: p.clone(),
        dst: doctrine.clone(),
        obj_map: cat.objects().collect(),
        mor_map: cat.morphisms().collect(),
        components,
    };
    Ok(AxiomExtension { parent: p.clone(), axiom: phi, doctrine, morphism, elements })
}

fn check_axiom_target(ext: &AxiomExtension, target: &DoctrineMorphism) -> Result<(), ConstructionError> {
    target.check_shape()?;
    if !same_doctrine(&target.src, &ext.parent) {
        return Err(ConstructionError::WrongSource(format!(
            "expected `{}`, got `{}`",
            ext.parent.name, target.src.name
        )));
    }
    let t = ext.parent.base.terminal();
    let fiber = target.dst.fiber(target.object(t));
    if !fiber.leq(fiber.top()?, target.apply(t, ext.axiom)) {
        return Err(ConstructionError::AxiomNotSatisfied);
    }
    Ok(())
}

/// The mediator `(G, 𝔤') : P_φ → R` with `𝔤'_A([α]) = 𝔤_A(α)`; requires `⊤ ≤ 𝔤_𝐭(φ)`.
pub fn mediate_axiom(ext: &AxiomExtension, target: &DoctrineMorphism) -> Result<DoctrineMorphism, ConstructionError> {
    check_axiom_target(ext, target)?;
    let components = ext
        .elements
        .iter()
        .enumerate()
        .map(|(a, keep)| MonotoneMap::new(keep.iter().map(|x| target.apply(ObjId::new(a), *x)).collect()))
        .collect();
    Ok(DoctrineMorphism {
        src: ext.doctrine.clone(),
        dst: target.dst.clone(),
        obj_map: target.obj_map.clone(),
        mor_map: target.mor_map.clone(),
        components,
    })
}

/// Exhaustive search over component tables `P_φ → R` over the functor of the target,
/// subject to the factorization equation, naturality and monotonicity.
pub fn axiom_mediator_uniqueness(
    ext: &AxiomExtension,
    target: &DoctrineMorphism,
) -> Result<Uniqueness, ConstructionError> {
    let mediator = mediate_axiom(ext, target)?;
    let (pp, r) = (&*ext.doctrine, &*target.dst);
    let cat = &pp.base;
    let mut csp = Csp::new();
    let comp: Vec<Vec<usize>> = cat
        .objects()
        .map(|a| {
            let n = r.fiber(target.object(a)).len();
            (0..pp.fiber(a).len()).map(|_| csp.variable((0..n).collect())).collect()
        })
        .collect();
    for a in cat.objects() {
        for x in 0..ext.parent.fiber(a).len() {
            csp.fix(comp[a.index()][ext.morphism.apply(a, x)], target.apply(a, x));
        }
        let dst = r.fiber(target.object(a));
        for (x, y) in pp.fiber(a).poset.leq_pairs() {
            if x != y {
                csp.binary(comp[a.index()][x], comp[a.index()][y], move |u, v| dst.leq(u, v));
            }
        }
    }
    for f in cat.morphisms() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        let gf: MorId = target.morphism(f);
        for beta in 0..pp.fiber(b).len() {
            let pulled = pp.reindex_elem(f, beta);
            csp.binary(comp[b.index()][beta], comp[a.index()][pulled], move |y, z| r.reindex_elem(gf, y) == z);
        }
    }
    let expected: Vec<usize> = mediator.components.iter().flat_map(|c| c.table.iter().copied()).collect();
    Ok(Uniqueness::from_solutions(&csp.solve(2), &expected))
}
