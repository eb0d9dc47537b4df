use std::collections::BTreeSet;
use std::sync::Arc;

use crate::doctrine::{same_doctrine, Doctrine, DoctrineMorphism};
use crate::fincat::{MorId, ObjId};
use crate::order::{poset_reflection, Fiber, Filter, LatticeOps, MonotoneMap, Preorder};
use crate::search::{Csp, Uniqueness};

use super::ModelError;

/// `P/∇` with the quotient morphism `(id, 𝔮) : P → P/∇`.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub src: Arc<Doctrine>,
    pub filter: Filter,
    pub result: Arc<Doctrine>,
    /// Identity on the base; components are the reflection maps.
    pub q: DoctrineMorphism,
    /// Per object, the least member of each class.
    pub representatives: Vec<Vec<usize>>,
}

impl QuotientPresentation {
    /// The class of `x` in the fiber over `a`.
    pub fn class(&self, a: ObjId, x: usize) -> usize {
        self.q.apply(a, x)
    }

    /// Members of every class over `a`, in class order.
    pub fn classes(&self, a: ObjId) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.representatives[a.index()].len()];
        for (x, k) in self.q.components[a.index()].table.iter().enumerate() {
            out[*k].push(x);
        }
        out
    }
}

/// `α ⊑ β` iff `P(!)θ ∧ α ≤ β` for some `θ ∈ ∇`, reflected into a poset in every fiber.
///
/// The filter is checked against the terminal fiber; it need not be proper.
pub fn quotient_by_filter(p: &Arc<Doctrine>, filter: &Filter) -> Result<QuotientPresentation, ModelError> {
    let cat = &p.base;
    let t = cat.terminal();
    let filter =
        Filter::new(p.terminal_fiber(), filter.members()).map_err(|e| ModelError::NotAFilter(e.to_string()))?;

    let mut components = Vec::new();
    let mut representatives = Vec::new();
    let mut fibers = Vec::new();
    for a in cat.objects() {
        let f = p.fiber(a);
        let guards: BTreeSet<usize> = filter.members().map(|th| p.reindex_elem(cat.bang(a), th)).collect();
        let mut guarded = Vec::with_capacity(guards.len());
        for g in &guards {
            guarded.push((0..f.len()).map(|x| f.meet(*g, x)).collect::<Result<Vec<_>, _>>()?);
        }
        let pre = Preorder::from_fn(f.len(), |x, y| guarded.iter().any(|row| f.leq(row[x], y)));
        let names: Vec<String> = (0..f.len()).map(|x| f.name(x).to_string()).collect();
        let r = poset_reflection(&pre, &names)?;
        let k = r.representatives.len();
        let class = |x: usize| r.quotient.apply(x);
        let rep = |i: usize| r.representatives[i];
        let binary = |table: &Option<Vec<usize>>| {
            table.as_ref().map(|tab| (0..k * k).map(|i| class(tab[rep(i / k) * f.len() + rep(i % k)])).collect())
        };
        let ops = LatticeOps {
            top: f.ops.top.map(class),
            bottom: f.ops.bottom.map(class),
            meet: binary(&f.ops.meet),
            join: binary(&f.ops.join),
            imp: binary(&f.ops.imp),
        };
        fibers.push(Fiber::new(r.poset.clone(), ops));
        components.push(r.quotient.clone());
        representatives.push(r.representatives.clone());
    }
    let class = |a: ObjId, x: usize| components[a.index()].apply(x);
    let reindex = cat
        .morphisms()
        .map(|f| {
            let reps = &representatives[cat.cod(f).index()];
            MonotoneMap::new(reps.iter().map(|x| class(cat.dom(f), p.reindex_elem(f, *x))).collect())
        })
        .collect();
    let delta = p
        .delta
        .iter()
        .map(|(&a, &d)| Ok((a, class(cat.require_product(a, a)?.object, d))))
        .collect::<Result<_, ModelError>>()?;
    let transport = |tables: &std::collections::BTreeMap<(ObjId, ObjId), MonotoneMap>| {
        tables
            .iter()
            .map(|(&(c, b), q)| {
                let z = cat.require_product(c, b)?.object;
                Ok((
                    (c, b),
                    MonotoneMap::new(representatives[z.index()].iter().map(|x| class(c, q.apply(*x))).collect()),
                ))
            })
            .collect::<Result<_, ModelError>>()
    };
    let exists = transport(&p.exists)?;
    let forall = transport(&p.forall)?;
    let name = format!("{}/∇[{}]", p.name, filter.names(p.fiber(t)).join(","));
    let result = Arc::new(Doctrine::new(name, cat.clone(), fibers, reindex, delta, exists, forall, p.layers.clone())?);
    let q = DoctrineMorphism {
        src: p.clone(),
        dst: result.clone(),
        obj_map: cat.objects().collect(),
        mor_map: cat.morphisms().collect(),
        components,
    };
    Ok(QuotientPresentation { src: p.clone(), filter, result, q, representatives })
}

fn check_quotient_target(qp: &QuotientPresentation, target: &DoctrineMorphism) -> Result<(), ModelError> {
    target.check_shape()?;
    if !same_doctrine(&target.src, &qp.src) {
        return Err(ModelError::WrongSource(format!("expected `{}`, got `{}`", qp.src.name, target.src.name)));
    }
    let t = qp.src.base.terminal();
    let fiber = target.dst.fiber(target.object(t));
    let top = fiber.top()?;
    if let Some(th) = qp.filter.members().find(|th| target.apply(t, *th) != top) {
        return Err(ModelError::NoFactorization(format!("`{}` is not sent to ⊤", qp.src.terminal_fiber().name(th))));
    }
    Ok(())
}

/// The unique `(G, 𝔤') : P/∇ → R` with `𝔤'[α] = 𝔤(α)`, for a target sending all of `∇` to `⊤`.
pub fn quotient_mediator(qp: &QuotientPresentation, target: &DoctrineMorphism) -> Result<DoctrineMorphism, ModelError> {
    check_quotient_target(qp, target)?;
    let cat = &qp.src.base;
    let mut components = Vec::new();
    for a in cat.objects() {
        let table: Vec<usize> = qp.representatives[a.index()].iter().map(|x| target.apply(a, *x)).collect();
        if let Some(x) = (0..qp.src.fiber(a).len()).find(|x| target.apply(a, *x) != table[qp.class(a, *x)]) {
            return Err(ModelError::NoFactorization(format!(
                "`{}` over `{}` and its class representative have different images",
                qp.src.fiber(a).name(x),
                cat.object_name(a)
            )));
        }
        components.push(MonotoneMap::new(table));
    }
    Ok(DoctrineMorphism {
        src: qp.result.clone(),
        dst: target.dst.clone(),
        obj_map: target.obj_map.clone(),
        mor_map: target.mor_map.clone(),
        components,
    })
}

/// Exhaustive search over component tables `P/∇ → R` over the functor of the target,
/// subject to `𝔤' ∘ 𝔮 = 𝔤`, naturality and monotonicity.
pub fn quotient_mediator_uniqueness(
    qp: &QuotientPresentation,
    target: &DoctrineMorphism,
) -> Result<Uniqueness, ModelError> {
    let mediator = quotient_mediator(qp, target)?;
    let (pq, r) = (&*qp.result, &*target.dst);
    let cat = &pq.base;
    let mut csp = Csp::new();
    let comp: Vec<Vec<usize>> = cat
        .objects()
        .map(|a| {
            let n = r.fiber(target.object(a)).len();
            (0..pq.fiber(a).len()).map(|_| csp.variable((0..n).collect())).collect()
        })
        .collect();
    for a in cat.objects() {
        for x in 0..qp.src.fiber(a).len() {
            csp.fix(comp[a.index()][qp.class(a, x)], target.apply(a, x));
        }
        let dst = r.fiber(target.object(a));
        for (x, y) in pq.fiber(a).poset.leq_pairs() {
            if x != y {
                csp.binary(comp[a.index()][x], comp[a.index()][y], move |u, v| dst.leq(u, v));
            }
        }
    }
    for f in cat.morphisms() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        let gf: MorId = target.morphism(f);
        for beta in 0..pq.fiber(b).len() {
            let pulled = pq.reindex_elem(f, beta);
            csp.binary(comp[b.index()][beta], comp[a.index()][pulled], move |y, z| r.reindex_elem(gf, y) == z);
        }
    }
    let expected: Vec<usize> = mediator.components.iter().flat_map(|c| c.table.iter().copied()).collect();
    Ok(Uniqueness::from_solutions(&csp.solve(2), &expected))
}
