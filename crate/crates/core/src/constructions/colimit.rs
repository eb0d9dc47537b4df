use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::doctrine::{same_doctrine, Doctrine, DoctrineMorphism, Layer};
use crate::fincat::{CategoryBuilder, MorId, ObjId, Product};
use crate::order::{Fiber, FinPoset, LatticeOps, MonotoneMap};

use super::ConstructionError;

/// A diagram of doctrines over a finite directed preorder.
///
/// Invariant: `edges` holds a morphism for every `i ≤ j` (identities included), and all of
/// them commute and strictly preserve the terminal object and chosen products.
#[derive(Clone, Debug)]
pub struct FiniteDirectedDiagram {
    nodes: Vec<Arc<Doctrine>>,
    edges: BTreeMap<(usize, usize), DoctrineMorphism>,
}

fn same_tables(a: &DoctrineMorphism, b: &DoctrineMorphism) -> bool {
    a.obj_map == b.obj_map
        && a.mor_map == b.mor_map
        && a.components == b.components
        && same_doctrine(&a.src, &b.src)
        && same_doctrine(&a.dst, &b.dst)
}

/// Whether `m` sends the terminal object and each chosen product cone to chosen ones.
fn strictly_preserves_products(m: &DoctrineMorphism) -> bool {
    let (s, t) = (&m.src.base, &m.dst.base);
    m.object(s.terminal()) == t.terminal()
        && s.products().all(|((l, r), p)| {
            t.product(m.object(l), m.object(r)).is_some_and(|q| {
                q.object == m.object(p.object) && q.pr1 == m.morphism(p.pr1) && q.pr2 == m.morphism(p.pr2)
            })
        })
}

impl FiniteDirectedDiagram {
    /// Closes the generating edges under composition and identities, checking that
    /// parallel composites agree and that the index is directed.
    pub fn new(
        nodes: Vec<Arc<Doctrine>>,
        generators: Vec<(usize, usize, DoctrineMorphism)>,
    ) -> Result<Self, ConstructionError> {
        let n = nodes.len();
        if n == 0 {
            return Err(ConstructionError::Diagram("the index is empty".into()));
        }
        for (i, j, m) in &generators {
            if *i >= n || *j >= n {
                return Err(ConstructionError::Diagram(format!("edge {i} → {j} names a missing node")));
            }
            m.check_shape()?;
            if !same_doctrine(&m.src, &nodes[*i]) || !same_doctrine(&m.dst, &nodes[*j]) {
                return Err(ConstructionError::Diagram(format!("edge {i} → {j} has the wrong endpoints")));
            }
            if !strictly_preserves_products(m) {
                return Err(ConstructionError::Diagram(format!(
                    "edge {i} → {j} does not strictly preserve the terminal object and products"
                )));
            }
        }
        let mut edges: BTreeMap<(usize, usize), DoctrineMorphism> =
            (0..n).map(|i| ((i, i), DoctrineMorphism::identity(nodes[i].clone()))).collect();
        let mut changed = true;
        while changed {
            changed = false;
            let known: Vec<(usize, usize)> = edges.keys().copied().collect();
            for (i, j) in known {
                for (g0, k, g) in &generators {
                    if *g0 != j {
                        continue;
                    }
                    let composite = edges[&(i, j)].then(g)?;
                    match edges.get(&(i, *k)) {
                        Some(existing) if !same_tables(existing, &composite) => {
                            return Err(ConstructionError::Diagram(format!(
                                "two paths {i} → {k} give different morphisms"
                            )));
                        }
                        Some(_) => {}
                        None => {
                            edges.insert((i, *k), composite);
                            changed = true;
                        }
                    }
                }
            }
        }
        let diagram = FiniteDirectedDiagram { nodes, edges };
        for i in 0..n {
            for j in 0..n {
                if diagram.upper_bounds(&[i, j]).is_empty() {
                    return Err(ConstructionError::Diagram(format!("nodes {i} and {j} have no upper bound")));
                }
            }
        }
        Ok(diagram)
    }

    /// The chain `P₀ → P₁ → …` along consecutive morphisms.
    pub fn chain(steps: Vec<DoctrineMorphism>) -> Result<Self, ConstructionError> {
        let Some(first) = steps.first() else {
            return Err(ConstructionError::Diagram("a chain needs at least one edge".into()));
        };
        let mut nodes = vec![first.src.clone()];
        nodes.extend(steps.iter().map(|m| m.dst.clone()));
        let generators = steps.into_iter().enumerate().map(|(i, m)| (i, i + 1, m)).collect();
        FiniteDirectedDiagram::new(nodes, generators)
    }

    /// A single node with only its identity.
    pub fn single(node: Arc<Doctrine>) -> Self {
        FiniteDirectedDiagram::new(vec![node], Vec::new()).expect("one node is directed")
    }

    pub fn nodes(&self) -> &[Arc<Doctrine>] {
        &self.nodes
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i, j))
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&DoctrineMorphism> {
        self.edges.get(&(i, j))
    }

    /// Common upper bounds, ascending.
    pub fn upper_bounds(&self, of: &[usize]) -> Vec<usize> {
        (0..self.nodes.len()).filter(|k| of.iter().all(|i| self.leq(*i, *k))).collect()
    }

    /// The least node above every node; finite directed preorders have one.
    pub fn maximum(&self) -> usize {
        let all: Vec<usize> = (0..self.nodes.len()).collect();
        self.upper_bounds(&all)[0]
    }

    fn mor_at(&self, (i, f): (usize, MorId), k: usize) -> MorId {
        self.edges[&(i, k)].morphism(f)
    }

    fn elem_at(&self, (i, a, x): (usize, ObjId, usize), k: usize) -> (ObjId, usize) {
        let e = &self.edges[&(i, k)];
        (e.object(a), e.apply(a, x))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller index as the root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Class id per index, classes numbered by their least member.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let mut id = vec![usize::MAX; self.0.len()];
        let mut count = 0;
        for x in 0..self.0.len() {
            let r = self.find(x);
            if r == x {
                id[x] = count;
                count += 1;
            }
            id[x] = id[r];
        }
        (id, count)
    }
}

/// The colimit doctrine with its cocone and the class members behind every entry.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub doctrine: Arc<Doctrine>,
    /// Node `i` → colimit.
    pub cocone: Vec<DoctrineMorphism>,
    /// Members of each object class, least first.
    pub object_members: Vec<Vec<(usize, ObjId)>>,
    pub morphism_members: Vec<Vec<(usize, MorId)>>,
    /// Per colimit object, members of each fiber element class.
    pub element_members: Vec<Vec<Vec<(usize, ObjId, usize)>>>,
}

/// Keeps names unique by tagging clashes with the node they come from, then a counter.
fn unique_names(raw: Vec<(String, usize)>) -> Vec<String> {
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, _) in &raw {
        *count.entry(name).or_default() += 1;
    }
    let mut taken = BTreeSet::new();
    raw.iter()
        .map(|(name, node)| {
            let mut out = if count[name.as_str()] > 1 { format!("{name}@{node}") } else { name.clone() };
            let mut k = 1;
            while taken.contains(&out) {
                out = format!("{name}@{node}.{k}");
                k += 1;
            }
            taken.insert(out.clone());
            out
        })
        .collect()
}

/// Global numbering of per-node items, ordered by node then local id.
fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    let mut out = vec![0];
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// The quotient of the disjoint union of the nodes by eventual equality along the edges.
pub fn directed_colimit(d: &FiniteDirectedDiagram) -> Result<Colimit, ConstructionError> {
    let nodes = &d.nodes;
    let obj_off = offsets(nodes.iter().map(|p| p.base.object_count()));
    let mor_off = offsets(nodes.iter().map(|p| p.base.morphism_count()));
    let elem_off: Vec<Vec<usize>> = nodes.iter().map(|p| offsets(p.fibers.iter().map(Fiber::len))).collect();
    let elem_base = offsets(nodes.iter().map(|p| p.element_count()));
    let oid = |i: usize, a: ObjId| obj_off[i] + a.index();
    let mid = |i: usize, f: MorId| mor_off[i] + f.index();
    let eid = |i: usize, a: ObjId, x: usize| elem_base[i] + elem_off[i][a.index()] + x;

    let mut objs = UnionFind::new(obj_off[nodes.len()]);
    let mut mors = UnionFind::new(mor_off[nodes.len()]);
    let mut elems = UnionFind::new(elem_base[nodes.len()]);
    for (&(i, j), e) in &d.edges {
        for a in nodes[i].base.objects() {
            objs.union(oid(i, a), oid(j, e.object(a)));
            for x in 0..nodes[i].fiber(a).len() {
                elems.union(eid(i, a, x), eid(j, e.object(a), e.apply(a, x)));
            }
        }
        for f in nodes[i].base.morphisms() {
            mors.union(mid(i, f), mid(j, e.morphism(f)));
        }
    }
    let (obj_class, obj_count) = objs.classes();
    let (mor_class, mor_count) = mors.classes();
    let (elem_class, elem_count) = elems.classes();

    let mut object_members = vec![Vec::new(); obj_count];
    let mut morphism_members = vec![Vec::new(); mor_count];
    let mut elem_members_flat: Vec<Vec<(usize, ObjId, usize)>> = vec![Vec::new(); elem_count];
    for (i, p) in nodes.iter().enumerate() {
        for a in p.base.objects() {
            object_members[obj_class[oid(i, a)]].push((i, a));
            for x in 0..p.fiber(a).len() {
                elem_members_flat[elem_class[eid(i, a, x)]].push((i, a, x));
            }
        }
        for f in p.base.morphisms() {
            morphism_members[mor_class[mid(i, f)]].push((i, f));
        }
    }
    let ocls = |i: usize, a: ObjId| ObjId::new(obj_class[oid(i, a)]);
    let mcls = |i: usize, f: MorId| MorId::new(mor_class[mid(i, f)]);

    // Fiber element classes grouped by object class, in class order.
    let mut elem_pos = vec![(ObjId::new(0), 0usize); elem_count];
    let mut element_members: Vec<Vec<Vec<(usize, ObjId, usize)>>> = vec![Vec::new(); obj_count];
    for (c, members) in elem_members_flat.into_iter().enumerate() {
        let (i, a, _) = members[0];
        let oc = ocls(i, a);
        elem_pos[c] = (oc, element_members[oc.index()].len());
        element_members[oc.index()].push(members);
    }
    let ecls = |i: usize, a: ObjId, x: usize| elem_pos[elem_class[eid(i, a, x)]];

    // Base category.
    let mut b = CategoryBuilder::new();
    let names = unique_names(
        object_members.iter().map(|m| (nodes[m[0].0].base.object_name(m[0].1).to_string(), m[0].0)).collect(),
    );
    for name in names {
        b.object(name);
    }
    let names = unique_names(
        morphism_members.iter().map(|m| (nodes[m[0].0].base.morphism_name(m[0].1).to_string(), m[0].0)).collect(),
    );
    for (m, name) in morphism_members.iter().zip(names) {
        let (i, f) = m[0];
        let cat = &nodes[i].base;
        b.morphism(name, ocls(i, cat.dom(f)), ocls(i, cat.cod(f)));
    }
    let (i0, _) = object_members[0][0];
    b.terminal(ocls(i0, nodes[i0].base.terminal()));
    for m in &object_members {
        let (i, a) = m[0];
        let cat = &nodes[i].base;
        b.identity(ocls(i, a), mcls(i, cat.identity(a)));
        b.bang(ocls(i, a), mcls(i, cat.bang(a)));
    }
    let dom_cls = |c: usize| {
        let (i, f) = morphism_members[c][0];
        ocls(i, nodes[i].base.dom(f))
    };
    let cod_cls = |c: usize| {
        let (i, f) = morphism_members[c][0];
        ocls(i, nodes[i].base.cod(f))
    };
    for g in 0..mor_count {
        for f in 0..mor_count {
            if cod_cls(f) != dom_cls(g) {
                continue;
            }
            let (rg, rf) = (morphism_members[g][0], morphism_members[f][0]);
            let h = d.upper_bounds(&[rg.0, rf.0]).into_iter().find_map(|k| {
                let cat = &nodes[k].base;
                cat.compose(d.mor_at(rg, k), d.mor_at(rf, k)).map(|h| mcls(k, h))
            });
            let h = h.ok_or_else(|| ConstructionError::Diagram("composable classes never meet".into()))?;
            b.composite(MorId::new(g), MorId::new(f), h);
        }
    }
    let mut declared = BTreeSet::new();
    for (i, p) in nodes.iter().enumerate() {
        for ((l, r), q) in p.base.products() {
            let key = (ocls(i, l), ocls(i, r));
            if declared.insert(key) {
                b.product(
                    key.0,
                    key.1,
                    Product { object: ocls(i, q.object), pr1: mcls(i, q.pr1), pr2: mcls(i, q.pr2) },
                );
            }
        }
    }
    let base = b.build()?;

    // Fibers.
    let mut fibers = Vec::with_capacity(obj_count);
    for (c, classes) in element_members.iter().enumerate() {
        let n = classes.len();
        let reps: Vec<(usize, ObjId, usize)> = classes.iter().map(|m| m[0]).collect();
        // The least node where both representatives sit over the same object.
        let meet_point = |x: usize, y: usize| {
            d.upper_bounds(&[reps[x].0, reps[y].0]).into_iter().find_map(|k| {
                let (ax, ex) = d.elem_at(reps[x], k);
                let (ay, ey) = d.elem_at(reps[y], k);
                (ax == ay).then_some((k, ax, ex, ey))
            })
        };
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[x * n + y] = d.upper_bounds(&[reps[x].0, reps[y].0]).into_iter().any(|k| {
                    let (ax, ex) = d.elem_at(reps[x], k);
                    let (ay, ey) = d.elem_at(reps[y], k);
                    ax == ay && nodes[k].fiber(ax).leq(ex, ey)
                });
            }
        }
        let names = unique_names(reps.iter().map(|(i, a, x)| (nodes[*i].fiber(*a).name(*x).to_string(), *i)).collect());
        let poset = FinPoset::new(names, leq)?;
        let (ri, ra) = object_members[c][0];
        let constant = |pick: fn(&Fiber) -> Option<usize>| pick(nodes[ri].fiber(ra)).map(|x| ecls(ri, ra, x).1);
        let binary = |op: fn(&Fiber, usize, usize) -> Option<usize>| -> Option<Vec<usize>> {
            let mut table = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    let (k, a, ex, ey) = meet_point(x, y)?;
                    table.push(ecls(k, a, op(nodes[k].fiber(a), ex, ey)?).1);
                }
            }
            Some(table)
        };
        let ops = LatticeOps {
            top: constant(|f| f.ops.top),
            bottom: constant(|f| f.ops.bottom),
            meet: binary(|f, x, y| f.meet(x, y).ok()),
            join: binary(|f, x, y| f.join(x, y).ok()),
            imp: binary(|f, x, y| f.imp(x, y).ok()),
        };
        fibers.push(Fiber::new(poset, ops));
    }

    // Reindexing, computed where the arrow and the element meet.
    let mut reindex = Vec::with_capacity(mor_count);
    for members in &morphism_members {
        let rf = members[0];
        let cod = cod_cls(mcls(rf.0, rf.1).index());
        let table = element_members[cod.index()]
            .iter()
            .map(|m| {
                let re = m[0];
                d.upper_bounds(&[rf.0, re.0])
                    .into_iter()
                    .find_map(|k| {
                        let fk = d.mor_at(rf, k);
                        let (a, x) = d.elem_at(re, k);
                        (nodes[k].base.cod(fk) == a).then(|| {
                            let dom = nodes[k].base.dom(fk);
                            ecls(k, dom, nodes[k].reindex_elem(fk, x)).1
                        })
                    })
                    .ok_or_else(|| ConstructionError::Diagram("an arrow and an element never meet".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        reindex.push(MonotoneMap::new(table));
    }

    // δ, ∃ and ∀ come from the first node declaring them over the class pair.
    let mut delta = BTreeMap::new();
    for (i, p) in nodes.iter().enumerate() {
        for (&a, &e) in &p.delta {
            let sq = p.base.require_product(a, a)?.object;
            delta.entry(ocls(i, a)).or_insert_with(|| ecls(i, sq, e).1);
        }
    }
    let quantifier = |pick: fn(&Doctrine) -> &BTreeMap<(ObjId, ObjId), MonotoneMap>| {
        let mut out = BTreeMap::new();
        for (key, prod) in base.products() {
            let z = prod.object;
            let table = element_members[z.index()]
                .iter()
                .map(|m| {
                    let re = m[0];
                    (0..nodes.len()).filter(|k| d.leq(re.0, *k)).find_map(|k| {
                        let p = &nodes[k];
                        let (za, x) = d.elem_at(re, k);
                        p.base.products().find_map(|((l, r), q)| {
                            if q.object != za || (ocls(k, l), ocls(k, r)) != key {
                                return None;
                            }
                            let t = pick(p).get(&(l, r))?;
                            Some(ecls(k, l, t.apply(x)).1)
                        })
                    })
                })
                .collect::<Option<Vec<_>>>();
            if let Some(table) = table {
                out.insert(key, MonotoneMap::new(table));
            }
        }
        out
    };
    let exists = quantifier(|p| &p.exists);
    let forall = quantifier(|p| &p.forall);

    let mut layers: BTreeSet<Layer> = nodes[0].layers.clone();
    for p in nodes.iter().skip(1) {
        layers.retain(|l| p.layers.contains(l));
    }
    let name = format!("colim({})", nodes.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(","));
    let doctrine = Arc::new(Doctrine::new(name, base, fibers, reindex, delta, exists, forall, layers)?);

    let cocone = nodes
        .iter()
        .enumerate()
        .map(|(i, p)| DoctrineMorphism {
            src: p.clone(),
            dst: doctrine.clone(),
            obj_map: p.base.objects().map(|a| ocls(i, a)).collect(),
            mor_map: p.base.morphisms().map(|f| mcls(i, f)).collect(),
            components: p
                .base
                .objects()
                .map(|a| MonotoneMap::new((0..p.fiber(a).len()).map(|x| ecls(i, a, x).1).collect()))
                .collect(),
        })
        .collect();
    Ok(Colimit { doctrine, cocone, object_members, morphism_members, element_members })
}

/// The mediator out of the colimit for a cocone `g_i : P_i → R`: `g_[A]([α]) = g_i(α)` on representatives.
pub fn colimit_mediator(
    d: &FiniteDirectedDiagram,
    colimit: &Colimit,
    targets: &[DoctrineMorphism],
) -> Result<DoctrineMorphism, ConstructionError> {
    if targets.len() != d.nodes.len() {
        return Err(ConstructionError::Diagram("one cocone leg per node is required".into()));
    }
    let r = targets[0].dst.clone();
    for (i, g) in targets.iter().enumerate() {
        g.check_shape()?;
        if !same_doctrine(&g.src, &d.nodes[i]) || !same_doctrine(&g.dst, &r) {
            return Err(ConstructionError::Diagram(format!("cocone leg {i} has the wrong endpoints")));
        }
    }
    for (&(i, j), e) in &d.edges {
        if !same_tables(&e.then(&targets[j])?, &targets[i]) {
            return Err(ConstructionError::Diagram(format!("the legs at {i} and {j} do not commute with the edge")));
        }
    }
    Ok(DoctrineMorphism {
        src: colimit.doctrine.clone(),
        dst: r,
        obj_map: colimit.object_members.iter().map(|m| targets[m[0].0].object(m[0].1)).collect(),
        mor_map: colimit.morphism_members.iter().map(|m| targets[m[0].0].morphism(m[0].1)).collect(),
        components: colimit
            .element_members
            .iter()
            .map(|classes| MonotoneMap::new(classes.iter().map(|m| targets[m[0].0].apply(m[0].1, m[0].2)).collect()))
            .collect(),
    })
}
