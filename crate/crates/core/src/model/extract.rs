use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::doctrine::{check_rich, check_structure, consistency_status, Doctrine, DoctrineMorphism, Layer};
use crate::fincat::sets::{build_set_category, Functions, SetCategory, SetProduct};
use crate::fincat::{MorId, ObjId};
use crate::io::subset_doctrine_over;
use crate::order::{classify_filter, Filter, MonotoneMap};

use super::quotient::{quotient_by_filter, QuotientPresentation};
use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelMode {
    /// Carriers are the global elements themselves.
    Plain,
    /// Carriers are global elements up to the equality of the filter.
    Elementary,
}

impl ModelMode {
    pub fn name(self) -> &'static str {
        match self {
            ModelMode::Plain => "plain",
            ModelMode::Elementary => "elementary",
        }
    }
}

impl fmt::Display for ModelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A model in nonempty finite sets, extracted from a doctrine and an ultrafilter.
///
/// Carrier element `i` over `X` stands for the constants `constants[X][i]`;
/// `interp[X][φ]` is the set of carrier elements `c` with `P(c)φ ∈ ∇`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetModel {
    pub mode: ModelMode,
    pub doctrine: Arc<Doctrine>,
    pub filter: Filter,
    /// Per object, element labels.
    pub carriers: Vec<Vec<String>>,
    /// Per object, per carrier element, the global elements it stands for (least first).
    pub constants: Vec<Vec<Vec<MorId>>>,
    /// Per base arrow `f : X → Y`, the function `carrier(X) → carrier(Y)`.
    pub arrow_action: Vec<Vec<usize>>,
    /// Per object, per fiber element, a subset of the carrier.
    pub interp: Vec<Vec<BTreeSet<usize>>>,
}

impl SubsetModel {
    pub fn carrier(&self, a: ObjId) -> &[String] {
        &self.carriers[a.index()]
    }

    pub fn interp(&self, a: ObjId, x: usize) -> &BTreeSet<usize> {
        &self.interp[a.index()][x]
    }

    pub fn action(&self, f: MorId) -> &[usize] {
        &self.arrow_action[f.index()]
    }

    /// The carrier element standing for the global element `c : 𝐭 → X`.
    pub fn element_of(&self, c: MorId) -> Option<usize> {
        let x = self.doctrine.base.cod(c);
        self.constants[x.index()].iter().position(|cs| cs.contains(&c))
    }

    /// Checks functoriality, product preservation, naturality and every preservation law.
    ///
    /// `∀` is claimed only for Boolean doctrines and `δ` only in elementary mode;
    /// the remaining laws are always claimed.
    pub fn verify(&self) -> ModelReport {
        verify_model(self)
    }

    /// The finite subsets doctrine over exactly these carriers and actions,
    /// with the induced morphism from `P/∇`.
    pub fn adapter(&self) -> Result<ModelAdapter, ModelError> {
        build_adapter(self)
    }

    /// Carriers, arrow actions and interpretation tables keyed by name.
    pub fn document(&self) -> Value {
        let p = &*self.doctrine;
        let cat = &p.base;
        let objects: Map<String, Value> = cat
            .objects()
            .map(|a| {
                let labels = self.carrier(a);
                let f = p.fiber(a);
                let interp: Map<String, Value> = (0..f.len())
                    .map(|x| {
                        (
                            f.name(x).to_string(),
                            json!(self.interp(a, x).iter().map(|i| &labels[*i]).collect::<Vec<_>>()),
                        )
                    })
                    .collect();
                (cat.object_name(a).to_string(), json!({ "carrier": labels, "interp": interp }))
            })
            .collect();
        let arrows: Map<String, Value> = cat
            .morphisms()
            .map(|f| {
                let body = json!({
                    "dom": cat.object_name(cat.dom(f)),
                    "cod": cat.object_name(cat.cod(f)),
                    "action": self.action(f),
                });
                (cat.morphism_name(f).to_string(), body)
            })
            .collect();
        json!({
            "mode": self.mode.name(),
            "doctrine": p.name,
            "filter": self.filter.names(p.terminal_fiber()),
            "objects": objects,
            "arrows": arrows,
        })
    }
}

/// A law of a model in finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelLaw {
    Functor,
    Products,
    Monotone,
    Naturality,
    Top,
    Bottom,
    Meet,
    Imp,
    Exists,
    Forall,
    Delta,
}

impl ModelLaw {
    pub const ALL: [ModelLaw; 11] = [
        ModelLaw::Functor,
        ModelLaw::Products,
        ModelLaw::Monotone,
        ModelLaw::Naturality,
        ModelLaw::Top,
        ModelLaw::Bottom,
        ModelLaw::Meet,
        ModelLaw::Imp,
        ModelLaw::Exists,
        ModelLaw::Forall,
        ModelLaw::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelLaw::Functor => "functor",
            ModelLaw::Products => "products",
            ModelLaw::Monotone => "monotone",
            ModelLaw::Naturality => "naturality",
            ModelLaw::Top => "top",
            ModelLaw::Bottom => "bottom",
            ModelLaw::Meet => "meet",
            ModelLaw::Imp => "implication",
            ModelLaw::Exists => "exists",
            ModelLaw::Forall => "forall",
            ModelLaw::Delta => "diagonal",
        }
    }
}

impl fmt::Display for ModelLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
    /// Whether the model is expected to satisfy the law.
    pub claimed: bool,
}

const KEPT_VIOLATIONS: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelReport {
    pub laws: BTreeMap<ModelLaw, Tally>,
    /// The first few failures of any law, claimed or not.
    pub violations: Vec<String>,
}

impl ModelReport {
    /// No claimed law fails.
    pub fn passes(&self) -> bool {
        self.laws.values().all(|t| !t.claimed || t.failed == 0)
    }

    /// The law was checked at least once and never failed.
    pub fn holds(&self, law: ModelLaw) -> bool {
        self.laws.get(&law).is_some_and(|t| t.checked > 0 && t.failed == 0)
    }

    fn record(&mut self, law: ModelLaw, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.laws.entry(law).or_default();
        t.checked += 1;
        if !ok {
            t.failed += 1;
            if self.violations.len() < KEPT_VIOLATIONS {
                self.violations.push(format!("{law}: {}", detail()));
            }
        }
    }
}

fn verify_model(m: &SubsetModel) -> ModelReport {
    let p = &*m.doctrine;
    let cat = &p.base;
    let mut r = ModelReport::default();
    for law in ModelLaw::ALL {
        let claimed = match law {
            ModelLaw::Forall => p.declares(Layer::Boolean),
            ModelLaw::Delta => m.mode == ModelMode::Elementary,
            _ => true,
        };
        r.laws.insert(law, Tally { claimed, ..Tally::default() });
    }
    let full = |a: ObjId| (0..m.carrier(a).len()).collect::<BTreeSet<usize>>();
    let oname = |a: ObjId| cat.object_name(a).to_string();

    for a in cat.objects() {
        let id = m.action(cat.identity(a));
        r.record(ModelLaw::Functor, id.iter().enumerate().all(|(i, j)| i == *j), || {
            format!("id_{} acts nontrivially", oname(a))
        });
    }
    for (g, f, h) in cat.composition_triples() {
        let ok = m.action(f).iter().map(|i| m.action(g)[*i]).eq(m.action(h).iter().copied());
        r.record(ModelLaw::Functor, ok, || {
            format!(
                "{} ∘ {} acts differently from {}",
                cat.morphism_name(g),
                cat.morphism_name(f),
                cat.morphism_name(h)
            )
        });
    }
    for ((l, rr), pr) in cat.products() {
        let (p1, p2) = (m.action(pr.pr1), m.action(pr.pr2));
        let pairs: BTreeSet<(usize, usize)> = p1.iter().copied().zip(p2.iter().copied()).collect();
        let ok = pairs.len() == p1.len() && pairs.len() == m.carrier(l).len() * m.carrier(rr).len();
        r.record(ModelLaw::Products, ok, || format!("{}×{} is not carried to a product", oname(l), oname(rr)));
    }
    for a in cat.objects() {
        let f = p.fiber(a);
        for (x, y) in f.poset.leq_pairs() {
            r.record(ModelLaw::Monotone, m.interp(a, x).is_subset(m.interp(a, y)), || {
                format!("{} ≤ {} over {}", f.name(x), f.name(y), oname(a))
            });
        }
        if let Some(top) = f.ops.top {
            r.record(ModelLaw::Top, *m.interp(a, top) == full(a), || format!("⊤ over {}", oname(a)));
        }
        if let Some(bot) = f.ops.bottom {
            r.record(ModelLaw::Bottom, m.interp(a, bot).is_empty(), || format!("⊥ over {}", oname(a)));
        }
        for x in 0..f.len() {
            for y in 0..f.len() {
                if let Ok(z) = f.meet(x, y) {
                    let expect: BTreeSet<usize> = m.interp(a, x).intersection(m.interp(a, y)).copied().collect();
                    r.record(ModelLaw::Meet, *m.interp(a, z) == expect, || {
                        format!("{} ∧ {} over {}", f.name(x), f.name(y), oname(a))
                    });
                }
                if let Ok(z) = f.imp(x, y) {
                    let expect: BTreeSet<usize> = full(a)
                        .into_iter()
                        .filter(|c| !m.interp(a, x).contains(c) || m.interp(a, y).contains(c))
                        .collect();
                    r.record(ModelLaw::Imp, *m.interp(a, z) == expect, || {
                        format!("{} → {} over {}", f.name(x), f.name(y), oname(a))
                    });
                }
            }
        }
    }
    for f in cat.morphisms() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        let act = m.action(f);
        for y in 0..p.fiber(b).len() {
            let expect: BTreeSet<usize> = (0..act.len()).filter(|i| m.interp(b, y).contains(&act[*i])).collect();
            r.record(ModelLaw::Naturality, *m.interp(a, p.reindex_elem(f, y)) == expect, || {
                format!("reindexing {} along {}", p.fiber(b).name(y), cat.morphism_name(f))
            });
        }
    }
    for (law, tables) in [(ModelLaw::Exists, &p.exists), (ModelLaw::Forall, &p.forall)] {
        for (&(c, b), q) in tables {
            let Some(pr) = cat.product(c, b) else { continue };
            let z = pr.object;
            let p1 = m.action(pr.pr1);
            for x in 0..p.fiber(z).len() {
                let set = m.interp(z, x);
                let expect: BTreeSet<usize> = if law == ModelLaw::Exists {
                    set.iter().map(|w| p1[*w]).collect()
                } else {
                    full(c).into_iter().filter(|k| (0..p1.len()).all(|w| p1[w] != *k || set.contains(&w))).collect()
                };
                r.record(law, *m.interp(c, q.apply(x)) == expect, || {
                    format!("over ({}, {}) at {}", oname(c), oname(b), p.fiber(z).name(x))
                });
            }
        }
    }
    for (&a, &d) in &p.delta {
        let Some(pr) = cat.product(a, a) else { continue };
        let (p1, p2) = (m.action(pr.pr1), m.action(pr.pr2));
        let diagonal: BTreeSet<usize> = (0..p1.len()).filter(|w| p1[*w] == p2[*w]).collect();
        r.record(ModelLaw::Delta, *m.interp(pr.object, d) == diagonal, || format!("δ over {}", oname(a)));
    }
    r
}

/// Verifies the layer, consistency, richness and filter preconditions shared by both extractions.
fn preconditions(p: &Doctrine, filter: &Filter, layers: &[Layer]) -> Result<Filter, ModelError> {
    for &layer in layers {
        if !p.declares(layer) {
            return Err(ModelError::MissingLayer(layer));
        }
    }
    let report = check_structure(p, layers)?;
    for &layer in layers {
        if let Some(l) = report.layers.get(&layer).filter(|l| l.failures > 0) {
            return Err(ModelError::LayerFails { layer, failures: l.failures });
        }
    }
    if !consistency_status(p).status.is_consistent() {
        return Err(ModelError::Inconsistent { step: None });
    }
    let rich = check_rich(p);
    let cat = &p.base;
    let mut missing: Vec<String> =
        rich.missing_quantifier.iter().map(|a| format!("∃ over 𝐭×{}", cat.object_name(*a))).collect();
    missing.extend(
        rich.failures().map(|e| format!("{} over {}", p.fiber(e.object).name(e.element), cat.object_name(e.object))),
    );
    missing.extend(
        cat.objects()
            .filter(|a| cat.hom(cat.terminal(), *a).is_empty())
            .map(|a| format!("the carrier of {}", cat.object_name(a))),
    );
    missing.dedup();
    if !missing.is_empty() {
        return Err(ModelError::NotRich(missing));
    }
    let fiber = p.terminal_fiber();
    let filter = Filter::new(fiber, filter.members()).map_err(|e| ModelError::NotAFilter(e.to_string()))?;
    let class = classify_filter(fiber, &filter)?;
    if !class.proper {
        return Err(ModelError::Improper);
    }
    if !class.ultra {
        return Err(ModelError::NotUltra);
    }
    Ok(filter)
}

const MODEL_LAYERS: [Layer; 3] = [Layer::Bounded, Layer::Implicational, Layer::Existential];

/// Carriers `Hom(𝐭, X)`, actions by postcomposition, `interp(X, φ) = {c | P(c)φ ∈ ∇}`.
///
/// Requires `P` bounded, implicational, existential, consistent and rich, and `∇` a proper ultrafilter.
pub fn extract_model(p: &Arc<Doctrine>, filter: &Filter) -> Result<SubsetModel, ModelError> {
    let filter = preconditions(p, filter, &MODEL_LAYERS)?;
    Ok(plain_model(p, filter))
}

fn plain_model(p: &Arc<Doctrine>, filter: Filter) -> SubsetModel {
    let cat = &p.base;
    let t = cat.terminal();
    let homs: Vec<Vec<MorId>> = cat.objects().map(|x| cat.hom(t, x).to_vec()).collect();
    let position: HashMap<MorId, usize> =
        homs.iter().flat_map(|h| h.iter().enumerate().map(|(i, c)| (*c, i))).collect();
    let arrow_action = cat
        .morphisms()
        .map(|f| homs[cat.dom(f).index()].iter().map(|c| position[&cat.compose(f, *c).expect("composable")]).collect())
        .collect();
    let interp = cat
        .objects()
        .map(|x| {
            (0..p.fiber(x).len())
                .map(|phi| {
                    homs[x.index()]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| filter.contains(p.reindex_elem(**c, phi)))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect()
        })
        .collect();
    SubsetModel {
        mode: ModelMode::Plain,
        doctrine: p.clone(),
        filter,
        carriers: homs.iter().map(|h| h.iter().map(|c| cat.morphism_name(*c).to_string()).collect()).collect(),
        constants: homs.iter().map(|h| h.iter().map(|c| vec![*c]).collect()).collect(),
        arrow_action,
        interp,
    }
}

/// An `n×n` relation on the constants of one object.
struct Relation {
    n: usize,
    rel: Vec<bool>,
}

impl Relation {
    fn get(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.n + b]
    }
}

/// `c ∼ d` iff `P(⟨c,d⟩)δ_X ∈ ∇` when `X×X` carries `δ`; componentwise on declared
/// products of already settled factors; equality otherwise.
fn similarity(p: &Doctrine, plain: &SubsetModel) -> Result<Vec<Relation>, ModelError> {
    let cat = &p.base;
    let homs: Vec<&[MorId]> = cat.objects().map(|x| cat.hom(cat.terminal(), x)).collect();
    let mut out: Vec<Option<Relation>> = cat.objects().map(|_| None).collect();
    for (&x, &d) in &p.delta {
        let hx = homs[x.index()];
        let mut rel = Vec::with_capacity(hx.len() * hx.len());
        for c in hx {
            for e in hx {
                rel.push(plain.filter.contains(p.reindex_elem(cat.tuple(*c, *e)?, d)));
            }
        }
        out[x.index()] = Some(Relation { n: hx.len(), rel });
    }
    loop {
        let mut changed = false;
        for ((l, r), pr) in cat.products() {
            let z = pr.object;
            if out[z.index()].is_some() || l == z || r == z {
                continue;
            }
            let (Some(rl), Some(rr)) = (&out[l.index()], &out[r.index()]) else { continue };
            let (p1, p2) = (plain.action(pr.pr1), plain.action(pr.pr2));
            let n = p1.len();
            let rel = (0..n * n).map(|i| rl.get(p1[i / n], p1[i % n]) && rr.get(p2[i / n], p2[i % n])).collect();
            out[z.index()] = Some(Relation { n, rel });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(x, r)| {
            r.unwrap_or_else(|| {
                let n = homs[x].len();
                Relation { n, rel: (0..n * n).map(|i| i / n == i % n).collect() }
            })
        })
        .collect())
}

/// Checks that `∼` is an equivalence respected by arrows, products and `interp`.
fn check_descent(p: &Doctrine, plain: &SubsetModel, sim: &[Relation]) -> Result<(), ModelError> {
    let cat = &p.base;
    let fail = |msg: String| Err(ModelError::NotRespected(msg));
    for x in cat.objects() {
        let s = &sim[x.index()];
        let name = |i: usize| plain.carrier(x)[i].clone();
        for a in 0..s.n {
            if !s.get(a, a) {
                return fail(format!("{} ≁ itself", name(a)));
            }
            for b in 0..s.n {
                if s.get(a, b) != s.get(b, a) {
                    return fail(format!("{} ∼ {} is not symmetric", name(a), name(b)));
                }
                if !s.get(a, b) {
                    continue;
                }
                if let Some(c) = (0..s.n).find(|c| s.get(b, *c) && !s.get(a, *c)) {
                    return fail(format!("{} ∼ {} ∼ {} is not transitive", name(a), name(b), name(c)));
                }
                for phi in 0..p.fiber(x).len() {
                    if plain.interp(x, phi).contains(&a) != plain.interp(x, phi).contains(&b) {
                        return fail(format!("{} separates {} ∼ {}", p.fiber(x).name(phi), name(a), name(b)));
                    }
                }
            }
        }
    }
    for f in cat.morphisms() {
        let (s, t) = (&sim[cat.dom(f).index()], &sim[cat.cod(f).index()]);
        let act = plain.action(f);
        for a in 0..s.n {
            if let Some(b) = (0..s.n).find(|b| s.get(a, *b) && !t.get(act[a], act[*b])) {
                return fail(format!(
                    "{} does not respect {} ∼ {}",
                    cat.morphism_name(f),
                    plain.carrier(cat.dom(f))[a],
                    plain.carrier(cat.dom(f))[b]
                ));
            }
        }
    }
    for ((l, r), pr) in cat.products() {
        let (sz, sl, sr) = (&sim[pr.object.index()], &sim[l.index()], &sim[r.index()]);
        let (p1, p2) = (plain.action(pr.pr1), plain.action(pr.pr2));
        for a in 0..sz.n {
            for b in 0..sz.n {
                if sz.get(a, b) != (sl.get(p1[a], p1[b]) && sr.get(p2[a], p2[b])) {
                    return fail(format!(
                        "{}×{} does not descend at {} and {}",
                        cat.object_name(l),
                        cat.object_name(r),
                        plain.carrier(pr.object)[a],
                        plain.carrier(pr.object)[b]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Carriers `Hom(𝐭, X)/∼` with `c ∼ d` iff `P(⟨c,d⟩)δ_X ∈ ∇`.
///
/// Objects without a declared square take `∼` componentwise through a declared
/// product, or equality. `∼` is verified to be an equivalence that arrows,
/// products and `interp` respect before the carriers are collapsed.
pub fn extract_model_elementary(p: &Arc<Doctrine>, filter: &Filter) -> Result<SubsetModel, ModelError> {
    let mut layers = MODEL_LAYERS.to_vec();
    layers.push(Layer::Elementary);
    let filter = preconditions(p, filter, &layers)?;
    let plain = plain_model(p, filter);
    let sim = similarity(p, &plain)?;
    check_descent(p, &plain, &sim)?;
    let cat = &p.base;
    let mut class_of: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut constants = Vec::new();
    let mut carriers = Vec::new();
    for x in cat.objects() {
        let s = &sim[x.index()];
        let mut class = vec![usize::MAX; s.n];
        let mut rx = Vec::new();
        let mut members: Vec<Vec<MorId>> = Vec::new();
        for a in 0..s.n {
            if class[a] == usize::MAX {
                rx.push(a);
                members.push(Vec::new());
                for (b, slot) in class.iter_mut().enumerate().skip(a) {
                    if s.get(a, b) {
                        *slot = rx.len() - 1;
                    }
                }
            }
            members[class[a]].push(plain.constants[x.index()][a][0]);
        }
        carriers.push(rx.iter().map(|a| format!("[{}]", plain.carrier(x)[*a])).collect());
        constants.push(members);
        class_of.push(class);
        reps.push(rx);
    }
    let arrow_action = cat
        .morphisms()
        .map(|f| reps[cat.dom(f).index()].iter().map(|a| class_of[cat.cod(f).index()][plain.action(f)[*a]]).collect())
        .collect();
    let interp = cat
        .objects()
        .map(|x| {
            plain.interp[x.index()].iter().map(|set| set.iter().map(|a| class_of[x.index()][*a]).collect()).collect()
        })
        .collect();
    Ok(SubsetModel {
        mode: ModelMode::Elementary,
        doctrine: p.clone(),
        filter: plain.filter,
        carriers,
        constants,
        arrow_action,
        interp,
    })
}

/// The subsets doctrine over a model's carriers with the induced morphism `P/∇ → 𝒫`.
#[derive(Clone, Debug)]
pub struct ModelAdapter {
    pub sets: SetCategory,
    pub doctrine: Arc<Doctrine>,
    pub quotient: QuotientPresentation,
    /// `P/∇ → doctrine`: identity on objects, arrows to their actions, classes to their interpretations.
    pub morphism: DoctrineMorphism,
}

impl ModelAdapter {
    /// `P → P/∇ → 𝒫`.
    pub fn from_source(&self) -> Result<DoctrineMorphism, ModelError> {
        Ok(self.quotient.q.then(&self.morphism)?)
    }
}

fn build_adapter(m: &SubsetModel) -> Result<ModelAdapter, ModelError> {
    let p = &m.doctrine;
    let cat = &p.base;
    let objects: Vec<(String, Vec<String>)> =
        cat.objects().map(|a| (cat.object_name(a).to_string(), m.carrier(a).to_vec())).collect();
    let mut index: HashMap<(usize, usize, Vec<usize>), MorId> = HashMap::new();
    let mut listed = Vec::new();
    let mut mor_map = Vec::new();
    for f in cat.morphisms() {
        let key = (cat.dom(f).index(), cat.cod(f).index(), m.action(f).to_vec());
        let next = MorId::new(index.len());
        let id = *index.entry(key.clone()).or_insert_with(|| {
            listed.push(key);
            next
        });
        mor_map.push(id);
    }
    let products: Vec<SetProduct> = cat
        .products()
        .map(|((l, r), pr)| SetProduct {
            left: l.index(),
            right: r.index(),
            object: pr.object.index(),
            pr1: m.action(pr.pr1).to_vec(),
            pr2: m.action(pr.pr2).to_vec(),
        })
        .collect();
    let sets = build_set_category(&objects, cat.terminal().index(), Functions::Listed(listed), &products)?;
    let doctrine = Arc::new(subset_doctrine_over(&sets, format!("𝒫[{}]", p.name))?);
    let quotient = quotient_by_filter(p, &m.filter)?;
    let components = cat
        .objects()
        .map(|a| {
            let reps = &quotient.representatives[a.index()];
            MonotoneMap::new(reps.iter().map(|x| m.interp(a, *x).iter().map(|i| 1usize << i).sum()).collect())
        })
        .collect();
    let morphism = DoctrineMorphism {
        src: quotient.result.clone(),
        dst: doctrine.clone(),
        obj_map: cat.objects().collect(),
        mor_map,
        components,
    };
    Ok(ModelAdapter { sets, doctrine, quotient, morphism })
}
