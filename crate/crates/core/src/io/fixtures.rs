//! Generators for the doctrines used throughout the tests and examples.

use std::collections::{BTreeMap, BTreeSet};

use crate::doctrine::{Doctrine, Layer};
use crate::fincat::sets::{build_set_category, Functions, SetCategory, SetProduct};
use crate::fincat::{CategoryBuilder, FinCategory, ObjId, Product};
use crate::order::{Fiber, FinPoset, LatticeOps, MonotoneMap};

use super::IoError;

/// Options for [`gen_subset_doctrine_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetOptions {
    /// Admit an empty carrier. Richness then fails at it: there is no arrow `𝐭 → ∅`.
    pub allow_empty: bool,
    /// Upper bound on the number of functions in the base.
    pub max_morphisms: usize,
}

impl Default for SubsetOptions {
    fn default() -> Self {
        SubsetOptions { allow_empty: false, max_morphisms: 20_000 }
    }
}

fn subset_name(labels: &[String], mask: usize) -> String {
    let members: Vec<&str> =
        labels.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l.as_str()).collect();
    format!("{{{}}}", members.join(","))
}

fn carrier_name(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// The powerset doctrine on the given carriers.
///
/// Singleton carriers are identified with the terminal object `1`, products
/// with `1` are the other factor, and every product of two listed non-singleton
/// carriers is added (`B×A` shares the object of `A×B` with swapped projections).
/// All functions between the resulting sets are morphisms.
pub fn gen_subset_doctrine(carriers: &[Vec<String>]) -> Result<Doctrine, IoError> {
    gen_subset_doctrine_with(carriers, SubsetOptions::default())
}

pub fn gen_subset_doctrine_with(carriers: &[Vec<String>], options: SubsetOptions) -> Result<Doctrine, IoError> {
    let mut listed: Vec<Vec<String>> = Vec::new();
    let mut has_empty = false;
    for c in carriers {
        if c.is_empty() {
            if !options.allow_empty {
                return Err(IoError::EmptyCarrier);
            }
            has_empty = true;
        } else if c.len() > 1 && !listed.contains(c) {
            if c.iter().collect::<BTreeSet<_>>().len() != c.len() {
                return Err(IoError::Shape(format!("carrier {} repeats a label", carrier_name(c))));
            }
            listed.push(c.clone());
        }
    }

    // Objects: 1, listed carriers, optional ∅, then pairwise products.
    let mut objects: Vec<(String, Vec<String>)> = vec![("1".into(), vec!["*".into()])];
    let base_index: Vec<usize> = listed
        .iter()
        .map(|c| {
            objects.push((carrier_name(c), c.clone()));
            objects.len() - 1
        })
        .collect();
    let empty = has_empty.then(|| {
        objects.push(("{}".into(), Vec::new()));
        objects.len() - 1
    });
    let mut products = Vec::new();
    let identity = |n: usize| (0..n).collect::<Vec<_>>();
    for (o, (_, carrier)) in objects.iter().enumerate() {
        let n = carrier.len();
        products.push(SetProduct { left: 0, right: o, object: o, pr1: vec![0; n], pr2: identity(n) });
        if o != 0 {
            products.push(SetProduct { left: o, right: 0, object: o, pr1: identity(n), pr2: vec![0; n] });
        }
    }
    if let Some(e) = empty {
        products.push(SetProduct { left: e, right: e, object: e, pr1: Vec::new(), pr2: Vec::new() });
    }
    let mut pair_objects: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, &a) in base_index.iter().enumerate() {
        for &b in &base_index[i..] {
            let (na, nb) = (objects[a].1.len(), objects[b].1.len());
            let labels: Vec<String> =
                (0..na * nb).map(|z| format!("({},{})", objects[a].1[z / nb], objects[b].1[z % nb])).collect();
            objects.push((format!("{}×{}", objects[a].0, objects[b].0), labels));
            let z = objects.len() - 1;
            pair_objects.insert((a, b), z);
            let first: Vec<usize> = (0..na * nb).map(|z| z / nb).collect();
            let second: Vec<usize> = (0..na * nb).map(|z| z % nb).collect();
            products.push(SetProduct { left: a, right: b, object: z, pr1: first.clone(), pr2: second.clone() });
            if a != b {
                products.push(SetProduct { left: b, right: a, object: z, pr1: second, pr2: first });
            }
            products.push(SetProduct { left: 0, right: z, object: z, pr1: vec![0; na * nb], pr2: identity(na * nb) });
            products.push(SetProduct { left: z, right: 0, object: z, pr1: identity(na * nb), pr2: vec![0; na * nb] });
        }
    }
    let sets = build_set_category(&objects, 0, Functions::All { max_morphisms: options.max_morphisms }, &products)?;
    let name = format!("subsets[{}]", carriers.iter().map(|c| carrier_name(c)).collect::<Vec<_>>().join(","));
    subset_doctrine_over(&sets, name)
}

/// Largest carrier whose powerset is tabulated.
pub const MAX_POWERSET_CARRIER: usize = 8;

/// The powerset of `labels` ordered by inclusion; element `m` is the subset with bitmask `m`.
pub fn powerset_fiber(labels: &[String]) -> Result<Fiber, IoError> {
    if labels.len() > MAX_POWERSET_CARRIER {
        return Err(IoError::Shape(format!(
            "a carrier of {} elements exceeds the powerset limit {MAX_POWERSET_CARRIER}",
            labels.len()
        )));
    }
    let n = 1usize << labels.len();
    let full = n - 1;
    let names = (0..n).map(|m| subset_name(labels, m)).collect();
    let leq = (0..n).flat_map(|a| (0..n).map(move |b| a & !b == 0)).collect();
    let table = |op: fn(usize, usize, usize) -> usize| (0..n * n).map(|i| op(i / n, i % n, full)).collect();
    let ops = LatticeOps {
        top: Some(full),
        bottom: Some(0),
        meet: Some(table(|a, b, _| a & b)),
        join: Some(table(|a, b, _| a | b)),
        imp: Some(table(|a, b, full| (!a | b) & full)),
    };
    Ok(Fiber::new(FinPoset::new(names, leq)?, ops))
}

/// The powerset doctrine over a category of finite sets: preimage reindexing,
/// images and co-images along the declared first projections, and the diagonal
/// of every declared square as `δ`. Every layer is declared.
pub fn subset_doctrine_over(sets: &SetCategory, name: impl Into<String>) -> Result<Doctrine, IoError> {
    let cat = &sets.category;
    let fibers: Vec<Fiber> = sets.carriers.iter().map(|labels| powerset_fiber(labels)).collect::<Result<_, _>>()?;
    let reindex = cat
        .morphisms()
        .map(|f| {
            let t = sets.table(f);
            let n = 1usize << sets.size(cat.cod(f));
            MonotoneMap::new(
                (0..n)
                    .map(|s| t.iter().enumerate().filter(|(_, y)| s >> **y & 1 == 1).map(|(i, _)| 1 << i).sum())
                    .collect(),
            )
        })
        .collect();
    let mut delta = BTreeMap::new();
    let mut exists = BTreeMap::new();
    let mut forall = BTreeMap::new();
    for ((l, r), p) in cat.products() {
        let (p1, p2) = (sets.table(p.pr1), sets.table(p.pr2));
        let nz = sets.size(p.object);
        let nc = sets.size(l);
        if l == r {
            delta.insert(l, (0..nz).filter(|z| p1[*z] == p2[*z]).map(|z| 1usize << z).sum());
        }
        let ex =
            (0..1usize << nz).map(|s| (0..nz).filter(|z| s >> z & 1 == 1).fold(0, |acc, z| acc | 1 << p1[z])).collect();
        let all = (0..1usize << nz)
            .map(|s| (0..nc).filter(|c| (0..nz).all(|z| p1[z] != *c || s >> z & 1 == 1)).map(|c| 1usize << c).sum())
            .collect();
        exists.insert((l, r), MonotoneMap::new(ex));
        forall.insert((l, r), MonotoneMap::new(all));
    }
    let layers = Layer::ALL.into_iter().collect();
    Ok(Doctrine::new(name, cat.clone(), fibers, reindex, delta, exists, forall, layers)?)
}

/// The subsets doctrine on `{∗}` and `{0,1}`: objects `1`, `{0,1}` and `{0,1}×{0,1}`.
pub fn subsets_fixture() -> Doctrine {
    gen_subset_doctrine(&[vec!["*".into()], vec!["0".into(), "1".into()]]).expect("fixed carriers")
}

/// Base `1 ≅ X`, the same fiber over both, every reindexing and quantifier the identity and `δ = ⊤`.
fn point_fixture(
    name: &str,
    other: &str,
    fiber: Fiber,
    has_point: bool,
    layers: &[Layer],
) -> Result<Doctrine, IoError> {
    let mut b = CategoryBuilder::new();
    let t = b.object("1");
    let x = b.object(other);
    let id_t = b.morphism("id_1", t, t);
    let id_x = b.morphism(format!("id_{other}"), x, x);
    let bang = b.morphism(format!("!{other}"), x, t);
    b.identity(t, id_t).identity(x, id_x).terminal(t).bang(t, id_t).bang(x, bang);
    for (g, f, h) in [(id_t, id_t, id_t), (id_x, id_x, id_x), (bang, id_x, bang), (id_t, bang, bang)] {
        b.composite(g, f, h);
    }
    if has_point {
        let point = b.morphism(format!("{}0", other.to_lowercase()), t, x);
        for (g, f, h) in [(point, id_t, point), (id_x, point, point), (point, bang, id_x), (bang, point, id_t)] {
            b.composite(g, f, h);
        }
    }
    b.product(t, t, Product { object: t, pr1: id_t, pr2: id_t });
    b.product(t, x, Product { object: x, pr1: bang, pr2: id_x });
    b.product(x, t, Product { object: x, pr1: id_x, pr2: bang });
    b.product(x, x, Product { object: x, pr1: id_x, pr2: id_x });
    let cat: FinCategory = b.build()?;
    let n = fiber.len();
    let top = fiber.top()?;
    let reindex = cat.morphisms().map(|_| MonotoneMap::identity(n)).collect();
    let delta = [(t, top), (x, top)].into_iter().collect();
    let quantifiers: BTreeMap<(ObjId, ObjId), MonotoneMap> =
        cat.products().map(|(k, _)| (k, MonotoneMap::identity(n))).collect();
    Ok(Doctrine::new(
        name,
        cat,
        vec![fiber.clone(), fiber],
        reindex,
        delta,
        quantifiers.clone(),
        quantifiers,
        layers.iter().copied().collect(),
    )?)
}

const NON_BOOLEAN: [Layer; 9] = [
    Layer::Functorial,
    Layer::Primary,
    Layer::Bounded,
    Layer::Implicational,
    Layer::Joins,
    Layer::Heyting,
    Layer::Elementary,
    Layer::Existential,
    Layer::Universal,
];

/// The three-element chain `0 < ½ < 1` over `1 ≅ X`: Heyting, not Boolean.
pub fn gen_chain_fixture() -> Doctrine {
    let fiber = Fiber::derived(FinPoset::chain(vec!["0".into(), "½".into(), "1".into()]));
    point_fixture("chain", "X", fiber, true, &NON_BOOLEAN).expect("fixed chain")
}

/// The Boolean cube `𝒫({a,b,c})` over `1 ≅ X`.
pub fn boolean_cube_fixture() -> Doctrine {
    let labels: Vec<String> = ["a", "b", "c"].into_iter().map(String::from).collect();
    let names = (0..8).map(|m| subset_name(&labels, m)).collect();
    let leq = (0..8usize).flat_map(|a| (0..8usize).map(move |b| a & !b == 0)).collect();
    let fiber = Fiber::derived(FinPoset::new(names, leq).expect("inclusion order"));
    point_fixture("cube", "X", fiber, true, &Layer::ALL).expect("fixed cube")
}

/// A two-valued Boolean doctrine with a sort `U` that has no constant, so it is not rich.
pub fn subterminal_fixture() -> Doctrine {
    let fiber = Fiber::derived(FinPoset::chain(vec!["0".into(), "1".into()]));
    point_fixture("subterminal", "U", fiber, false, &Layer::ALL).expect("fixed subterminal")
}

/// One object, one element: the inconsistent doctrine.
pub fn trivial_fixture() -> Doctrine {
    let mut b = CategoryBuilder::new();
    let t = b.object("1");
    let id = b.morphism("id_1", t, t);
    b.identity(t, id).terminal(t).bang(t, id).composite(id, id, id);
    b.product(t, t, Product { object: t, pr1: id, pr2: id });
    let cat = b.build().expect("one object");
    let fiber = Fiber::derived(FinPoset::chain(vec!["⊤".into()]));
    let table = MonotoneMap::identity(1);
    let quantifiers: BTreeMap<_, _> = [((t, t), table.clone())].into_iter().collect();
    Doctrine::new(
        "trivial",
        cat,
        vec![fiber],
        vec![table],
        [(t, 0)].into_iter().collect(),
        quantifiers.clone(),
        quantifiers,
        Layer::ALL.into_iter().collect(),
    )
    .expect("trivial doctrine")
}

/// Every named fixture, in a fixed order.
pub fn named_fixtures() -> Vec<(&'static str, Doctrine)> {
    vec![
        ("trivial", trivial_fixture()),
        ("point", gen_subset_doctrine(&[vec!["*".into()]]).expect("one carrier")),
        ("subsets", subsets_fixture()),
        ("chain", gen_chain_fixture()),
        ("cube", boolean_cube_fixture()),
        ("subterminal", subterminal_fixture()),
    ]
}

/// Looks up a fixture by name.
pub fn fixture(name: &str) -> Option<Doctrine> {
    match name {
        "trivial" => Some(trivial_fixture()),
        "point" => gen_subset_doctrine(&[vec!["*".into()]]).ok(),
        "subsets" => Some(subsets_fixture()),
        "chain" => Some(gen_chain_fixture()),
        "cube" => Some(boolean_cube_fixture()),
        "subterminal" => Some(subterminal_fixture()),
        _ => None,
    }
}
