//! The JSON document format.
//!
//! Objects, morphisms and fiber elements carry names for display; every table
//! refers to them by position. Lattice operations may be given as the keyword
//! `"derive"`, which asks the parser to compute them from the order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::doctrine::{Doctrine, Layer};
use crate::fincat::{CategoryBuilder, MorId, ObjId, Product};
use crate::order::{derive_lattice_ops, Fiber, FinPoset, LatticeOps, MonotoneMap};

use super::IoError;

/// Top-level document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoctrineDocument {
    pub meta: Meta,
    pub category: CategoryDoc,
    /// One entry per object, in object order.
    pub fibers: Vec<FiberDoc>,
    /// One entry per morphism: the image of each element of the codomain fiber.
    pub reindex: Vec<Vec<usize>>,
    pub structure: StructureDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    /// Identity morphism per object.
    pub identities: Vec<usize>,
    /// Triples `[g, f, h]` meaning `g ∘ f = h`.
    pub composition: Vec<[usize; 3]>,
    pub terminal: usize,
    /// Unique map to the terminal object, per object.
    pub bangs: Vec<usize>,
    pub products: Vec<ProductDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: usize,
    pub right: usize,
    pub object: usize,
    pub pr1: usize,
    pub pr2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub elements: Vec<String>,
    /// Pairs `[a, b]` with `a ≤ b`; the order is their reflexive-transitive closure.
    pub leq: Vec<[usize; 2]>,
}

/// A table, or the keyword `"derive"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Op<T> {
    Table(T),
    Keyword(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<Op<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<Op<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Op<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Op<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imp: Option<Op<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDoc {
    pub object: usize,
    pub element: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantifierDoc {
    pub context: usize,
    pub sort: usize,
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub layers: Vec<String>,
    /// One entry per object; missing entries mean no operations.
    #[serde(default)]
    pub ops: Vec<OpsDoc>,
    #[serde(default)]
    pub delta: Vec<DeltaDoc>,
    #[serde(default)]
    pub exists: Vec<QuantifierDoc>,
    #[serde(default)]
    pub forall: Vec<QuantifierDoc>,
}

fn dangling(what: impl Into<String>) -> IoError {
    IoError::Dangling(what.into())
}

fn check_index(i: usize, len: usize, what: impl FnOnce() -> String) -> Result<usize, IoError> {
    if i < len {
        Ok(i)
    } else {
        Err(dangling(what()))
    }
}

impl DoctrineDocument {
    /// The normalized document of a doctrine: every table explicit, sorted, no `derive`.
    pub fn from_doctrine(d: &Doctrine) -> Self {
        let cat = &d.base;
        let category = CategoryDoc {
            objects: cat.objects().map(|a| cat.object_name(a).to_string()).collect(),
            morphisms: cat
                .morphisms()
                .map(|f| MorphismDoc {
                    name: cat.morphism_name(f).to_string(),
                    dom: cat.dom(f).index(),
                    cod: cat.cod(f).index(),
                })
                .collect(),
            identities: cat.objects().map(|a| cat.identity(a).index()).collect(),
            composition: {
                let mut triples: Vec<[usize; 3]> =
                    cat.composition_triples().into_iter().map(|(g, f, h)| [g.index(), f.index(), h.index()]).collect();
                triples.sort_unstable();
                triples
            },
            terminal: cat.terminal().index(),
            bangs: cat.objects().map(|a| cat.bang(a).index()).collect(),
            products: cat
                .products()
                .map(|((l, r), p)| ProductDoc {
                    left: l.index(),
                    right: r.index(),
                    object: p.object.index(),
                    pr1: p.pr1.index(),
                    pr2: p.pr2.index(),
                })
                .collect(),
        };
        let fibers = d
            .fibers
            .iter()
            .map(|f| FiberDoc {
                elements: f.poset.names().to_vec(),
                leq: f.poset.leq_pairs().into_iter().filter(|(a, b)| a != b).map(|(a, b)| [a, b]).collect(),
            })
            .collect();
        let ops = d
            .fibers
            .iter()
            .map(|f| OpsDoc {
                top: f.ops.top.map(Op::Table),
                bottom: f.ops.bottom.map(Op::Table),
                meet: f.ops.meet.clone().map(Op::Table),
                join: f.ops.join.clone().map(Op::Table),
                imp: f.ops.imp.clone().map(Op::Table),
            })
            .collect();
        let quantifiers = |tables: &std::collections::BTreeMap<(ObjId, ObjId), MonotoneMap>| {
            tables
                .iter()
                .map(|((c, b), m)| QuantifierDoc { context: c.index(), sort: b.index(), table: m.table.clone() })
                .collect()
        };
        DoctrineDocument {
            meta: Meta { name: d.name.clone(), note: String::new() },
            category,
            fibers,
            reindex: d.reindex.iter().map(|m| m.table.clone()).collect(),
            structure: StructureDoc {
                layers: d.layers.iter().map(|l| l.name().to_string()).collect(),
                ops,
                delta: d.delta.iter().map(|(a, e)| DeltaDoc { object: a.index(), element: *e }).collect(),
                exists: quantifiers(&d.exists),
                forall: quantifiers(&d.forall),
            },
        }
    }

    /// Builds the doctrine, resolving `derive` and checking every reference and witness.
    pub fn to_doctrine(&self) -> Result<Doctrine, IoError> {
        let c = &self.category;
        let n_obj = c.objects.len();
        let n_mor = c.morphisms.len();
        let obj = |i: usize, ctx: &str| {
            check_index(i, n_obj, || format!("{ctx} refers to object {i}, which is not declared"))
        };
        let mor = |i: usize, ctx: &str| {
            check_index(i, n_mor, || format!("{ctx} refers to morphism {i}, which is not declared"))
        };

        let mut b = CategoryBuilder::new();
        for name in &c.objects {
            b.object(name.clone());
        }
        for (i, m) in c.morphisms.iter().enumerate() {
            let ctx = format!("morphism {i} (`{}`)", m.name);
            b.morphism(m.name.clone(), ObjId::new(obj(m.dom, &ctx)?), ObjId::new(obj(m.cod, &ctx)?));
        }
        if c.identities.len() != n_obj || c.bangs.len() != n_obj {
            return Err(IoError::Shape("identities and bangs need one entry per object".into()));
        }
        for a in 0..n_obj {
            b.identity(ObjId::new(a), MorId::new(mor(c.identities[a], "identity table")?));
            b.bang(ObjId::new(a), MorId::new(mor(c.bangs[a], "bang table")?));
        }
        for (i, [g, f, h]) in c.composition.iter().enumerate() {
            let ctx = format!("composition triple {i}");
            b.composite(MorId::new(mor(*g, &ctx)?), MorId::new(mor(*f, &ctx)?), MorId::new(mor(*h, &ctx)?));
        }
        b.terminal(ObjId::new(obj(c.terminal, "terminal")?));
        for (i, p) in c.products.iter().enumerate() {
            let ctx = format!("product {i}");
            b.product(
                ObjId::new(obj(p.left, &ctx)?),
                ObjId::new(obj(p.right, &ctx)?),
                Product {
                    object: ObjId::new(obj(p.object, &ctx)?),
                    pr1: MorId::new(mor(p.pr1, &ctx)?),
                    pr2: MorId::new(mor(p.pr2, &ctx)?),
                },
            );
        }
        let base = b.build()?;

        if self.fibers.len() != n_obj {
            return Err(IoError::Shape(format!("{} fibers for {n_obj} objects", self.fibers.len())));
        }
        let s = &self.structure;
        if s.ops.len() > n_obj {
            return Err(IoError::Shape(format!("{} operation entries for {n_obj} objects", s.ops.len())));
        }
        let empty = OpsDoc::default();
        let mut fibers = Vec::with_capacity(n_obj);
        for (a, fd) in self.fibers.iter().enumerate() {
            let n = fd.elements.len();
            for [x, y] in &fd.leq {
                for e in [x, y] {
                    check_index(*e, n, || format!("order of the fiber over `{}` refers to element {e}", c.objects[a]))?;
                }
            }
            let pairs: Vec<(usize, usize)> = fd.leq.iter().map(|[x, y]| (*x, *y)).collect();
            let poset = FinPoset::from_pairs(fd.elements.clone(), &pairs)?;
            let derived = derive_lattice_ops(&poset);
            let od = s.ops.get(a).unwrap_or(&empty);
            let fiber_name = &c.objects[a];
            let resolve =
                |op: &Option<Op<usize>>, name: &'static str, d: Option<usize>| -> Result<Option<usize>, IoError> {
                    match op {
                        None => Ok(None),
                        Some(Op::Table(x)) => Ok(Some(*x)),
                        Some(Op::Keyword(k)) if k == "derive" => {
                            d.map(Some).ok_or_else(|| IoError::Derive { object: fiber_name.clone(), op: name })
                        }
                        Some(Op::Keyword(k)) => Err(IoError::Shape(format!("unknown keyword `{k}` for {name}"))),
                    }
                };
            let resolve2 = |op: &Option<Op<Vec<usize>>>,
                            name: &'static str,
                            d: &Option<Vec<usize>>|
             -> Result<Option<Vec<usize>>, IoError> {
                match op {
                    None => Ok(None),
                    Some(Op::Table(t)) => Ok(Some(t.clone())),
                    Some(Op::Keyword(k)) if k == "derive" => {
                        d.clone().map(Some).ok_or_else(|| IoError::Derive { object: fiber_name.clone(), op: name })
                    }
                    Some(Op::Keyword(k)) => Err(IoError::Shape(format!("unknown keyword `{k}` for {name}"))),
                }
            };
            let ops = LatticeOps {
                top: resolve(&od.top, "top", derived.top)?,
                bottom: resolve(&od.bottom, "bottom", derived.bottom)?,
                meet: resolve2(&od.meet, "meet", &derived.meet)?,
                join: resolve2(&od.join, "join", &derived.join)?,
                imp: resolve2(&od.imp, "imp", &derived.imp)?,
            };
            fibers.push(Fiber::new(poset, ops));
        }
        if self.reindex.len() != n_mor {
            return Err(IoError::Shape(format!("{} reindexing tables for {n_mor} morphisms", self.reindex.len())));
        }
        let reindex = self.reindex.iter().map(|t| MonotoneMap::new(t.clone())).collect();
        let mut delta = std::collections::BTreeMap::new();
        for dd in &s.delta {
            delta.insert(ObjId::new(obj(dd.object, "δ")?), dd.element);
        }
        let quantifiers = |list: &[QuantifierDoc], what: &str| {
            let mut out = std::collections::BTreeMap::new();
            for q in list {
                let key = (ObjId::new(obj(q.context, what)?), ObjId::new(obj(q.sort, what)?));
                out.insert(key, MonotoneMap::new(q.table.clone()));
            }
            Ok::<_, IoError>(out)
        };
        let exists = quantifiers(&s.exists, "∃ table")?;
        let forall = quantifiers(&s.forall, "∀ table")?;
        let layers = s.layers.iter().map(|l| l.parse::<Layer>()).collect::<Result<BTreeSet<_>, _>>()?;
        let d = Doctrine::new(self.meta.name.clone(), base, fibers, reindex, delta, exists, forall, layers)?;
        d.check_witnesses()?;
        Ok(d)
    }
}

/// Parses a document; syntax errors carry line and column.
pub fn parse_document(text: &str) -> Result<DoctrineDocument, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses a document and builds its doctrine. No laws are checked.
pub fn parse_doctrine(text: &str) -> Result<Doctrine, IoError> {
    parse_document(text)?.to_doctrine()
}

/// Compact JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // `serde_json::Value` keeps object keys in a BTreeMap, so going through it sorts them.
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut out = serde_json::to_string(&v).expect("values serialize");
    out.push('\n');
    out
}

/// The normalized document text of a doctrine; byte-stable.
pub fn serialize_doctrine(d: &Doctrine) -> String {
    to_canonical_json(&DoctrineDocument::from_doctrine(d))
}
