//! Doctrines over finite bases: fibers, reindexing, structure witnesses, law
//! checkers, morphisms, 2-cells and the semantic predicates (richness,
//! consistency, ε-operators).

mod laws;
mod morphism;
mod mutation;
mod semantics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fincat::{CategoryError, Embedding, FinCategory, MorId, ObjId};
use crate::order::{Fiber, MonotoneMap, OrderError};

pub use laws::{check_structure, Counterexample, Law, LayerReport, StructureReport};
pub use morphism::{
    check_2cell, check_morphism, is_isomorphism, DoctrineMorphism, MorphismCheck, MorphismLaw, MorphismViolation,
    ProductPreservation, TwoCell, TwoCellViolation,
};
pub(crate) use morphism::{inverse, same_doctrine};
pub use mutation::{single_table_mutations, Mutation, MutationSite};
pub(crate) use semantics::exists_to_terminal;
pub use semantics::{
    check_epsilon_operator, check_rich, check_rich_for, consistency_status, Consistency, ConsistencyReport,
    EpsilonEntry, EpsilonReport, RichEntry, RichReport,
};

/// A structure layer a doctrine may declare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Functorial,
    Primary,
    Bounded,
    Implicational,
    Joins,
    Heyting,
    Boolean,
    Elementary,
    Existential,
    Universal,
}

impl Layer {
    pub const ALL: [Layer; 10] = [
        Layer::Functorial,
        Layer::Primary,
        Layer::Bounded,
        Layer::Implicational,
        Layer::Joins,
        Layer::Heyting,
        Layer::Boolean,
        Layer::Elementary,
        Layer::Existential,
        Layer::Universal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Functorial => "functorial",
            Layer::Primary => "primary",
            Layer::Bounded => "bounded",
            Layer::Implicational => "implicational",
            Layer::Joins => "joins",
            Layer::Heyting => "heyting",
            Layer::Boolean => "boolean",
            Layer::Elementary => "elementary",
            Layer::Existential => "existential",
            Layer::Universal => "universal",
        }
    }

    /// Layers whose laws this layer presupposes.
    pub fn prerequisites(self) -> &'static [Layer] {
        match self {
            Layer::Functorial => &[],
            Layer::Primary | Layer::Bounded | Layer::Joins | Layer::Universal => &[Layer::Functorial],
            Layer::Implicational | Layer::Elementary | Layer::Existential => &[Layer::Primary],
            Layer::Heyting => &[Layer::Implicational, Layer::Joins, Layer::Bounded],
            Layer::Boolean => &[Layer::Heyting],
        }
    }

    /// `layers` together with all their prerequisites.
    pub fn closure(layers: impl IntoIterator<Item = Layer>) -> BTreeSet<Layer> {
        let mut out = BTreeSet::new();
        let mut todo: Vec<Layer> = layers.into_iter().collect();
        while let Some(l) = todo.pop() {
            if out.insert(l) {
                todo.extend_from_slice(l.prerequisites());
            }
        }
        out
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layer {
    type Err = DoctrineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Layer::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| DoctrineError::UnknownLayer(s.to_string()))
    }
}

/// Structural problems: malformed tables or missing witnesses. Law failures are counterexamples instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DoctrineError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("layer `{layer}` is missing its witness: {what}")]
    MissingWitness { layer: Layer, what: String },
    #[error("unknown layer `{0}`")]
    UnknownLayer(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown element `{element}` in the fiber over `{object}`")]
    UnknownElement { object: String, element: String },
    #[error("morphism endpoints do not match: {0}")]
    Mismatch(String),
    #[error("replay data does not fit this doctrine: {0}")]
    BadReplay(String),
}

/// A functor from a finite base category to finite posets, with optional structure witnesses.
///
/// `reindex[f]` maps the fiber over `cod f` to the fiber over `dom f`.
/// `exists[(C, B)]` and `forall[(C, B)]` map the fiber over the chosen `C×B` to the fiber over `C`.
/// `delta[A]` is an element of the fiber over the chosen `A×A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Doctrine {
    pub name: String,
    pub base: FinCategory,
    pub fibers: Vec<Fiber>,
    pub reindex: Vec<MonotoneMap>,
    pub delta: BTreeMap<ObjId, usize>,
    pub exists: BTreeMap<(ObjId, ObjId), MonotoneMap>,
    pub forall: BTreeMap<(ObjId, ObjId), MonotoneMap>,
    pub layers: BTreeSet<Layer>,
}

impl Doctrine {
    /// Assembles a doctrine after checking table shapes (no laws).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        base: FinCategory,
        fibers: Vec<Fiber>,
        reindex: Vec<MonotoneMap>,
        delta: BTreeMap<ObjId, usize>,
        exists: BTreeMap<(ObjId, ObjId), MonotoneMap>,
        forall: BTreeMap<(ObjId, ObjId), MonotoneMap>,
        layers: BTreeSet<Layer>,
    ) -> Result<Self, DoctrineError> {
        let d = Doctrine { name: name.into(), base, fibers, reindex, delta, exists, forall, layers };
        d.check_shape()?;
        Ok(d)
    }

    /// Checks that every table has the right size and stays in range.
    pub fn check_shape(&self) -> Result<(), DoctrineError> {
        let cat = &self.base;
        if self.fibers.len() != cat.object_count() {
            return Err(DoctrineError::Shape(format!(
                "{} fibers for {} objects",
                self.fibers.len(),
                cat.object_count()
            )));
        }
        if self.reindex.len() != cat.morphism_count() {
            return Err(DoctrineError::Shape(format!(
                "{} reindexing maps for {} morphisms",
                self.reindex.len(),
                cat.morphism_count()
            )));
        }
        for (a, fiber) in self.fibers.iter().enumerate() {
            if !fiber.ops_in_range() {
                return Err(DoctrineError::Shape(format!(
                    "lattice tables over `{}` are out of range",
                    cat.object_name(ObjId::new(a))
                )));
            }
        }
        let check_map = |what: String, map: &MonotoneMap, from: ObjId, to: ObjId| {
            let (src, dst) = (self.fiber(from).len(), self.fiber(to).len());
            if map.len() != src || map.table.iter().any(|x| *x >= dst) {
                Err(DoctrineError::Shape(what))
            } else {
                Ok(())
            }
        };
        for f in cat.morphisms() {
            check_map(
                format!("reindexing along `{}`", cat.morphism_name(f)),
                &self.reindex[f.index()],
                cat.cod(f),
                cat.dom(f),
            )?;
        }
        for (&a, &e) in &self.delta {
            let p = cat.product(a, a).ok_or_else(|| {
                DoctrineError::Shape(format!("δ over `{}` without a chosen square", cat.object_name(a)))
            })?;
            if e >= self.fiber(p.object).len() {
                return Err(DoctrineError::Shape(format!("δ over `{}` is out of range", cat.object_name(a))));
            }
        }
        for (label, tables) in [("∃", &self.exists), ("∀", &self.forall)] {
            for (&(c, b), map) in tables {
                let p = cat.product(c, b).ok_or_else(|| {
                    DoctrineError::Shape(format!(
                        "{label} over ({}, {}) without a chosen product",
                        cat.object_name(c),
                        cat.object_name(b)
                    ))
                })?;
                check_map(format!("{label} over ({}, {})", cat.object_name(c), cat.object_name(b)), map, p.object, c)?;
            }
        }
        Ok(())
    }

    pub fn fiber(&self, a: ObjId) -> &Fiber {
        &self.fibers[a.index()]
    }

    pub fn terminal_fiber(&self) -> &Fiber {
        self.fiber(self.base.terminal())
    }

    /// `P(f)(a)`.
    pub fn reindex_elem(&self, f: MorId, a: usize) -> usize {
        self.reindex[f.index()].apply(a)
    }

    pub fn object(&self, name: &str) -> Result<ObjId, DoctrineError> {
        self.base.find_object(name).ok_or_else(|| DoctrineError::UnknownObject(name.to_string()))
    }

    pub fn element(&self, a: ObjId, name: &str) -> Result<usize, DoctrineError> {
        self.fiber(a).poset.find(name).ok_or_else(|| DoctrineError::UnknownElement {
            object: self.base.object_name(a).to_string(),
            element: name.to_string(),
        })
    }

    pub fn declares(&self, layer: Layer) -> bool {
        self.layers.contains(&layer)
    }

    /// Checks that every declared layer has its witness tables, without checking laws.
    pub fn check_witnesses(&self) -> Result<(), DoctrineError> {
        let cat = &self.base;
        let need = |layer: Layer, ok: bool, what: String| {
            if ok {
                Ok(())
            } else {
                Err(DoctrineError::MissingWitness { layer, what })
            }
        };
        for layer in Layer::closure(self.layers.iter().copied()) {
            for a in cat.objects() {
                let ops = &self.fiber(a).ops;
                let over = |op: &str| format!("{op} over `{}`", cat.object_name(a));
                match layer {
                    Layer::Primary => {
                        need(layer, ops.top.is_some(), over("top"))?;
                        need(layer, ops.meet.is_some(), over("meet"))?;
                    }
                    Layer::Bounded => {
                        need(layer, ops.top.is_some(), over("top"))?;
                        need(layer, ops.bottom.is_some(), over("bottom"))?;
                    }
                    Layer::Implicational => need(layer, ops.imp.is_some(), over("implication"))?,
                    Layer::Joins => need(layer, ops.join.is_some(), over("join"))?,
                    Layer::Elementary if cat.product(a, a).is_some() => {
                        need(layer, self.delta.contains_key(&a), over("δ"))?;
                    }
                    _ => {}
                }
            }
            for ((l, r), _) in cat.products() {
                let pair = || format!("over `{}`×`{}`", cat.object_name(l), cat.object_name(r));
                match layer {
                    Layer::Existential => need(layer, self.exists.contains_key(&(l, r)), format!("∃ {}", pair()))?,
                    Layer::Universal => need(layer, self.forall.contains_key(&(l, r)), format!("∀ {}", pair()))?,
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Total number of fiber elements.
    pub fn element_count(&self) -> usize {
        self.fibers.iter().map(Fiber::len).sum()
    }

    /// Restriction to the full subcategory on `keep` (which must contain the terminal).
    pub fn restrict(&self, keep: &[ObjId]) -> Result<(Doctrine, Embedding), DoctrineError> {
        let (base, emb) = self.base.full_subcategory(keep)?;
        let fibers = emb.objects.iter().map(|a| self.fiber(*a).clone()).collect();
        let reindex = emb.morphisms.iter().map(|f| self.reindex[f.index()].clone()).collect();
        let pos = |a: ObjId| emb.object_position(a);
        let delta = self
            .delta
            .iter()
            .filter_map(|(a, e)| {
                let na = pos(*a)?;
                base.product(na, na)?;
                Some((na, *e))
            })
            .collect();
        let keep_pairs = |tables: &BTreeMap<(ObjId, ObjId), MonotoneMap>| {
            tables
                .iter()
                .filter_map(|((c, b), m)| {
                    let (nc, nb) = (pos(*c)?, pos(*b)?);
                    base.product(nc, nb)?;
                    Some(((nc, nb), m.clone()))
                })
                .collect::<BTreeMap<_, _>>()
        };
        let exists = keep_pairs(&self.exists);
        let forall = keep_pairs(&self.forall);
        let d = Doctrine::new(self.name.clone(), base, fibers, reindex, delta, exists, forall, self.layers.clone())?;
        Ok((d, emb))
    }
}
