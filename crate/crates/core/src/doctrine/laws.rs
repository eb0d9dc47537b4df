use std::collections::BTreeMap;
use std::fmt;

use crate::fincat::{MorId, ObjId};

use super::{Doctrine, DoctrineError, Layer};

/// Counterexamples kept per layer; the failure count is always exact.
const KEPT_PER_LAYER: usize = 16;

/// One law instance family checked by [`check_structure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    ReindexMonotone,
    ReindexIdentity,
    ReindexComposition,
    TopMaximum,
    TopNatural,
    MeetLowerBound,
    MeetGreatest,
    MeetNatural,
    BottomMinimum,
    BottomNatural,
    ImpResidual,
    ImpNatural,
    JoinUpperBound,
    JoinLeast,
    JoinNatural,
    Distributive,
    DoubleNegation,
    DeltaReflexive,
    DeltaSubstitution,
    DeltaProduct,
    DeltaDiagonal,
    DeltaProductConverse,
    ExistsUnit,
    ExistsCounit,
    ExistsMonotone,
    ExistsAdjunction,
    ExistsBeckChevalley,
    ExistsFrobenius,
    ForallUnit,
    ForallCounit,
    ForallMonotone,
    ForallAdjunction,
    ForallBeckChevalley,
}

impl Law {
    pub fn layer(self) -> Layer {
        use Law::*;
        match self {
            ReindexMonotone | ReindexIdentity | ReindexComposition => Layer::Functorial,
            MeetLowerBound | MeetGreatest | MeetNatural => Layer::Primary,
            TopMaximum | TopNatural => Layer::Primary,
            BottomMinimum | BottomNatural => Layer::Bounded,
            ImpResidual | ImpNatural => Layer::Implicational,
            JoinUpperBound | JoinLeast | JoinNatural => Layer::Joins,
            Distributive => Layer::Heyting,
            DoubleNegation => Layer::Boolean,
            DeltaReflexive | DeltaSubstitution | DeltaProduct | DeltaDiagonal | DeltaProductConverse => {
                Layer::Elementary
            }
            ExistsUnit | ExistsCounit | ExistsMonotone | ExistsAdjunction | ExistsBeckChevalley | ExistsFrobenius => {
                Layer::Existential
            }
            ForallUnit | ForallCounit | ForallMonotone | ForallAdjunction | ForallBeckChevalley => Layer::Universal,
        }
    }

    pub fn statement(self) -> &'static str {
        use Law::*;
        match self {
            ReindexMonotone => "a ≤ b ⇒ P(f)a ≤ P(f)b",
            ReindexIdentity => "P(id)a = a",
            ReindexComposition => "P(g∘f)a = P(f)P(g)a",
            TopMaximum => "a ≤ ⊤",
            TopNatural => "P(f)⊤ = ⊤",
            MeetLowerBound => "a∧b ≤ a and a∧b ≤ b",
            MeetGreatest => "c ≤ a, c ≤ b ⇒ c ≤ a∧b",
            MeetNatural => "P(f)(a∧b) = P(f)a ∧ P(f)b",
            BottomMinimum => "⊥ ≤ a",
            BottomNatural => "P(f)⊥ = ⊥",
            ImpResidual => "c ≤ a→b ⇔ c∧a ≤ b",
            ImpNatural => "P(f)(a→b) = P(f)a → P(f)b",
            JoinUpperBound => "a ≤ a∨b and b ≤ a∨b",
            JoinLeast => "a ≤ c, b ≤ c ⇒ a∨b ≤ c",
            JoinNatural => "P(f)(a∨b) = P(f)a ∨ P(f)b",
            Distributive => "a∧(b∨c) = (a∧b)∨(a∧c)",
            DoubleNegation => "¬¬a = a",
            DeltaReflexive => "⊤ ≤ P(Δ)δ_A",
            DeltaSubstitution => "P(pr1)α ∧ δ_A ≤ P(pr2)α",
            DeltaProduct => "δ_A⊠δ_B ≤ δ_(A×B)",
            DeltaDiagonal => "P(⟨pr1,pr1⟩)γ ∧ δ_C ≤ γ",
            DeltaProductConverse => "δ_(A×B) ≤ δ_A⊠δ_B",
            ExistsUnit => "α ≤ P(pr1)∃α",
            ExistsCounit => "∃P(pr1)β ≤ β",
            ExistsMonotone => "α ≤ α' ⇒ ∃α ≤ ∃α'",
            ExistsAdjunction => "∃α ≤ β ⇔ α ≤ P(pr1)β",
            ExistsBeckChevalley => "∃ P(f×id) = P(f) ∃",
            ExistsFrobenius => "∃(α ∧ P(pr1)β) = ∃α ∧ β",
            ForallUnit => "β ≤ ∀P(pr1)β",
            ForallCounit => "P(pr1)∀α ≤ α",
            ForallMonotone => "α ≤ α' ⇒ ∀α ≤ ∀α'",
            ForallAdjunction => "P(pr1)β ≤ α ⇔ β ≤ ∀α",
            ForallBeckChevalley => "∀ P(f×id) = P(f) ∀",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A failing law instance with everything needed to re-evaluate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub law: Law,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
    pub elements: Vec<usize>,
}

impl Counterexample {
    /// Re-evaluates the instance: `Ok(true)` means the law holds there.
    pub fn replay(&self, d: &Doctrine) -> Result<bool, DoctrineError> {
        Eval { d }.replay(self)
    }

    /// Human-readable description using names from `d`.
    pub fn describe(&self, d: &Doctrine) -> String {
        let objs: Vec<&str> =
            self.objects.iter().filter(|a| a.index() < d.base.object_count()).map(|a| d.base.object_name(*a)).collect();
        let mors: Vec<&str> = self
            .morphisms
            .iter()
            .filter(|f| f.index() < d.base.morphism_count())
            .map(|f| d.base.morphism_name(*f))
            .collect();
        format!(
            "{} [{}] objects={:?} morphisms={:?} elements={:?}",
            self.law,
            self.law.statement(),
            objs,
            mors,
            self.elements
        )
    }
}

/// Outcome of one layer: instance count, exact failure count, and the first counterexamples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerReport {
    pub checked: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

/// Per-layer results; a layer passes when it has no failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub layers: BTreeMap<Layer, LayerReport>,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.layers.values().all(|r| r.failures == 0)
    }

    pub fn failures(&self) -> u64 {
        self.layers.values().map(|r| r.failures).sum()
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> + '_ {
        self.layers.values().flat_map(|r| r.counterexamples.iter())
    }

    pub fn layer_passes(&self, layer: Layer) -> bool {
        self.layers.get(&layer).is_some_and(|r| r.failures == 0)
    }
}

struct Tally<'r> {
    report: &'r mut LayerReport,
}

impl Tally<'_> {
    fn record(&mut self, holds: bool, law: Law, objects: &[ObjId], morphisms: &[MorId], elements: &[usize]) {
        self.report.checked += 1;
        if !holds {
            self.report.failures += 1;
            if self.report.counterexamples.len() < KEPT_PER_LAYER {
                self.report.counterexamples.push(Counterexample {
                    law,
                    objects: objects.to_vec(),
                    morphisms: morphisms.to_vec(),
                    elements: elements.to_vec(),
                });
            }
        }
    }
}

fn missing(layer: Layer, what: String) -> DoctrineError {
    DoctrineError::MissingWitness { layer, what }
}

/// Exhaustively checks the requested layers and all their prerequisites.
pub fn check_structure(d: &Doctrine, layers: &[Layer]) -> Result<StructureReport, DoctrineError> {
    d.check_shape()?;
    let eval = Eval { d };
    let mut report = StructureReport::default();
    for layer in Layer::closure(layers.iter().copied()) {
        let mut layer_report = LayerReport::default();
        let mut tally = Tally { report: &mut layer_report };
        eval.check_layer(layer, &mut tally)?;
        report.layers.insert(layer, layer_report);
    }
    Ok(report)
}

struct Eval<'a> {
    d: &'a Doctrine,
}

type R = Result<bool, DoctrineError>;

impl Eval<'_> {
    fn n(&self, a: ObjId) -> usize {
        self.d.fiber(a).len()
    }

    fn leq(&self, a: ObjId, x: usize, y: usize) -> bool {
        self.d.fiber(a).leq(x, y)
    }

    fn p(&self, f: MorId, x: usize) -> usize {
        self.d.reindex_elem(f, x)
    }

    fn require(&self, layer: Layer, a: ObjId, ok: bool, what: &str) -> Result<(), DoctrineError> {
        if ok {
            Ok(())
        } else {
            Err(missing(layer, format!("{what} over `{}`", self.d.base.object_name(a))))
        }
    }

    fn check_layer(&self, layer: Layer, t: &mut Tally) -> Result<(), DoctrineError> {
        let d = self.d;
        let cat = &d.base;
        let objects: Vec<ObjId> = cat.objects().collect();
        match layer {
            Layer::Functorial => {
                for f in cat.morphisms() {
                    let c = cat.cod(f);
                    for a in 0..self.n(c) {
                        for b in 0..self.n(c) {
                            if self.leq(c, a, b) {
                                t.record(self.reindex_monotone(f, a, b)?, Law::ReindexMonotone, &[], &[f], &[a, b]);
                            }
                        }
                    }
                }
                for &a in &objects {
                    for x in 0..self.n(a) {
                        t.record(self.reindex_identity(a, x)?, Law::ReindexIdentity, &[a], &[], &[x]);
                    }
                }
                for f in cat.morphisms() {
                    for &c in &objects {
                        for &g in cat.hom(cat.cod(f), c) {
                            for x in 0..self.n(c) {
                                t.record(
                                    self.reindex_composition(g, f, x)?,
                                    Law::ReindexComposition,
                                    &[],
                                    &[g, f],
                                    &[x],
                                );
                            }
                        }
                    }
                }
            }
            Layer::Primary => {
                for &a in &objects {
                    let ops = &d.fiber(a).ops;
                    self.require(layer, a, ops.top.is_some(), "top")?;
                    self.require(layer, a, ops.meet.is_some(), "meet")?;
                }
                self.check_top(t)?;
                for &a in &objects {
                    let n = self.n(a);
                    for x in 0..n {
                        for y in 0..n {
                            t.record(self.meet_lower_bound(a, x, y)?, Law::MeetLowerBound, &[a], &[], &[x, y]);
                            for z in 0..n {
                                if self.leq(a, z, x) && self.leq(a, z, y) {
                                    t.record(self.meet_greatest(a, x, y, z)?, Law::MeetGreatest, &[a], &[], &[x, y, z]);
                                }
                            }
                        }
                    }
                }
                self.for_pairs_along(t, Law::MeetNatural, |s, f, x, y| s.meet_natural(f, x, y))?;
            }
            Layer::Bounded => {
                for &a in &objects {
                    let ops = &d.fiber(a).ops;
                    self.require(layer, a, ops.top.is_some(), "top")?;
                    self.require(layer, a, ops.bottom.is_some(), "bottom")?;
                }
                self.check_top(t)?;
                self.check_bottom(t)?;
            }
            Layer::Implicational => {
                for &a in &objects {
                    self.require(layer, a, d.fiber(a).ops.imp.is_some(), "implication")?;
                }
                for &a in &objects {
                    let n = self.n(a);
                    for x in 0..n {
                        for y in 0..n {
                            for z in 0..n {
                                t.record(self.imp_residual(a, x, y, z)?, Law::ImpResidual, &[a], &[], &[x, y, z]);
                            }
                        }
                    }
                }
                self.for_pairs_along(t, Law::ImpNatural, |s, f, x, y| s.imp_natural(f, x, y))?;
            }
            Layer::Joins => {
                for &a in &objects {
                    let ops = &d.fiber(a).ops;
                    self.require(layer, a, ops.bottom.is_some(), "bottom")?;
                    self.require(layer, a, ops.join.is_some(), "join")?;
                }
                self.check_bottom(t)?;
                for &a in &objects {
                    let n = self.n(a);
                    for x in 0..n {
                        for y in 0..n {
                            t.record(self.join_upper_bound(a, x, y)?, Law::JoinUpperBound, &[a], &[], &[x, y]);
                            for z in 0..n {
                                if self.leq(a, x, z) && self.leq(a, y, z) {
                                    t.record(self.join_least(a, x, y, z)?, Law::JoinLeast, &[a], &[], &[x, y, z]);
                                }
                            }
                        }
                    }
                }
                self.for_pairs_along(t, Law::JoinNatural, |s, f, x, y| s.join_natural(f, x, y))?;
            }
            Layer::Heyting => {
                // Residuation already forces distributivity; checking it guards the join table.
                for &a in &objects {
                    let n = self.n(a);
                    for x in 0..n {
                        for y in 0..n {
                            for z in 0..n {
                                t.record(self.distributive(a, x, y, z)?, Law::Distributive, &[a], &[], &[x, y, z]);
                            }
                        }
                    }
                }
            }
            Layer::Boolean => {
                for &a in &objects {
                    for x in 0..self.n(a) {
                        t.record(self.double_negation(a, x)?, Law::DoubleNegation, &[a], &[], &[x]);
                    }
                }
            }
            Layer::Elementary => {
                for &a in &objects {
                    if cat.product(a, a).is_some() {
                        self.require(layer, a, d.delta.contains_key(&a), "δ")?;
                    }
                }
                for &a in d.delta.keys() {
                    t.record(self.delta_reflexive(a)?, Law::DeltaReflexive, &[a], &[], &[]);
                    let square = cat.product(a, a).expect("shape checked").object;
                    for x in 0..self.n(a) {
                        t.record(self.delta_substitution(a, x)?, Law::DeltaSubstitution, &[a], &[], &[x]);
                    }
                    for g in 0..self.n(square) {
                        t.record(self.delta_diagonal(a, g)?, Law::DeltaDiagonal, &[a], &[], &[g]);
                    }
                }
                for &a in &objects {
                    for &b in &objects {
                        if self.delta_product_shape(a, b).is_some() {
                            t.record(self.delta_product(a, b)?, Law::DeltaProduct, &[a, b], &[], &[]);
                            t.record(self.delta_product_converse(a, b)?, Law::DeltaProductConverse, &[a, b], &[], &[]);
                        }
                    }
                }
            }
            Layer::Existential | Layer::Universal => {
                let exists = layer == Layer::Existential;
                let tables = if exists { &d.exists } else { &d.forall };
                for ((c, b), _) in cat.products() {
                    if !tables.contains_key(&(c, b)) {
                        return Err(missing(
                            layer,
                            format!(
                                "{} over ({}, {})",
                                if exists { "∃" } else { "∀" },
                                cat.object_name(c),
                                cat.object_name(b)
                            ),
                        ));
                    }
                }
                let (unit, counit, mono, adj, bc) = if exists {
                    (
                        Law::ExistsUnit,
                        Law::ExistsCounit,
                        Law::ExistsMonotone,
                        Law::ExistsAdjunction,
                        Law::ExistsBeckChevalley,
                    )
                } else {
                    (
                        Law::ForallUnit,
                        Law::ForallCounit,
                        Law::ForallMonotone,
                        Law::ForallAdjunction,
                        Law::ForallBeckChevalley,
                    )
                };
                // The unit of ∃ and the counit of ∀ range over the product fiber; the others over `C`.
                let (over_z, over_c) = if exists { (unit, counit) } else { (counit, unit) };
                for &(c, b) in tables.keys() {
                    let z = cat.product(c, b).expect("shape checked").object;
                    let (nz, nc) = (self.n(z), self.n(c));
                    for x in 0..nz {
                        t.record(self.quant_instance(over_z, c, b, &[x])?, over_z, &[c, b], &[], &[x]);
                        for y in 0..nz {
                            if self.leq(z, x, y) {
                                t.record(self.quant_instance(mono, c, b, &[x, y])?, mono, &[c, b], &[], &[x, y]);
                            }
                        }
                        for y in 0..nc {
                            t.record(self.quant_instance(adj, c, b, &[x, y])?, adj, &[c, b], &[], &[x, y]);
                            if exists {
                                t.record(
                                    self.exists_frobenius(c, b, x, y)?,
                                    Law::ExistsFrobenius,
                                    &[c, b],
                                    &[],
                                    &[x, y],
                                );
                            }
                        }
                    }
                    for y in 0..nc {
                        t.record(self.quant_instance(over_c, c, b, &[y])?, over_c, &[c, b], &[], &[y]);
                    }
                }
                for &(c2, b) in tables.keys() {
                    let z2 = cat.product(c2, b).expect("shape checked").object;
                    for &c in &objects {
                        if !tables.contains_key(&(c, b)) {
                            continue;
                        }
                        for &f in cat.hom(c, c2) {
                            let fxid = self.times_id(f, b)?;
                            for x in 0..self.n(z2) {
                                t.record(self.beck_chevalley_with(exists, f, b, fxid, x)?, bc, &[b], &[f], &[x]);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_top(&self, t: &mut Tally) -> Result<(), DoctrineError> {
        for a in self.d.base.objects() {
            for x in 0..self.n(a) {
                t.record(self.top_maximum(a, x)?, Law::TopMaximum, &[a], &[], &[x]);
            }
        }
        for f in self.d.base.morphisms() {
            t.record(self.top_natural(f)?, Law::TopNatural, &[], &[f], &[]);
        }
        Ok(())
    }

    fn check_bottom(&self, t: &mut Tally) -> Result<(), DoctrineError> {
        for a in self.d.base.objects() {
            for x in 0..self.n(a) {
                t.record(self.bottom_minimum(a, x)?, Law::BottomMinimum, &[a], &[], &[x]);
            }
        }
        for f in self.d.base.morphisms() {
            t.record(self.bottom_natural(f)?, Law::BottomNatural, &[], &[f], &[]);
        }
        Ok(())
    }

    fn for_pairs_along(
        &self,
        t: &mut Tally,
        law: Law,
        check: impl Fn(&Self, MorId, usize, usize) -> R,
    ) -> Result<(), DoctrineError> {
        for f in self.d.base.morphisms() {
            let n = self.n(self.d.base.cod(f));
            for x in 0..n {
                for y in 0..n {
                    t.record(check(self, f, x, y)?, law, &[], &[f], &[x, y]);
                }
            }
        }
        Ok(())
    }

    // Functorial.

    fn reindex_monotone(&self, f: MorId, a: usize, b: usize) -> R {
        let (dom, cod) = (self.d.base.dom(f), self.d.base.cod(f));
        Ok(!self.leq(cod, a, b) || self.leq(dom, self.p(f, a), self.p(f, b)))
    }

    fn reindex_identity(&self, a: ObjId, x: usize) -> R {
        Ok(self.p(self.d.base.identity(a), x) == x)
    }

    fn reindex_composition(&self, g: MorId, f: MorId, x: usize) -> R {
        let gf = self.d.base.try_compose(g, f)?;
        Ok(self.p(gf, x) == self.p(f, self.p(g, x)))
    }

    // Lattice structure.

    fn top_maximum(&self, a: ObjId, x: usize) -> R {
        Ok(self.leq(a, x, self.d.fiber(a).top()?))
    }

    fn top_natural(&self, f: MorId) -> R {
        let (dom, cod) = (self.d.base.dom(f), self.d.base.cod(f));
        Ok(self.p(f, self.d.fiber(cod).top()?) == self.d.fiber(dom).top()?)
    }

    fn bottom_minimum(&self, a: ObjId, x: usize) -> R {
        Ok(self.leq(a, self.d.fiber(a).bottom()?, x))
    }

    fn bottom_natural(&self, f: MorId) -> R {
        let (dom, cod) = (self.d.base.dom(f), self.d.base.cod(f));
        Ok(self.p(f, self.d.fiber(cod).bottom()?) == self.d.fiber(dom).bottom()?)
    }

    fn meet_lower_bound(&self, a: ObjId, x: usize, y: usize) -> R {
        let m = self.d.fiber(a).meet(x, y)?;
        Ok(self.leq(a, m, x) && self.leq(a, m, y))
    }

    fn meet_greatest(&self, a: ObjId, x: usize, y: usize, z: usize) -> R {
        let m = self.d.fiber(a).meet(x, y)?;
        Ok(!(self.leq(a, z, x) && self.leq(a, z, y)) || self.leq(a, z, m))
    }

    fn natural_binary(
        &self,
        f: MorId,
        x: usize,
        y: usize,
        op: impl Fn(&crate::order::Fiber, usize, usize) -> Result<usize, crate::order::OrderError>,
    ) -> R {
        let (dom, cod) = (self.d.base.dom(f), self.d.base.cod(f));
        let lhs = self.p(f, op(self.d.fiber(cod), x, y)?);
        let rhs = op(self.d.fiber(dom), self.p(f, x), self.p(f, y))?;
        Ok(lhs == rhs)
    }

    fn meet_natural(&self, f: MorId, x: usize, y: usize) -> R {
        self.natural_binary(f, x, y, |fib, a, b| fib.meet(a, b))
    }

    fn imp_residual(&self, a: ObjId, x: usize, y: usize, z: usize) -> R {
        let fib = self.d.fiber(a);
        Ok(fib.leq(z, fib.imp(x, y)?) == fib.leq(fib.meet(z, x)?, y))
    }

    fn imp_natural(&self, f: MorId, x: usize, y: usize) -> R {
        self.natural_binary(f, x, y, |fib, a, b| fib.imp(a, b))
    }

    fn join_upper_bound(&self, a: ObjId, x: usize, y: usize) -> R {
        let j = self.d.fiber(a).join(x, y)?;
        Ok(self.leq(a, x, j) && self.leq(a, y, j))
    }

    fn join_least(&self, a: ObjId, x: usize, y: usize, z: usize) -> R {
        let j = self.d.fiber(a).join(x, y)?;
        Ok(!(self.leq(a, x, z) && self.leq(a, y, z)) || self.leq(a, j, z))
    }

    fn distributive(&self, a: ObjId, x: usize, y: usize, z: usize) -> R {
        let fib = self.d.fiber(a);
        let left = fib.meet(x, fib.join(y, z)?)?;
        let right = fib.join(fib.meet(x, y)?, fib.meet(x, z)?)?;
        Ok(left == right)
    }

    fn join_natural(&self, f: MorId, x: usize, y: usize) -> R {
        self.natural_binary(f, x, y, |fib, a, b| fib.join(a, b))
    }

    fn double_negation(&self, a: ObjId, x: usize) -> R {
        let fib = self.d.fiber(a);
        Ok(fib.neg(fib.neg(x)?)? == x)
    }

    // Equality.

    fn delta(&self, a: ObjId) -> Result<usize, DoctrineError> {
        self.d
            .delta
            .get(&a)
            .copied()
            .ok_or_else(|| missing(Layer::Elementary, format!("δ over `{}`", self.d.base.object_name(a))))
    }

    fn delta_reflexive(&self, a: ObjId) -> R {
        let diag = self.d.base.diagonal(a)?;
        Ok(self.leq(a, self.d.fiber(a).top()?, self.p(diag, self.delta(a)?)))
    }

    fn delta_substitution(&self, a: ObjId, x: usize) -> R {
        let sq = *self.d.base.require_product(a, a)?;
        let fib = self.d.fiber(sq.object);
        let lhs = fib.meet(self.p(sq.pr1, x), self.delta(a)?)?;
        Ok(fib.leq(lhs, self.p(sq.pr2, x)))
    }

    fn delta_diagonal(&self, c: ObjId, g: usize) -> R {
        let sq = *self.d.base.require_product(c, c)?;
        let swap_free = self.d.base.tuple(sq.pr1, sq.pr1)?;
        let fib = self.d.fiber(sq.object);
        let lhs = fib.meet(self.p(swap_free, g), self.delta(c)?)?;
        Ok(fib.leq(lhs, g))
    }

    /// `(W, u, v)` with `W = (A×B)×(A×B)`, `u = ⟨pr1,pr3⟩ : W → A×A`, `v = ⟨pr2,pr4⟩ : W → B×B`.
    fn delta_product_shape(&self, a: ObjId, b: ObjId) -> Option<(ObjId, ObjId, MorId, MorId)> {
        let cat = &self.d.base;
        let z = *cat.product(a, b)?;
        let w = *cat.product(z.object, z.object)?;
        cat.product(a, a)?;
        cat.product(b, b)?;
        if !self.d.delta.contains_key(&a) || !self.d.delta.contains_key(&b) || !self.d.delta.contains_key(&z.object) {
            return None;
        }
        let u = cat.tuple(cat.compose(z.pr1, w.pr1)?, cat.compose(z.pr1, w.pr2)?).ok()?;
        let v = cat.tuple(cat.compose(z.pr2, w.pr1)?, cat.compose(z.pr2, w.pr2)?).ok()?;
        Some((z.object, w.object, u, v))
    }

    fn boxed_delta(&self, a: ObjId, b: ObjId) -> Result<(ObjId, usize, usize), DoctrineError> {
        let (z, w, u, v) = self.delta_product_shape(a, b).ok_or_else(|| {
            DoctrineError::BadReplay("δ product instance needs A×B, its square, A×A, B×B and their δ".into())
        })?;
        let boxed = self.d.fiber(w).meet(self.p(u, self.delta(a)?), self.p(v, self.delta(b)?))?;
        Ok((w, boxed, self.delta(z)?))
    }

    fn delta_product(&self, a: ObjId, b: ObjId) -> R {
        let (w, boxed, dz) = self.boxed_delta(a, b)?;
        Ok(self.leq(w, boxed, dz))
    }

    fn delta_product_converse(&self, a: ObjId, b: ObjId) -> R {
        let (w, boxed, dz) = self.boxed_delta(a, b)?;
        Ok(self.leq(w, dz, boxed))
    }

    // Quantifiers.

    fn quant(&self, exists: bool, c: ObjId, b: ObjId, x: usize) -> Result<usize, DoctrineError> {
        let tables = if exists { &self.d.exists } else { &self.d.forall };
        let layer = if exists { Layer::Existential } else { Layer::Universal };
        tables.get(&(c, b)).map(|m| m.apply(x)).ok_or_else(|| {
            missing(layer, format!("table over ({}, {})", self.d.base.object_name(c), self.d.base.object_name(b)))
        })
    }

    fn quant_instance(&self, law: Law, c: ObjId, b: ObjId, xs: &[usize]) -> R {
        let p = *self.d.base.require_product(c, b)?;
        let z = p.object;
        let pull = |y: usize| self.p(p.pr1, y);
        Ok(match law {
            Law::ExistsUnit => self.leq(z, xs[0], pull(self.quant(true, c, b, xs[0])?)),
            Law::ExistsCounit => self.leq(c, self.quant(true, c, b, pull(xs[0]))?, xs[0]),
            Law::ExistsMonotone => {
                !self.leq(z, xs[0], xs[1])
                    || self.leq(c, self.quant(true, c, b, xs[0])?, self.quant(true, c, b, xs[1])?)
            }
            Law::ExistsAdjunction => {
                self.leq(c, self.quant(true, c, b, xs[0])?, xs[1]) == self.leq(z, xs[0], pull(xs[1]))
            }
            Law::ForallUnit => self.leq(c, xs[0], self.quant(false, c, b, pull(xs[0]))?),
            Law::ForallCounit => self.leq(z, pull(self.quant(false, c, b, xs[0])?), xs[0]),
            Law::ForallMonotone => {
                !self.leq(z, xs[0], xs[1])
                    || self.leq(c, self.quant(false, c, b, xs[0])?, self.quant(false, c, b, xs[1])?)
            }
            Law::ForallAdjunction => {
                self.leq(z, pull(xs[1]), xs[0]) == self.leq(c, xs[1], self.quant(false, c, b, xs[0])?)
            }
            other => return Err(DoctrineError::BadReplay(format!("{other} is not a quantifier adjunction law"))),
        })
    }

    fn exists_frobenius(&self, c: ObjId, b: ObjId, x: usize, y: usize) -> R {
        let p = *self.d.base.require_product(c, b)?;
        let inner = self.d.fiber(p.object).meet(x, self.p(p.pr1, y))?;
        let lhs = self.quant(true, c, b, inner)?;
        let rhs = self.d.fiber(c).meet(self.quant(true, c, b, x)?, y)?;
        Ok(lhs == rhs)
    }

    /// `f × id_B : C×B → C'×B`.
    fn times_id(&self, f: MorId, b: ObjId) -> Result<MorId, DoctrineError> {
        Ok(self.d.base.product_map(f, self.d.base.identity(b))?)
    }

    fn beck_chevalley_with(&self, exists: bool, f: MorId, b: ObjId, fxid: MorId, x: usize) -> R {
        let (c, c2) = (self.d.base.dom(f), self.d.base.cod(f));
        let lhs = self.quant(exists, c, b, self.p(fxid, x))?;
        let rhs = self.p(f, self.quant(exists, c2, b, x)?);
        Ok(lhs == rhs)
    }

    fn replay(&self, cx: &Counterexample) -> R {
        let d = self.d;
        let bad = |why: &str| DoctrineError::BadReplay(format!("{}: {why}", cx.law));
        if cx.objects.iter().any(|a| a.index() >= d.base.object_count()) {
            return Err(bad("object out of range"));
        }
        if cx.morphisms.iter().any(|f| f.index() >= d.base.morphism_count()) {
            return Err(bad("morphism out of range"));
        }
        let o = |i: usize| cx.objects.get(i).copied().ok_or_else(|| bad("missing object"));
        let m = |i: usize| cx.morphisms.get(i).copied().ok_or_else(|| bad("missing morphism"));
        let e = |i: usize| cx.elements.get(i).copied().ok_or_else(|| bad("missing element"));
        let in_fiber = |a: ObjId, xs: &[usize]| {
            if xs.iter().all(|x| *x < d.fiber(a).len()) {
                Ok(())
            } else {
                Err(bad("element out of range"))
            }
        };
        use Law::*;
        match cx.law {
            ReindexMonotone | MeetNatural | ImpNatural | JoinNatural => {
                let f = m(0)?;
                let (x, y) = (e(0)?, e(1)?);
                in_fiber(d.base.cod(f), &[x, y])?;
                match cx.law {
                    ReindexMonotone => self.reindex_monotone(f, x, y),
                    MeetNatural => self.meet_natural(f, x, y),
                    ImpNatural => self.imp_natural(f, x, y),
                    _ => self.join_natural(f, x, y),
                }
            }
            ReindexIdentity => {
                let (a, x) = (o(0)?, e(0)?);
                in_fiber(a, &[x])?;
                self.reindex_identity(a, x)
            }
            ReindexComposition => {
                let (g, f, x) = (m(0)?, m(1)?, e(0)?);
                in_fiber(d.base.cod(g), &[x])?;
                self.reindex_composition(g, f, x)
            }
            TopNatural => self.top_natural(m(0)?),
            BottomNatural => self.bottom_natural(m(0)?),
            TopMaximum | BottomMinimum | DoubleNegation | DeltaSubstitution => {
                let (a, x) = (o(0)?, e(0)?);
                in_fiber(a, &[x])?;
                match cx.law {
                    TopMaximum => self.top_maximum(a, x),
                    BottomMinimum => self.bottom_minimum(a, x),
                    DoubleNegation => self.double_negation(a, x),
                    _ => self.delta_substitution(a, x),
                }
            }
            MeetLowerBound | JoinUpperBound => {
                let (a, x, y) = (o(0)?, e(0)?, e(1)?);
                in_fiber(a, &[x, y])?;
                if cx.law == MeetLowerBound {
                    self.meet_lower_bound(a, x, y)
                } else {
                    self.join_upper_bound(a, x, y)
                }
            }
            MeetGreatest | JoinLeast | ImpResidual | Distributive => {
                let (a, x, y, z) = (o(0)?, e(0)?, e(1)?, e(2)?);
                in_fiber(a, &[x, y, z])?;
                match cx.law {
                    MeetGreatest => self.meet_greatest(a, x, y, z),
                    JoinLeast => self.join_least(a, x, y, z),
                    Distributive => self.distributive(a, x, y, z),
                    _ => self.imp_residual(a, x, y, z),
                }
            }
            DeltaReflexive => self.delta_reflexive(o(0)?),
            DeltaDiagonal => {
                let (c, g) = (o(0)?, e(0)?);
                let sq = d.base.require_product(c, c)?.object;
                in_fiber(sq, &[g])?;
                self.delta_diagonal(c, g)
            }
            DeltaProduct => self.delta_product(o(0)?, o(1)?),
            DeltaProductConverse => self.delta_product_converse(o(0)?, o(1)?),
            ExistsUnit | ExistsCounit | ExistsMonotone | ExistsAdjunction | ForallUnit | ForallCounit
            | ForallMonotone | ForallAdjunction => {
                let (c, b) = (o(0)?, o(1)?);
                let z = d.base.require_product(c, b)?.object;
                let xs: Vec<usize> = cx.elements.clone();
                let expect_len = match cx.law {
                    ExistsMonotone | ExistsAdjunction | ForallMonotone | ForallAdjunction => 2,
                    _ => 1,
                };
                if xs.len() != expect_len {
                    return Err(bad("wrong number of elements"));
                }
                let first_in_c = matches!(cx.law, ExistsCounit | ForallUnit);
                in_fiber(if first_in_c { c } else { z }, &xs[..1])?;
                if expect_len == 2 {
                    let second_in_c = matches!(cx.law, ExistsAdjunction | ForallAdjunction);
                    in_fiber(if second_in_c { c } else { z }, &xs[1..])?;
                }
                self.quant_instance(cx.law, c, b, &xs)
            }
            ExistsFrobenius => {
                let (c, b, x, y) = (o(0)?, o(1)?, e(0)?, e(1)?);
                in_fiber(d.base.require_product(c, b)?.object, &[x])?;
                in_fiber(c, &[y])?;
                self.exists_frobenius(c, b, x, y)
            }
            ExistsBeckChevalley | ForallBeckChevalley => {
                let (b, f, x) = (o(0)?, m(0)?, e(0)?);
                let z2 = d.base.require_product(d.base.cod(f), b)?.object;
                in_fiber(z2, &[x])?;
                let fxid = self.times_id(f, b)?;
                self.beck_chevalley_with(cx.law == ExistsBeckChevalley, f, b, fxid, x)
            }
        }
    }
}
