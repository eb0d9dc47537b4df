use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Object identifier, dense in `0..object_count()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

/// Morphism identifier, dense in `0..morphism_count()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn new(index: usize) -> Self {
        ObjId(u32::try_from(index).expect("object index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn new(index: usize) -> Self {
        MorId(u32::try_from(index).expect("morphism index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A named morphism with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A chosen product `A×B` with its two projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Product {
    pub object: ObjId,
    pub pr1: MorId,
    pub pr2: MorId,
}

/// Malformed tables. Law violations are reported by [`validate_category`] instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("unknown object id {0}")]
    UnknownObject(u32),
    #[error("unknown morphism id {0}")]
    UnknownMorphism(u32),
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism name `{0}`")]
    DuplicateMorphism(String),
    #[error("missing identity for object `{0}`")]
    MissingIdentity(String),
    #[error("identity `{mor}` of `{obj}` has the wrong endpoints")]
    BadIdentity { obj: String, mor: String },
    #[error("composite `{g}` ∘ `{f}` is not tabulated")]
    MissingComposite { g: String, f: String },
    #[error("composite `{g}` ∘ `{f}` is tabulated twice")]
    DuplicateComposite { g: String, f: String },
    #[error("`{g}` ∘ `{f}` is tabulated but the morphisms are not composable")]
    NotComposable { g: String, f: String },
    #[error("composite `{g}` ∘ `{f}` = `{h}` has the wrong endpoints")]
    BadComposite { g: String, f: String, h: String },
    #[error("no terminal object declared")]
    MissingTerminal,
    #[error("missing unique map from `{0}` to the terminal object")]
    MissingBang(String),
    #[error("unique map `{mor}` does not go from `{obj}` to the terminal object")]
    BadBang { obj: String, mor: String },
    #[error("projections of the product ({left}, {right}) have the wrong endpoints")]
    BadProduct { left: String, right: String },
    #[error("no chosen product for ({left}, {right})")]
    NoProduct { left: String, right: String },
    #[error("tupling into `{product}` has {count} candidates instead of exactly one")]
    NotAProduct { product: String, count: usize },
    #[error("`{g}` ∘ `{f}`: the morphisms are not composable")]
    Uncomposable { g: String, f: String },
    #[error("`{0}` lacks the products needed here")]
    NotAdmissible(String),
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
    #[error("function table out of range: {0}")]
    BadTable(String),
    #[error("function set is not closed under composition: {0}")]
    NotClosed(String),
}

/// A finite category with a chosen terminal object and chosen binary products.
///
/// Products are partial: only declared ordered pairs carry a chosen product.
/// Composition is stored per object triple, so lookups are direct indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<MorId>,
    homs: Vec<Vec<MorId>>,
    local: Vec<u32>,
    blocks: Vec<Vec<MorId>>,
    terminal: ObjId,
    bangs: Vec<MorId>,
    products: BTreeMap<(ObjId, ObjId), Product>,
    object_index: BTreeMap<String, ObjId>,
    morphism_index: BTreeMap<String, MorId>,
}

impl FinCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId::new)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.arrows.len()).map(MorId::new)
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a.index()]
    }

    pub fn arrow(&self, f: MorId) -> &Arrow {
        &self.arrows[f.index()]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.arrows[f.index()].name
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.arrows[f.index()].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.arrows[f.index()].cod
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.morphism_index.get(name).copied()
    }

    pub fn identity(&self, a: ObjId) -> MorId {
        self.identities[a.index()]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.dom(f).index()] == f
    }

    pub fn terminal(&self) -> ObjId {
        self.terminal
    }

    /// The chosen map `!_A : A → 𝐭`.
    pub fn bang(&self, a: ObjId) -> MorId {
        self.bangs[a.index()]
    }

    pub fn product(&self, a: ObjId, b: ObjId) -> Option<&Product> {
        self.products.get(&(a, b))
    }

    pub fn products(&self) -> impl Iterator<Item = ((ObjId, ObjId), &Product)> + '_ {
        self.products.iter().map(|(k, v)| (*k, v))
    }

    /// Hom-set in increasing id order.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.index() * self.objects.len() + b.index()]
    }

    /// `g ∘ f`, or `None` when `cod f ≠ dom g`.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        if self.dom(g) != b {
            return None;
        }
        let c = self.cod(g);
        let n = self.objects.len();
        let width = self.homs[b.index() * n + c.index()].len();
        let block = &self.blocks[(a.index() * n + b.index()) * n + c.index()];
        Some(block[self.local[f.index()] as usize * width + self.local[g.index()] as usize])
    }

    /// `g ∘ f`, with a descriptive error when not composable.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Result<MorId, CategoryError> {
        self.compose(g, f).ok_or_else(|| CategoryError::Uncomposable {
            g: self.morphism_name(g).to_string(),
            f: self.morphism_name(f).to_string(),
        })
    }

    /// Composite of a path written right to left: `path[0] ∘ path[1] ∘ …`.
    pub fn compose_path(&self, path: &[MorId]) -> Result<MorId, CategoryError> {
        let (last, rest) = path.split_last().expect("non-empty path");
        rest.iter().rev().try_fold(*last, |acc, g| self.try_compose(*g, acc))
    }

    pub fn require_product(&self, a: ObjId, b: ObjId) -> Result<&Product, CategoryError> {
        self.product(a, b).ok_or_else(|| CategoryError::NoProduct {
            left: self.object_name(a).to_string(),
            right: self.object_name(b).to_string(),
        })
    }

    /// The unique `h : C → A×B` with `pr1∘h = f` and `pr2∘h = g`.
    pub fn tuple(&self, f: MorId, g: MorId) -> Result<MorId, CategoryError> {
        let c = self.dom(f);
        if self.dom(g) != c {
            return Err(CategoryError::Uncomposable {
                g: self.morphism_name(g).to_string(),
                f: self.morphism_name(f).to_string(),
            });
        }
        let p = *self.require_product(self.cod(f), self.cod(g))?;
        let mut found = None;
        let mut count = 0;
        for &h in self.hom(c, p.object) {
            if self.compose(p.pr1, h) == Some(f) && self.compose(p.pr2, h) == Some(g) {
                found = Some(h);
                count += 1;
            }
        }
        match (found, count) {
            (Some(h), 1) => Ok(h),
            _ => Err(CategoryError::NotAProduct { product: self.object_name(p.object).to_string(), count }),
        }
    }

    /// `f × g : A×B → A'×B'`.
    pub fn product_map(&self, f: MorId, g: MorId) -> Result<MorId, CategoryError> {
        let src = *self.require_product(self.dom(f), self.dom(g))?;
        let left = self.try_compose(f, src.pr1)?;
        let right = self.try_compose(g, src.pr2)?;
        self.tuple(left, right)
    }

    /// The diagonal `⟨id, id⟩ : A → A×A`.
    pub fn diagonal(&self, a: ObjId) -> Result<MorId, CategoryError> {
        let id = self.identity(a);
        self.tuple(id, id)
    }

    /// Full subcategory on `keep`, which must contain the terminal object.
    ///
    /// Products survive when both factors and the product object are kept.
    pub fn full_subcategory(&self, keep: &[ObjId]) -> Result<(FinCategory, Embedding), CategoryError> {
        if !keep.contains(&self.terminal) {
            return Err(CategoryError::MissingTerminal);
        }
        let mut kept: Vec<ObjId> = keep.to_vec();
        kept.sort();
        kept.dedup();
        let mut new_obj: BTreeMap<ObjId, ObjId> = BTreeMap::new();
        let mut b = CategoryBuilder::default();
        for &a in &kept {
            new_obj.insert(a, b.object(self.object_name(a)));
        }
        let mut new_mor: HashMap<MorId, MorId> = HashMap::new();
        let mut mor_embed = Vec::new();
        for f in self.morphisms() {
            if let (Some(&d), Some(&c)) = (new_obj.get(&self.dom(f)), new_obj.get(&self.cod(f))) {
                new_mor.insert(f, b.morphism(self.morphism_name(f), d, c));
                mor_embed.push(f);
            }
        }
        for &a in &kept {
            b.identity(new_obj[&a], new_mor[&self.identity(a)]);
            b.bang(new_obj[&a], new_mor[&self.bang(a)]);
        }
        b.terminal(new_obj[&self.terminal]);
        for &f in &mor_embed {
            for &g in kept.iter().flat_map(|c| self.hom(self.cod(f), *c).iter()) {
                let h = self.compose(g, f).expect("composable");
                b.composite(new_mor[&g], new_mor[&f], new_mor[&h]);
            }
        }
        for (&(l, r), p) in &self.products {
            if let (Some(&nl), Some(&nr), Some(&np)) = (new_obj.get(&l), new_obj.get(&r), new_obj.get(&p.object)) {
                b.product(nl, nr, Product { object: np, pr1: new_mor[&p.pr1], pr2: new_mor[&p.pr2] });
            }
        }
        let cat = b.build()?;
        Ok((cat, Embedding { objects: kept, morphisms: mor_embed }))
    }

    /// Rebuilds a builder holding exactly this category's tables.
    pub fn to_builder(&self) -> CategoryBuilder {
        let mut b = CategoryBuilder::default();
        for name in &self.objects {
            b.object(name);
        }
        for arrow in &self.arrows {
            b.morphism(&arrow.name, arrow.dom, arrow.cod);
        }
        for a in self.objects() {
            b.identity(a, self.identity(a));
            b.bang(a, self.bang(a));
        }
        b.terminal(self.terminal);
        for (g, f, h) in self.composition_triples() {
            b.composite(g, f, h);
        }
        for (&(l, r), p) in &self.products {
            b.product(l, r, *p);
        }
        b
    }

    /// All tabulated composites `(g, f, g∘f)`, ordered by `(f, g)` ids.
    pub fn composition_triples(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            let b = self.cod(f);
            for c in self.objects() {
                for &g in self.hom(b, c) {
                    out.push((g, f, self.compose(g, f).expect("composable")));
                }
            }
        }
        out.sort_by_key(|(g, f, _)| (*f, *g));
        out
    }
}

/// Inclusion of a full subcategory: new ids index into these vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

impl Embedding {
    pub fn object_position(&self, old: ObjId) -> Option<ObjId> {
        self.objects.binary_search(&old).ok().map(ObjId::new)
    }
}

/// Incremental construction of a [`FinCategory`]; `build` checks table shape only.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: BTreeMap<ObjId, MorId>,
    composites: HashMap<(MorId, MorId), Vec<MorId>>,
    terminal: Option<ObjId>,
    bangs: BTreeMap<ObjId, MorId>,
    products: BTreeMap<(ObjId, ObjId), Product>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        ObjId::new(self.objects.len() - 1)
    }

    pub fn morphism(&mut self, name: impl Into<String>, dom: ObjId, cod: ObjId) -> MorId {
        self.arrows.push(Arrow { name: name.into(), dom, cod });
        MorId::new(self.arrows.len() - 1)
    }

    pub fn identity(&mut self, a: ObjId, f: MorId) -> &mut Self {
        self.identities.insert(a, f);
        self
    }

    /// Records `g ∘ f = h`.
    pub fn composite(&mut self, g: MorId, f: MorId, h: MorId) -> &mut Self {
        self.composites.entry((g, f)).or_default().push(h);
        self
    }

    pub fn terminal(&mut self, a: ObjId) -> &mut Self {
        self.terminal = Some(a);
        self
    }

    pub fn bang(&mut self, a: ObjId, f: MorId) -> &mut Self {
        self.bangs.insert(a, f);
        self
    }

    pub fn product(&mut self, left: ObjId, right: ObjId, p: Product) -> &mut Self {
        self.products.insert((left, right), p);
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.arrows.len()
    }

    fn obj_name(&self, a: ObjId) -> String {
        self.objects[a.index()].clone()
    }

    fn mor_name(&self, f: MorId) -> String {
        self.arrows[f.index()].name.clone()
    }

    pub fn build(self) -> Result<FinCategory, CategoryError> {
        let n = self.objects.len();
        let m = self.arrows.len();
        let check_obj = |a: ObjId| {
            if a.index() < n {
                Ok(())
            } else {
                Err(CategoryError::UnknownObject(a.0))
            }
        };
        let check_mor = |f: MorId| {
            if f.index() < m {
                Ok(())
            } else {
                Err(CategoryError::UnknownMorphism(f.0))
            }
        };
        let mut object_index = BTreeMap::new();
        for (i, name) in self.objects.iter().enumerate() {
            if object_index.insert(name.clone(), ObjId::new(i)).is_some() {
                return Err(CategoryError::DuplicateObject(name.clone()));
            }
        }
        let mut morphism_index = BTreeMap::new();
        for (i, arrow) in self.arrows.iter().enumerate() {
            check_obj(arrow.dom)?;
            check_obj(arrow.cod)?;
            if morphism_index.insert(arrow.name.clone(), MorId::new(i)).is_some() {
                return Err(CategoryError::DuplicateMorphism(arrow.name.clone()));
            }
        }
        let mut homs = vec![Vec::new(); n * n];
        let mut local = vec![0u32; m];
        for (i, arrow) in self.arrows.iter().enumerate() {
            let hom = &mut homs[arrow.dom.index() * n + arrow.cod.index()];
            local[i] = hom.len() as u32;
            hom.push(MorId::new(i));
        }
        let mut identities = Vec::with_capacity(n);
        for a in (0..n).map(ObjId::new) {
            let f = *self.identities.get(&a).ok_or_else(|| CategoryError::MissingIdentity(self.obj_name(a)))?;
            check_mor(f)?;
            if self.arrows[f.index()].dom != a || self.arrows[f.index()].cod != a {
                return Err(CategoryError::BadIdentity { obj: self.obj_name(a), mor: self.mor_name(f) });
            }
            identities.push(f);
        }
        for (&(g, f), hs) in &self.composites {
            check_mor(g)?;
            check_mor(f)?;
            if hs.len() > 1 && hs.iter().any(|h| *h != hs[0]) {
                return Err(CategoryError::DuplicateComposite { g: self.mor_name(g), f: self.mor_name(f) });
            }
            let h = hs[0];
            check_mor(h)?;
            let (ga, fa) = (&self.arrows[g.index()], &self.arrows[f.index()]);
            if ga.dom != fa.cod {
                return Err(CategoryError::NotComposable { g: self.mor_name(g), f: self.mor_name(f) });
            }
            let ha = &self.arrows[h.index()];
            if ha.dom != fa.dom || ha.cod != ga.cod {
                return Err(CategoryError::BadComposite {
                    g: self.mor_name(g),
                    f: self.mor_name(f),
                    h: self.mor_name(h),
                });
            }
        }
        let mut blocks = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (&homs[a * n + b], &homs[b * n + c]);
                    let mut block = Vec::with_capacity(hab.len() * hbc.len());
                    for &f in hab {
                        for &g in hbc {
                            let h = self.composites.get(&(g, f)).map(|hs| hs[0]).ok_or_else(|| {
                                CategoryError::MissingComposite { g: self.mor_name(g), f: self.mor_name(f) }
                            })?;
                            block.push(h);
                        }
                    }
                    blocks.push(block);
                }
            }
        }
        let terminal = self.terminal.ok_or(CategoryError::MissingTerminal)?;
        check_obj(terminal)?;
        let mut bangs = Vec::with_capacity(n);
        for a in (0..n).map(ObjId::new) {
            let f = *self.bangs.get(&a).ok_or_else(|| CategoryError::MissingBang(self.obj_name(a)))?;
            check_mor(f)?;
            if self.arrows[f.index()].dom != a || self.arrows[f.index()].cod != terminal {
                return Err(CategoryError::BadBang { obj: self.obj_name(a), mor: self.mor_name(f) });
            }
            bangs.push(f);
        }
        for (&(l, r), p) in &self.products {
            check_obj(l)?;
            check_obj(r)?;
            check_obj(p.object)?;
            check_mor(p.pr1)?;
            check_mor(p.pr2)?;
            let (p1, p2) = (&self.arrows[p.pr1.index()], &self.arrows[p.pr2.index()]);
            if p1.dom != p.object || p2.dom != p.object || p1.cod != l || p2.cod != r {
                return Err(CategoryError::BadProduct { left: self.obj_name(l), right: self.obj_name(r) });
            }
        }
        Ok(FinCategory {
            objects: self.objects,
            arrows: self.arrows,
            identities,
            homs,
            local,
            blocks,
            terminal,
            bangs,
            products: self.products,
            object_index,
            morphism_index,
        })
    }
}

/// A law violated by a well-formed category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryViolation {
    /// `(h∘g)∘f ≠ h∘(g∘f)`.
    Associativity {
        h: MorId,
        g: MorId,
        f: MorId,
    },
    LeftIdentity {
        f: MorId,
    },
    RightIdentity {
        f: MorId,
    },
    /// `|Hom(A, 𝐭)| ≠ 1`.
    TerminalHom {
        object: ObjId,
        count: usize,
    },
    /// Pairs `(f, g)` out of `test` do not have exactly one tuple into the chosen product.
    Tupling {
        left: ObjId,
        right: ObjId,
        test: ObjId,
        f: MorId,
        g: MorId,
        candidates: usize,
    },
}

/// Every law violation found by [`validate_category`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<CategoryViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks associativity, identities, terminality and every chosen product.
pub fn validate_category(cat: &FinCategory) -> ValidationReport {
    let mut violations = Vec::new();
    for f in cat.morphisms() {
        if cat.compose(cat.identity(cat.cod(f)), f) != Some(f) {
            violations.push(CategoryViolation::LeftIdentity { f });
        }
        if cat.compose(f, cat.identity(cat.dom(f))) != Some(f) {
            violations.push(CategoryViolation::RightIdentity { f });
        }
    }
    let objs: Vec<ObjId> = cat.objects().collect();
    for &a in &objs {
        for &b in &objs {
            for &c in &objs {
                for &d in &objs {
                    for &f in cat.hom(a, b) {
                        for &g in cat.hom(b, c) {
                            let gf = cat.compose(g, f).expect("composable");
                            for &h in cat.hom(c, d) {
                                let left = cat.compose(cat.compose(h, g).expect("composable"), f);
                                if left != cat.compose(h, gf) {
                                    violations.push(CategoryViolation::Associativity { h, g, f });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for &a in &objs {
        let count = cat.hom(a, cat.terminal()).len();
        if count != 1 {
            violations.push(CategoryViolation::TerminalHom { object: a, count });
        }
    }
    for ((l, r), p) in cat.products() {
        for &c in &objs {
            let mut counts: HashMap<(MorId, MorId), usize> = HashMap::new();
            for &h in cat.hom(c, p.object) {
                let key = (cat.compose(p.pr1, h).expect("composable"), cat.compose(p.pr2, h).expect("composable"));
                *counts.entry(key).or_default() += 1;
            }
            for &f in cat.hom(c, l) {
                for &g in cat.hom(c, r) {
                    let candidates = counts.get(&(f, g)).copied().unwrap_or(0);
                    if candidates != 1 {
                        violations.push(CategoryViolation::Tupling { left: l, right: r, test: c, f, g, candidates });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// All morphisms `A → B` in increasing id order.
pub fn hom_set(cat: &FinCategory, a: ObjId, b: ObjId) -> Vec<MorId> {
    cat.hom(a, b).to_vec()
}

/// The unique `h` with `pr1∘h = f` and `pr2∘h = g`.
pub fn tuple(cat: &FinCategory, f: MorId, g: MorId) -> Result<MorId, CategoryError> {
    cat.tuple(f, g)
}
