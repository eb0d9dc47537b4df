//! Single-table mutations of a doctrine, for measuring how well the law
//! checkers detect corrupted structure.

use std::fmt;

use crate::fincat::{MorId, ObjId};

use super::Doctrine;

/// The table a mutation rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutationSite {
    Reindex(MorId),
    Top(ObjId),
    Bottom(ObjId),
    Meet(ObjId),
    Join(ObjId),
    Imp(ObjId),
    Delta(ObjId),
    Exists(ObjId, ObjId),
    Forall(ObjId, ObjId),
}

/// One entry of one table replaced by a different in-range value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mutation {
    pub site: MutationSite,
    pub entry: usize,
    pub value: usize,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}] := {}", self.site, self.entry, self.value)
    }
}

impl Mutation {
    /// The mutated copy; `None` when the site does not exist in `d`.
    pub fn apply(&self, d: &Doctrine) -> Option<Doctrine> {
        let mut out = d.clone();
        let slot: &mut usize = match self.site {
            MutationSite::Reindex(f) => out.reindex.get_mut(f.index())?.table.get_mut(self.entry)?,
            MutationSite::Top(a) => out.fibers.get_mut(a.index())?.ops.top.as_mut()?,
            MutationSite::Bottom(a) => out.fibers.get_mut(a.index())?.ops.bottom.as_mut()?,
            MutationSite::Meet(a) => out.fibers.get_mut(a.index())?.ops.meet.as_mut()?.get_mut(self.entry)?,
            MutationSite::Join(a) => out.fibers.get_mut(a.index())?.ops.join.as_mut()?.get_mut(self.entry)?,
            MutationSite::Imp(a) => out.fibers.get_mut(a.index())?.ops.imp.as_mut()?.get_mut(self.entry)?,
            MutationSite::Delta(a) => out.delta.get_mut(&a)?,
            MutationSite::Exists(c, b) => out.exists.get_mut(&(c, b))?.table.get_mut(self.entry)?,
            MutationSite::Forall(c, b) => out.forall.get_mut(&(c, b))?.table.get_mut(self.entry)?,
        };
        *slot = self.value;
        Some(out)
    }
}

/// A deterministic set of single-entry mutations covering every kind of table.
///
/// Each fiber's lattice tables, every `δ` and every quantifier table get one
/// mutation; reindexing maps are sampled so that at most `max_reindex` of them
/// are hit. The new value is the old one plus one, modulo the fiber size, so
/// fibers with one element are never mutated.
pub fn single_table_mutations(d: &Doctrine, max_reindex: usize) -> Vec<Mutation> {
    let cat = &d.base;
    let mut out = Vec::new();
    let bump = |v: usize, n: usize| (n > 1).then(|| (v + 1) % n);
    let mut push = |site: MutationSite, entry: usize, old: usize, n: usize| {
        if let Some(value) = bump(old, n) {
            out.push(Mutation { site, entry, value });
        }
    };
    let candidates: Vec<MorId> = cat.morphisms().filter(|f| d.fiber(cat.cod(*f)).len() > 1).collect();
    let stride = candidates.len().div_ceil(max_reindex.max(1)).max(1);
    for f in candidates.into_iter().step_by(stride) {
        let table = &d.reindex[f.index()].table;
        let entry = f.index() % table.len();
        push(MutationSite::Reindex(f), entry, table[entry], d.fiber(cat.dom(f)).len());
    }
    for a in cat.objects() {
        let fiber = d.fiber(a);
        let n = fiber.len();
        let ops = &fiber.ops;
        if let Some(t) = ops.top {
            push(MutationSite::Top(a), 0, t, n);
        }
        if let Some(b) = ops.bottom {
            push(MutationSite::Bottom(a), 0, b, n);
        }
        for (site, table) in
            [(MutationSite::Meet(a), &ops.meet), (MutationSite::Join(a), &ops.join), (MutationSite::Imp(a), &ops.imp)]
        {
            if let Some(t) = table {
                let entry = t.len() / 2;
                push(site, entry, t[entry], n);
            }
        }
    }
    for (&a, &e) in &d.delta {
        if let Some(p) = cat.product(a, a) {
            push(MutationSite::Delta(a), 0, e, d.fiber(p.object).len());
        }
    }
    for (&(c, b), q) in &d.exists {
        let entry = q.table.len() / 2;
        push(MutationSite::Exists(c, b), entry, q.table[entry], d.fiber(c).len());
    }
    for (&(c, b), q) in &d.forall {
        let entry = q.table.len() / 2;
        push(MutationSite::Forall(c, b), entry, q.table[entry], d.fiber(c).len());
    }
    out
}
