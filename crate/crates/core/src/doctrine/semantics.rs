use std::fmt;

use crate::fincat::{MorId, ObjId};

use super::{Doctrine, DoctrineError};

/// Witness search for one `σ ∈ P(A)`: the least `d : 𝐭 → A` with `∃σ ≤ P(d)σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichEntry {
    pub object: ObjId,
    pub element: usize,
    pub witness: Option<MorId>,
    /// Whether the witnessing inequality is an equality.
    pub equality: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RichReport {
    pub entries: Vec<RichEntry>,
    /// Objects `A` lacking `∃` over the chosen `𝐭×A`.
    pub missing_quantifier: Vec<ObjId>,
    /// Objects with no arrow from the terminal.
    pub empty_hom: Vec<ObjId>,
}

impl RichReport {
    pub fn is_rich(&self) -> bool {
        self.missing_quantifier.is_empty() && self.entries.iter().all(|e| e.witness.is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RichEntry> + '_ {
        self.entries.iter().filter(|e| e.witness.is_none())
    }

    /// Every found witness satisfies the inequality as an equality.
    pub fn witnesses_are_equalities(&self) -> bool {
        self.entries.iter().filter(|e| e.witness.is_some()).all(|e| e.equality)
    }
}

/// `∃^A_𝐭 σ`, computed as `∃` over `𝐭×A` of `P(pr2)σ`.
pub(crate) fn exists_to_terminal(d: &Doctrine, a: ObjId, sigma: usize) -> Option<usize> {
    let t = d.base.terminal();
    let p = d.base.product(t, a)?;
    let q = d.exists.get(&(t, a))?;
    Some(q.apply(d.reindex_elem(p.pr2, sigma)))
}

fn rich_entry(d: &Doctrine, a: ObjId, sigma: usize) -> Option<RichEntry> {
    let e = exists_to_terminal(d, a, sigma)?;
    let top = d.terminal_fiber();
    let witness = d.base.hom(d.base.terminal(), a).iter().copied().find(|c| top.leq(e, d.reindex_elem(*c, sigma)));
    let equality = witness.is_some_and(|c| d.reindex_elem(c, sigma) == e);
    Some(RichEntry { object: a, element: sigma, witness, equality })
}

/// Richness over every object and element.
pub fn check_rich(d: &Doctrine) -> RichReport {
    let targets: Vec<(ObjId, usize)> =
        d.base.objects().flat_map(|a| (0..d.fiber(a).len()).map(move |x| (a, x))).collect();
    check_rich_for(d, &targets)
}

/// Richness restricted to the listed `(A, σ)`.
pub fn check_rich_for(d: &Doctrine, targets: &[(ObjId, usize)]) -> RichReport {
    let mut report = RichReport::default();
    for &(a, sigma) in targets {
        match rich_entry(d, a, sigma) {
            Some(entry) => report.entries.push(entry),
            None => {
                if !report.missing_quantifier.contains(&a) {
                    report.missing_quantifier.push(a);
                }
            }
        }
        if d.base.hom(d.base.terminal(), a).is_empty() && !report.empty_hom.contains(&a) {
            report.empty_hom.push(a);
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Consistency {
    Inconsistent,
    Consistent,
    TwoValued,
}

impl Consistency {
    pub fn is_consistent(self) -> bool {
        self != Consistency::Inconsistent
    }

    pub fn name(self) -> &'static str {
        match self {
            Consistency::Inconsistent => "inconsistent",
            Consistency::Consistent => "consistent",
            Consistency::TwoValued => "two_valued",
        }
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Consistency of the terminal fiber, with the four equivalent predicates when it is bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub status: Consistency,
    /// A pair `a ≰ b`, the two-valued one when there is one.
    pub separating: Option<(usize, usize)>,
    /// `[not a singleton, ⊤ ≰ ⊥, consistent, two-valued]`, present when the terminal fiber is bounded.
    pub equivalents: Option<[bool; 4]>,
}

impl ConsistencyReport {
    /// False only when the fiber is bounded and the four predicates disagree.
    pub fn equivalents_agree(&self) -> bool {
        self.equivalents.is_none_or(|v| v.iter().all(|b| *b == v[0]))
    }
}

/// Decides consistency and two-valuedness by scanning the terminal fiber.
pub fn consistency_status(d: &Doctrine) -> ConsistencyReport {
    let fiber = d.terminal_fiber();
    let n = fiber.len();
    let mut first = None;
    let mut two_valued = None;
    for a in 0..n {
        for b in 0..n {
            if fiber.leq(a, b) {
                continue;
            }
            first.get_or_insert((a, b));
            if two_valued.is_none() && (0..n).all(|c| fiber.leq(a, c) || fiber.leq(b, c)) {
                two_valued = Some((a, b));
            }
        }
    }
    let status = match (first, two_valued) {
        (None, _) => Consistency::Inconsistent,
        (Some(_), None) => Consistency::Consistent,
        (Some(_), Some(_)) => Consistency::TwoValued,
    };
    let equivalents = match (fiber.ops.top, fiber.ops.bottom) {
        (Some(top), Some(bot)) => Some([n > 1, !fiber.leq(top, bot), first.is_some(), two_valued.is_some()]),
        _ => None,
    };
    ConsistencyReport { status, separating: two_valued.or(first), equivalents }
}

/// Search for `ε : B → A` with `∃^A_B α = P(⟨id_B, ε⟩)α` for one `α ∈ P(B×A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonEntry {
    pub context: ObjId,
    pub object: ObjId,
    pub element: usize,
    pub witness: Option<MorId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EpsilonReport {
    pub entries: Vec<EpsilonEntry>,
    /// Whether the condition restricted to `B = 𝐭` holds.
    pub terminal_condition: bool,
    /// Whether that restriction agrees with [`check_rich`].
    pub agrees_with_rich: bool,
}

impl EpsilonReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }
}

/// Searches an ε-witness for every `∃` table entry.
pub fn check_epsilon_operator(d: &Doctrine) -> Result<EpsilonReport, DoctrineError> {
    let cat = &d.base;
    let mut report = EpsilonReport::default();
    for (&(b, a), q) in &d.exists {
        let p = *cat.require_product(b, a)?;
        let pairs: Vec<MorId> =
            cat.hom(b, a).iter().map(|eps| cat.tuple(cat.identity(b), *eps)).collect::<Result<_, _>>()?;
        for alpha in 0..d.fiber(p.object).len() {
            let target = q.apply(alpha);
            let witness =
                pairs.iter().position(|pair| d.reindex_elem(*pair, alpha) == target).map(|i| cat.hom(b, a)[i]);
            report.entries.push(EpsilonEntry { context: b, object: a, element: alpha, witness });
        }
    }
    let t = cat.terminal();
    let covers_all = cat.objects().all(|a| d.exists.contains_key(&(t, a)));
    report.terminal_condition =
        covers_all && report.entries.iter().filter(|e| e.context == t).all(|e| e.witness.is_some());
    report.agrees_with_rich = report.terminal_condition == check_rich(d).is_rich();
    Ok(report)
}
