use std::collections::BTreeSet;

use super::lattice::Fiber;
use super::poset::OrderError;

/// A subset of a fiber that contains `⊤` and is upward closed and meet closed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter {
    members: BTreeSet<usize>,
}

/// Properness, ultra and maximality of a filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterClass {
    pub proper: bool,
    pub ultra: bool,
    pub maximal: bool,
}

impl Filter {
    /// Checks the filter axioms against `fiber`.
    pub fn new(fiber: &Fiber, members: impl IntoIterator<Item = usize>) -> Result<Self, OrderError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&a) = members.iter().find(|a| **a >= fiber.len()) {
            return Err(OrderError::OutOfRange(a));
        }
        let top = fiber.top()?;
        if !members.contains(&top) {
            return Err(OrderError::NotAFilter(format!("`{}` (top) is missing", fiber.name(top))));
        }
        for &a in &members {
            if let Some(b) = fiber.poset.elements().find(|b| fiber.leq(a, *b) && !members.contains(b)) {
                return Err(OrderError::NotAFilter(format!(
                    "not upward closed: `{}` ≤ `{}`",
                    fiber.name(a),
                    fiber.name(b)
                )));
            }
            for &b in &members {
                let m = fiber.meet(a, b)?;
                if !members.contains(&m) {
                    return Err(OrderError::NotAFilter(format!(
                        "not meet closed: `{}` ∧ `{}`",
                        fiber.name(a),
                        fiber.name(b)
                    )));
                }
            }
        }
        Ok(Filter { members })
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_whole(&self, fiber: &Fiber) -> bool {
        self.members.len() == fiber.len()
    }

    pub fn is_subset(&self, other: &Filter) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Member names, in id order.
    pub fn names(&self, fiber: &Fiber) -> Vec<String> {
        self.members.iter().map(|a| fiber.name(*a).to_string()).collect()
    }
}

/// The least filter containing `gens`: `{⊤} ∪ {y | some finite meet of gens ≤ y}`.
pub fn generated_filter(fiber: &Fiber, gens: &[usize]) -> Result<Filter, OrderError> {
    if let Some(&a) = gens.iter().find(|a| **a >= fiber.len()) {
        return Err(OrderError::OutOfRange(a));
    }
    let floor = fiber.meet_all(gens.iter().copied())?;
    let members = fiber.poset.elements().filter(|y| fiber.leq(floor, *y)).collect();
    Ok(Filter { members })
}

fn is_proper(fiber: &Fiber, filter: &Filter) -> bool {
    match fiber.ops.bottom {
        Some(bot) => !filter.contains(bot),
        None => !filter.is_whole(fiber),
    }
}

/// Classifies a filter; maximality is decided by searching strictly larger filters.
pub fn classify_filter(fiber: &Fiber, filter: &Filter) -> Result<FilterClass, OrderError> {
    Filter::new(fiber, filter.members())?;
    let proper = is_proper(fiber, filter);
    // Exactly one of `a`, `¬a` per element; taking `a = ⊤` makes every ultrafilter proper.
    let mut ultra = true;
    for a in fiber.poset.elements() {
        if filter.contains(a) == filter.contains(fiber.neg(a)?) {
            ultra = false;
        }
    }
    let mut maximal = proper;
    if proper {
        for a in fiber.poset.elements().filter(|a| !filter.contains(*a)) {
            let mut gens: Vec<usize> = filter.members().collect();
            gens.push(a);
            if !generated_filter(fiber, &gens)?.is_whole(fiber) {
                maximal = false;
                break;
            }
        }
    }
    Ok(FilterClass { proper, ultra, maximal })
}

/// Greedy extension in id order: add `a` when `⟨F ∪ {a}⟩` stays proper, else `¬a`.
pub fn extend_to_ultrafilter(fiber: &Fiber, filter: &Filter) -> Result<Filter, OrderError> {
    if !is_proper(fiber, filter) {
        return Err(OrderError::Improper);
    }
    let mut current = filter.clone();
    loop {
        let mut changed = false;
        for a in fiber.poset.elements() {
            if current.contains(a) {
                continue;
            }
            let mut gens: Vec<usize> = current.members().collect();
            gens.push(a);
            let candidate = generated_filter(fiber, &gens)?;
            if is_proper(fiber, &candidate) {
                current = candidate;
                changed = true;
                continue;
            }
            let na = fiber.neg(a)?;
            if !current.contains(na) {
                gens.pop();
                gens.push(na);
                current = generated_filter(fiber, &gens)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// Every filter of a fiber with at most 16 elements, by subset enumeration.
pub fn enumerate_filters(fiber: &Fiber) -> Result<Vec<Filter>, OrderError> {
    let n = fiber.len();
    if n > 16 {
        return Err(OrderError::TooLarge(n));
    }
    let top = fiber.top()?;
    let up: Vec<u32> = (0..n).map(|a| (0..n).filter(|b| fiber.leq(a, *b)).fold(0u32, |m, b| m | (1 << b))).collect();
    let mut meets = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            meets[a * n + b] = fiber.meet(a, b)?;
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask & (1 << top) == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|a| mask & (1 << a) != 0).collect();
        let upward = members.iter().all(|a| up[*a] & !mask == 0);
        let closed = upward && members.iter().all(|a| members.iter().all(|b| mask & (1 << meets[a * n + b]) != 0));
        if closed {
            out.push(Filter { members: members.into_iter().collect() });
        }
    }
    Ok(out)
}
