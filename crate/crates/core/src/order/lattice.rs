use super::poset::{FinPoset, OrderError};

/// Optional lattice structure on a finite poset; binary tables are row-major `n×n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeOps {
    pub top: Option<usize>,
    pub bottom: Option<usize>,
    pub meet: Option<Vec<usize>>,
    pub join: Option<Vec<usize>>,
    /// Relative pseudo-complement `a → b`.
    pub imp: Option<Vec<usize>>,
}

/// Computes every lattice operation that exists for all arguments.
pub fn derive_lattice_ops(p: &FinPoset) -> LatticeOps {
    let n = p.len();
    let top = (0..n).find(|t| (0..n).all(|a| p.leq(a, *t)));
    let bottom = (0..n).find(|b| (0..n).all(|a| p.leq(*b, a)));
    let bound = |lower: bool| -> Option<Vec<usize>> {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let is_bound = |c: usize| if lower { p.leq(c, a) && p.leq(c, b) } else { p.leq(a, c) && p.leq(b, c) };
                let best = (0..n).filter(|c| is_bound(*c)).find(|c| {
                    (0..n).filter(|d| is_bound(*d)).all(|d| if lower { p.leq(d, *c) } else { p.leq(*c, d) })
                })?;
                table.push(best);
            }
        }
        Some(table)
    };
    let meet = bound(true);
    let join = bound(false);
    let imp = meet.as_ref().and_then(|m| {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let ok = |c: usize| p.leq(m[c * n + a], b);
                let best = (0..n).filter(|c| ok(*c)).find(|c| (0..n).filter(|d| ok(*d)).all(|d| p.leq(d, *c)))?;
                table.push(best);
            }
        }
        Some(table)
    });
    LatticeOps { top, bottom, meet, join, imp }
}

/// A fiber: a finite poset together with whatever lattice structure it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub poset: FinPoset,
    pub ops: LatticeOps,
}

impl Fiber {
    pub fn new(poset: FinPoset, ops: LatticeOps) -> Self {
        Fiber { poset, ops }
    }

    /// The poset with all derivable operations.
    pub fn derived(poset: FinPoset) -> Self {
        let ops = derive_lattice_ops(&poset);
        Fiber { poset, ops }
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn name(&self, a: usize) -> &str {
        self.poset.name(a)
    }

    pub fn top(&self) -> Result<usize, OrderError> {
        self.ops.top.ok_or(OrderError::MissingOperation("top"))
    }

    pub fn bottom(&self) -> Result<usize, OrderError> {
        self.ops.bottom.ok_or(OrderError::MissingOperation("bottom"))
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize, OrderError> {
        let n = self.len();
        self.ops.meet.as_ref().map(|t| t[a * n + b]).ok_or(OrderError::MissingOperation("meet"))
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize, OrderError> {
        let n = self.len();
        self.ops.join.as_ref().map(|t| t[a * n + b]).ok_or(OrderError::MissingOperation("join"))
    }

    pub fn imp(&self, a: usize, b: usize) -> Result<usize, OrderError> {
        let n = self.len();
        self.ops.imp.as_ref().map(|t| t[a * n + b]).ok_or(OrderError::MissingOperation("imp"))
    }

    /// `¬a ≔ a → ⊥`.
    pub fn neg(&self, a: usize) -> Result<usize, OrderError> {
        self.imp(a, self.bottom()?)
    }

    /// Meet of a finite family; the empty meet is `⊤`.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> Result<usize, OrderError> {
        items.into_iter().try_fold(self.top()?, |acc, x| self.meet(acc, x))
    }

    /// Whether the operations the fiber declares are in range.
    pub fn ops_in_range(&self) -> bool {
        let n = self.len();
        let unary = |x: &Option<usize>| x.is_none_or(|v| v < n);
        let binary = |x: &Option<Vec<usize>>| x.as_ref().is_none_or(|t| t.len() == n * n && t.iter().all(|v| *v < n));
        unary(&self.ops.top)
            && unary(&self.ops.bottom)
            && binary(&self.ops.meet)
            && binary(&self.ops.join)
            && binary(&self.ops.imp)
    }
}
