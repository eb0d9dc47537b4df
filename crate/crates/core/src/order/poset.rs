use thiserror::Error;

/// Errors from order-theoretic operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("relation table has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("relation is not transitive: `{0}` ≤ `{1}` ≤ `{2}`")]
    NotTransitive(String, String, String),
    #[error("relation is not antisymmetric: `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("missing lattice operation `{0}`")]
    MissingOperation(&'static str),
    #[error("subset is not a filter: {0}")]
    NotAFilter(String),
    #[error("filter is improper")]
    Improper,
    #[error("fiber has {0} elements, more than the enumeration limit of 16")]
    TooLarge(usize),
}

/// A finite partial order on `0..len()`, with element names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl FinPoset {
    /// Validates that `leq` (row-major, `leq[a*n+b]` means `a ≤ b`) is a partial order.
    pub fn new(names: Vec<String>, leq: Vec<bool>) -> Result<Self, OrderError> {
        let n = names.len();
        let pre = Preorder::new(n, leq)?;
        for a in 0..n {
            for b in 0..n {
                if a != b && pre.leq(a, b) && pre.leq(b, a) {
                    return Err(OrderError::NotAntisymmetric(names[a].clone(), names[b].clone()));
                }
            }
        }
        if let Err(e) = pre.check() {
            return Err(match e {
                PreorderDefect::Reflexive(a) => OrderError::NotReflexive(names[a].clone()),
                PreorderDefect::Transitive(a, b, c) => {
                    OrderError::NotTransitive(names[a].clone(), names[b].clone(), names[c].clone())
                }
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(OrderError::DuplicateName(name.clone()));
            }
        }
        Ok(FinPoset { names, leq: pre.rel })
    }

    /// The reflexive-transitive closure of `covers` (pairs `a ≤ b`), which must be antisymmetric.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrderError::OutOfRange(a.max(b)));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        FinPoset::new(names, leq)
    }

    /// The chain `names[0] < names[1] < …`.
    pub fn chain(names: Vec<String>) -> Self {
        let n = names.len();
        let leq = (0..n * n).map(|i| i / n <= i % n).collect();
        FinPoset::new(names, leq).expect("a chain is a partial order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.names.len() + b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    /// All pairs `a ≤ b` in row-major order.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n * n).filter(|i| self.leq[*i]).map(|i| (i / n, i % n)).collect()
    }

    /// The sub-poset on `keep` (in the given order), with inherited names.
    pub fn restrict(&self, keep: &[usize]) -> FinPoset {
        let names = keep.iter().map(|a| self.names[*a].clone()).collect();
        let leq = keep.iter().flat_map(|a| keep.iter().map(move |b| (*a, *b))).map(|(a, b)| self.leq(a, b)).collect();
        FinPoset { names, leq }
    }

    /// Same order with new names.
    pub fn renamed(&self, names: Vec<String>) -> Result<FinPoset, OrderError> {
        FinPoset::new(names, self.leq.clone())
    }
}

/// A reflexive, transitive relation on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    n: usize,
    rel: Vec<bool>,
}

enum PreorderDefect {
    Reflexive(usize),
    Transitive(usize, usize, usize),
}

impl Preorder {
    pub fn new(n: usize, rel: Vec<bool>) -> Result<Self, OrderError> {
        if rel.len() != n * n {
            return Err(OrderError::BadShape { expected: n * n, got: rel.len() });
        }
        Ok(Preorder { n, rel })
    }

    /// Builds the relation from a predicate; nothing is checked until use.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let rel = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Preorder { n, rel }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.n + b]
    }

    fn check(&self) -> Result<(), PreorderDefect> {
        let n = self.n;
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(PreorderDefect::Reflexive(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(PreorderDefect::Transitive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A table-backed order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(table: Vec<usize>) -> Self {
        MonotoneMap { table }
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { table: (0..n).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> MonotoneMap {
        MonotoneMap { table: first.table.iter().map(|a| self.table[*a]).collect() }
    }

    /// Whether the table is in range and order preserving between the given posets.
    pub fn is_monotone(&self, source: &FinPoset, target: &FinPoset) -> bool {
        self.table.len() == source.len()
            && self.table.iter().all(|b| *b < target.len())
            && source.leq_pairs().into_iter().all(|(a, b)| target.leq(self.table[a], self.table[b]))
    }

    /// First pair `a ≤ b` whose images are not ordered.
    pub fn monotonicity_failure(&self, source: &FinPoset, target: &FinPoset) -> Option<(usize, usize)> {
        source.leq_pairs().into_iter().find(|&(a, b)| !target.leq(self.table[a], self.table[b]))
    }
}

/// Result of reflecting a preorder into a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub poset: FinPoset,
    /// Surjective monotone quotient map.
    pub quotient: MonotoneMap,
    /// Least element id of each class.
    pub representatives: Vec<usize>,
}

/// Quotients a preorder by mutual relatedness; classes are named after their least member.
pub fn poset_reflection(pre: &Preorder, names: &[String]) -> Result<Reflection, OrderError> {
    if names.len() != pre.len() {
        return Err(OrderError::BadShape { expected: pre.len(), got: names.len() });
    }
    if let Err(e) = pre.check() {
        return Err(match e {
            PreorderDefect::Reflexive(a) => OrderError::NotReflexive(names[a].clone()),
            PreorderDefect::Transitive(a, b, c) => {
                OrderError::NotTransitive(names[a].clone(), names[b].clone(), names[c].clone())
            }
        });
    }
    let n = pre.len();
    let mut class = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for a in 0..n {
        if class[a] != usize::MAX {
            continue;
        }
        let k = representatives.len();
        representatives.push(a);
        for (b, slot) in class.iter_mut().enumerate().skip(a) {
            if pre.leq(a, b) && pre.leq(b, a) {
                *slot = k;
            }
        }
    }
    let k = representatives.len();
    let leq = (0..k * k).map(|i| pre.leq(representatives[i / k], representatives[i % k])).collect();
    let poset = FinPoset::new(representatives.iter().map(|r| names[*r].clone()).collect(), leq)?;
    Ok(Reflection { poset, quotient: MonotoneMap::new(class), representatives })
}
