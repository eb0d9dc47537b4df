//! A small finite constraint solver used to confirm uniqueness of mediating
//! morphisms: variables range over explicit finite domains, constraints are
//! unary, binary or ternary predicates on values.
//!
//! Solving runs generalized arc consistency to a fixpoint, then branches on
//! the smallest open domain. Solutions are counted up to a caller limit.

type Pred1<'a> = Box<dyn Fn(usize) -> bool + 'a>;
type Pred2<'a> = Box<dyn Fn(usize, usize) -> bool + 'a>;
type Pred3<'a> = Box<dyn Fn(usize, usize, usize) -> bool + 'a>;

enum Constraint<'a> {
    Binary(usize, usize, Pred2<'a>),
    Ternary(usize, usize, usize, Pred3<'a>),
}

impl Constraint<'_> {
    fn vars(&self) -> Vec<usize> {
        match self {
            Constraint::Binary(a, b, _) => vec![*a, *b],
            Constraint::Ternary(a, b, c, _) => vec![*a, *b, *c],
        }
    }
}

/// Variables with finite value domains and predicates over them.
#[derive(Default)]
pub struct Csp<'a> {
    domains: Vec<Vec<usize>>,
    unary: Vec<(usize, Pred1<'a>)>,
    constraints: Vec<Constraint<'a>>,
}

/// Outcome of a bounded solution count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solutions {
    /// Number of solutions found, capped at the requested limit.
    pub count: usize,
    /// The first solution in search order.
    pub first: Option<Vec<usize>>,
}

impl Solutions {
    pub fn is_unique(&self) -> bool {
        self.count == 1
    }
}

/// Uniqueness of a tabulated solution: how many solutions exist (capped at 2)
/// and whether the first one is the expected table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Uniqueness {
    pub solutions: usize,
    pub matches_expected: bool,
}

impl Uniqueness {
    /// Exactly one solution, and it is the expected one.
    pub fn confirmed(&self) -> bool {
        self.solutions == 1 && self.matches_expected
    }

    pub fn from_solutions(s: &Solutions, expected: &[usize]) -> Self {
        Uniqueness { solutions: s.count, matches_expected: s.first.as_deref() == Some(expected) }
    }
}

impl<'a> Csp<'a> {
    pub fn new() -> Self {
        Csp::default()
    }

    /// Adds a variable ranging over `domain` and returns its index.
    pub fn variable(&mut self, domain: Vec<usize>) -> usize {
        self.domains.push(domain);
        self.domains.len() - 1
    }

    pub fn variable_count(&self) -> usize {
        self.domains.len()
    }

    pub fn unary(&mut self, v: usize, pred: impl Fn(usize) -> bool + 'a) {
        self.unary.push((v, Box::new(pred)));
    }

    /// Pins `v` to `value`.
    pub fn fix(&mut self, v: usize, value: usize) {
        self.unary(v, move |x| x == value);
    }

    pub fn binary(&mut self, a: usize, b: usize, pred: impl Fn(usize, usize) -> bool + 'a) {
        self.constraints.push(Constraint::Binary(a, b, Box::new(pred)));
    }

    pub fn ternary(&mut self, a: usize, b: usize, c: usize, pred: impl Fn(usize, usize, usize) -> bool + 'a) {
        self.constraints.push(Constraint::Ternary(a, b, c, Box::new(pred)));
    }

    /// Counts solutions up to `limit`.
    pub fn solve(&self, limit: usize) -> Solutions {
        let mut domains = self.domains.clone();
        for (v, pred) in &self.unary {
            domains[*v].retain(|x| pred(*x));
        }
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); domains.len()];
        for (i, c) in self.constraints.iter().enumerate() {
            for v in c.vars() {
                watch[v].push(i);
            }
        }
        let mut out = Solutions { count: 0, first: None };
        if limit > 0 && self.propagate(&mut domains, &watch, (0..self.constraints.len()).collect()) {
            self.branch(domains, &watch, limit, &mut out);
        }
        out
    }

    fn branch(&self, domains: Vec<Vec<usize>>, watch: &[Vec<usize>], limit: usize, out: &mut Solutions) {
        let open = (0..domains.len()).filter(|v| domains[*v].len() > 1).min_by_key(|v| domains[*v].len());
        let Some(v) = open else {
            out.count += 1;
            if out.first.is_none() {
                out.first = Some(domains.iter().map(|d| d[0]).collect());
            }
            return;
        };
        for &value in &domains[v] {
            if out.count >= limit {
                return;
            }
            let mut next = domains.clone();
            next[v] = vec![value];
            if self.propagate(&mut next, watch, watch[v].clone()) {
                self.branch(next, watch, limit, out);
            }
        }
    }

    /// Generalized arc consistency from the `pending` constraints; false on a wipe-out.
    fn propagate(&self, domains: &mut [Vec<usize>], watch: &[Vec<usize>], mut pending: Vec<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &i in &pending {
            queued[i] = true;
        }
        while let Some(i) = pending.pop() {
            queued[i] = false;
            let mut changed = Vec::new();
            match &self.constraints[i] {
                Constraint::Binary(a, b, p) => {
                    let (a, b) = (*a, *b);
                    if a == b {
                        let before = domains[a].len();
                        domains[a].retain(|x| p(*x, *x));
                        if domains[a].len() != before {
                            changed.push(a);
                        }
                    } else {
                        let db = domains[b].clone();
                        let before = domains[a].len();
                        domains[a].retain(|x| db.iter().any(|y| p(*x, *y)));
                        if domains[a].len() != before {
                            changed.push(a);
                        }
                        let da = domains[a].clone();
                        let before = domains[b].len();
                        domains[b].retain(|y| da.iter().any(|x| p(*x, *y)));
                        if domains[b].len() != before {
                            changed.push(b);
                        }
                    }
                }
                Constraint::Ternary(a, b, c, p) => {
                    let vars = [*a, *b, *c];
                    for pos in 0..3 {
                        let v = vars[pos];
                        let snapshot: Vec<Vec<usize>> = vars.iter().map(|w| domains[*w].clone()).collect();
                        let supported = |x: usize| {
                            let pick = |k: usize, y: usize| if vars[k] == v { x } else { y };
                            let d0: &[usize] = if vars[0] == v { &[0] } else { &snapshot[0] };
                            let d1: &[usize] = if vars[1] == v { &[0] } else { &snapshot[1] };
                            let d2: &[usize] = if vars[2] == v { &[0] } else { &snapshot[2] };
                            d0.iter().any(|y0| {
                                d1.iter().any(|y1| d2.iter().any(|y2| p(pick(0, *y0), pick(1, *y1), pick(2, *y2))))
                            })
                        };
                        let before = domains[v].len();
                        domains[v].retain(|x| supported(*x));
                        if domains[v].len() != before {
                            changed.push(v);
                        }
                    }
                }
            }
            for v in changed {
                if domains[v].is_empty() {
                    return false;
                }
                for &j in &watch[v] {
                    if !queued[j] {
                        queued[j] = true;
                        pending.push(j);
                    }
                }
            }
        }
        domains.iter().all(|d| !d.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_all_different_pairs() {
        let mut csp = Csp::new();
        let a = csp.variable(vec![0, 1, 2]);
        let b = csp.variable(vec![0, 1, 2]);
        csp.binary(a, b, |x, y| x != y);
        assert_eq!(csp.solve(100).count, 6);
        assert_eq!(csp.solve(2).count, 2);
    }

    #[test]
    fn ternary_sum_is_unique_once_pinned() {
        let mut csp = Csp::new();
        let a = csp.variable((0..5).collect());
        let b = csp.variable((0..5).collect());
        let c = csp.variable((0..5).collect());
        csp.ternary(a, b, c, |x, y, z| x + y == z);
        csp.fix(a, 2);
        csp.fix(c, 4);
        let s = csp.solve(2);
        assert!(s.is_unique());
        assert_eq!(s.first, Some(vec![2, 2, 4]));
    }

    #[test]
    fn wipe_out_has_no_solution() {
        let mut csp = Csp::new();
        let a = csp.variable(vec![0, 1]);
        csp.unary(a, |x| x > 5);
        assert_eq!(csp.solve(2).count, 0);
    }

    #[test]
    fn repeated_variable_in_ternary() {
        let mut csp = Csp::new();
        let a = csp.variable((0..4).collect());
        let b = csp.variable((0..4).collect());
        csp.ternary(a, a, b, |x, y, z| x * y == z);
        assert_eq!(csp.solve(100).count, 2);
    }
}
