//! Ground-truth search for equitable colorings under a class predicate, and
//! the arboricity thresholds computed from it.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coloring::{verify, ClassPredicate, Partition};
use crate::dsu::RollbackUnionFind;
use crate::graph::Graph;

/// Per-solve time limit used when the caller does not pick one.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// Largest order [`brute_force_solve`] accepts.
pub const BRUTE_FORCE_MAX_ORDER: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnknownReason {
    Timeout,
    HeuristicFailed,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::Timeout => "TIMEOUT",
            UnknownReason::HeuristicFailed => "HEURISTIC_FAILED",
        })
    }
}

/// Three-valued answer. `Unsat` is only produced by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Partition),
    Unsat,
    Unknown(UnknownReason),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn partition(&self) -> Option<&Partition> {
        match self {
            SolveOutcome::Sat(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(
        "brute force refuses graphs with more than {BRUTE_FORCE_MAX_ORDER} vertices (got {0})"
    )]
    TooLarge(usize),
    #[error("solve for m = {m} ended with {reason}")]
    Undecided { m: usize, reason: UnknownReason },
}

/// Decides whether `g` has an equitable partition into `m >= 1` classes
/// satisfying `pred`.
///
/// Class capacities are fixed up front (`n mod m` classes of size `ceil(n/m)`
/// first, the rest `floor(n/m)`); a vertex may enter only the first empty
/// class of each capacity, which removes the relabeling symmetry. Vertices are
/// tried in descending degree order and acyclicity is tracked with a
/// rollback union-find over all vertices (classes never share a component).
pub fn exact_solve(g: &Graph, m: usize, pred: ClassPredicate, timeout: Duration) -> SolveOutcome {
    exact_solve_until(g, m, pred, Instant::now() + timeout)
}

pub fn exact_solve_until(
    g: &Graph,
    m: usize,
    pred: ClassPredicate,
    deadline: Instant,
) -> SolveOutcome {
    assert!(m >= 1, "class count must be positive");
    let mut search = Search::new(g, m, pred, deadline);
    if search.run(0) {
        let p = Partition::from_zero_based(m, &search.class_of).expect("labels below m");
        let report = verify(g, &p, pred).expect("partition covers g");
        assert!(
            report.is_valid(),
            "exact search produced an invalid partition: {report}"
        );
        SolveOutcome::Sat(p)
    } else if search.timed_out {
        SolveOutcome::Unknown(UnknownReason::Timeout)
    } else {
        SolveOutcome::Unsat
    }
}

const UNASSIGNED: usize = usize::MAX;

struct Search<'g> {
    g: &'g Graph,
    pred: ClassPredicate,
    order: Vec<usize>,
    class_of: Vec<usize>,
    caps: Vec<usize>,
    sizes: Vec<usize>,
    inner_degree: Vec<usize>,
    uf: RollbackUnionFind,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, m: usize, pred: ClassPredicate, deadline: Instant) -> Self {
        let n = g.order();
        let (q, r) = (n / m, n % m);
        let caps = (0..m).map(|c| if c < r { q + 1 } else { q }).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        Search {
            g,
            pred,
            order,
            class_of: vec![UNASSIGNED; n],
            caps,
            sizes: vec![0; m],
            inner_degree: vec![0; n],
            uf: RollbackUnionFind::new(n),
            deadline,
            nodes: 0,
            timed_out: false,
        }
    }

    fn admissible(&self, v: usize, c: usize) -> bool {
        let inside = || {
            self.g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| self.class_of[w] == c)
        };
        match self.pred {
            ClassPredicate::Independent => inside().next().is_none(),
            ClassPredicate::Forest => self.distinct_components(inside()),
            ClassPredicate::DefectiveForest(d) => {
                inside().count() <= d
                    && inside().all(|w| self.inner_degree[w] < d)
                    && self.distinct_components(inside())
            }
        }
    }

    fn distinct_components(&self, nbrs: impl Iterator<Item = usize>) -> bool {
        let mut roots: Vec<usize> = nbrs.map(|w| self.uf.find(w)).collect();
        let k = roots.len();
        roots.sort_unstable();
        roots.dedup();
        roots.len() == k
    }

    fn run(&mut self, idx: usize) -> bool {
        if idx == self.order.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }
        let v = self.order[idx];
        let mut tried_empty: Vec<usize> = Vec::with_capacity(2);
        for c in 0..self.sizes.len() {
            if self.sizes[c] == self.caps[c] {
                continue;
            }
            if self.sizes[c] == 0 {
                if tried_empty.contains(&self.caps[c]) {
                    continue;
                }
                tried_empty.push(self.caps[c]);
            }
            if !self.admissible(v, c) {
                continue;
            }
            let snap = self.uf.snapshot();
            let nbrs: Vec<usize> = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| self.class_of[w] == c)
                .collect();
            for &w in &nbrs {
                self.uf.union(v, w);
                self.inner_degree[w] += 1;
            }
            self.inner_degree[v] = nbrs.len();
            self.class_of[v] = c;
            self.sizes[c] += 1;

            if self.run(idx + 1) {
                return true;
            }

            self.sizes[c] -= 1;
            self.class_of[v] = UNASSIGNED;
            self.inner_degree[v] = 0;
            for &w in &nbrs {
                self.inner_degree[w] -= 1;
            }
            self.uf.rollback(snap);
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// Testing oracle: enumerates every set partition of the vertices into at
/// most `m` blocks (restricted growth strings, so each unlabeled partition is
/// seen once) and keeps the first that [`verify`] accepts. Predicates and
/// equitability do not depend on class labels, so this decides the same
/// question as enumerating all `m^n` labelings.
pub fn brute_force_solve(
    g: &Graph,
    m: usize,
    pred: ClassPredicate,
) -> Result<SolveOutcome, SolveError> {
    let n = g.order();
    if n > BRUTE_FORCE_MAX_ORDER {
        return Err(SolveError::TooLarge(n));
    }
    assert!(m >= 1, "class count must be positive");
    let mut labels = vec![0usize; n];
    fn rec(
        g: &Graph,
        m: usize,
        pred: ClassPredicate,
        labels: &mut Vec<usize>,
        i: usize,
        used: usize,
    ) -> Option<Partition> {
        if i == labels.len() {
            let p = Partition::from_zero_based(m, labels).unwrap();
            return verify(g, &p, pred).unwrap().is_valid().then_some(p);
        }
        for c in 0..m.min(used + 1) {
            labels[i] = c;
            if let Some(p) = rec(g, m, pred, labels, i + 1, used.max(c + 1)) {
                return Some(p);
            }
        }
        None
    }
    Ok(match rec(g, m, pred, &mut labels, 0, 0) {
        Some(p) => SolveOutcome::Sat(p),
        None => SolveOutcome::Unsat,
    })
}

/// Feasibility of every class count `1..=n` and the two thresholds read off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    /// Least `m` with a valid partition.
    pub va_eq: usize,
    /// Least `k` such that every `m` in `k..=n` is feasible.
    pub va_eq_star: usize,
    /// `feasible[m - 1]` for `m = 1..=n`.
    pub feasible: Vec<bool>,
    pub defect: Option<usize>,
}

impl ThresholdReport {
    pub fn feasibility_bits(&self) -> String {
        self.feasible
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

fn solve_decided(
    g: &Graph,
    m: usize,
    pred: ClassPredicate,
    timeout: Duration,
) -> Result<bool, SolveError> {
    match exact_solve(g, m, pred, timeout) {
        SolveOutcome::Sat(_) => Ok(true),
        SolveOutcome::Unsat => Ok(false),
        SolveOutcome::Unknown(reason) => Err(SolveError::Undecided { m, reason }),
    }
}

/// Least `k` with an equitable `k`-partition satisfying `pred`. The empty
/// graph gets 1.
pub fn va_eq(g: &Graph, pred: ClassPredicate, timeout: Duration) -> Result<usize, SolveError> {
    for m in 1..=g.order() {
        if solve_decided(g, m, pred, timeout)? {
            return Ok(m);
        }
    }
    Ok(1)
}

/// Least `k` such that every `m` in `k..=n` is feasible. Scans down from `n`
/// (always feasible: classes of size at most one) to the first infeasible `m`.
pub fn va_eq_star(g: &Graph, pred: ClassPredicate, timeout: Duration) -> Result<usize, SolveError> {
    for m in (1..=g.order()).rev() {
        if !solve_decided(g, m, pred, timeout)? {
            return Ok(m + 1);
        }
    }
    Ok(1)
}

/// Solves every `m` in `1..=n`. Feasibility is not assumed monotone.
pub fn threshold_report(
    g: &Graph,
    pred: ClassPredicate,
    timeout: Duration,
) -> Result<ThresholdReport, SolveError> {
    let feasible = (1..=g.order())
        .map(|m| solve_decided(g, m, pred, timeout))
        .collect::<Result<Vec<bool>, _>>()?;
    let va_eq = feasible.iter().position(|&b| b).map_or(1, |i| i + 1);
    let va_eq_star = feasible.iter().rposition(|&b| !b).map_or(1, |i| i + 2);
    debug_assert!(va_eq <= va_eq_star);
    let defect = match pred {
        ClassPredicate::DefectiveForest(d) => Some(d),
        _ => None,
    };
    Ok(ThresholdReport {
        va_eq,
        va_eq_star,
        feasible,
        defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    const T: Duration = Duration::from_secs(10);

    fn sharpness_3_3() -> Graph {
        Graph::new(
            6,
            [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .chain((3..6).flat_map(|o| (0..3).map(move |k| (k, o)))),
        )
        .unwrap()
    }

    #[test]
    fn exact_examples() {
        let out = exact_solve(&cycle(4), 2, ClassPredicate::Forest, T);
        assert!(out.is_sat());
        assert_eq!(
            exact_solve(&sharpness_3_3(), 2, ClassPredicate::Forest, T),
            SolveOutcome::Unsat
        );
        assert_eq!(
            exact_solve(&complete(4), 1, ClassPredicate::Forest, T),
            SolveOutcome::Unsat
        );
        assert!(exact_solve(&Graph::empty(0), 3, ClassPredicate::Forest, T).is_sat());
        // More classes than vertices: empty classes are fine.
        assert!(exact_solve(&complete(3), 5, ClassPredicate::Independent, T).is_sat());
    }

    /// All equitable 2-partitions of the sharpness graph, enumerated by hand:
    /// one 3-set per choice of class containing vertex 0.
    #[test]
    fn sharpness_3_3_has_no_balanced_split() {
        let g = sharpness_3_3();
        for mask in 0u32..64 {
            if mask.count_ones() != 3 || mask & 1 == 0 {
                continue;
            }
            let labels: Vec<usize> = (0..6)
                .map(|v| if mask >> v & 1 == 1 { 1 } else { 2 })
                .collect();
            let p = Partition::new(2, labels).unwrap();
            assert!(!verify(&g, &p, ClassPredicate::Forest).unwrap().is_valid());
        }
    }

    #[test]
    fn timeout_is_unknown() {
        let g = complete(30);
        let out = exact_solve(&g, 14, ClassPredicate::Forest, Duration::ZERO);
        assert_eq!(out, SolveOutcome::Unknown(UnknownReason::Timeout));
    }

    #[test]
    fn brute_force_examples() {
        assert!(
            brute_force_solve(&Graph::empty(0), 2, ClassPredicate::Forest)
                .unwrap()
                .is_sat()
        );
        assert_eq!(
            brute_force_solve(&complete(3), 1, ClassPredicate::Forest),
            Ok(SolveOutcome::Unsat)
        );
        assert_eq!(
            brute_force_solve(&Graph::empty(11), 2, ClassPredicate::Forest),
            Err(SolveError::TooLarge(11))
        );
    }

    #[test]
    fn arboricity_examples() {
        assert_eq!(va_eq(&path(7), ClassPredicate::Forest, T), Ok(1));
        assert_eq!(va_eq_star(&path(7), ClassPredicate::Forest, T), Ok(1));
        assert_eq!(va_eq(&complete(4), ClassPredicate::Forest, T), Ok(2));
        assert_eq!(va_eq(&star(4), ClassPredicate::Independent, T), Ok(3));
        assert_eq!(
            va_eq_star(&sharpness_3_3(), ClassPredicate::Forest, T),
            Ok(3)
        );
        assert_eq!(va_eq_star(&cycle(5), ClassPredicate::Forest, T), Ok(2));
    }

    #[test]
    fn threshold_report_shape() {
        let r = threshold_report(&sharpness_3_3(), ClassPredicate::Forest, T).unwrap();
        assert_eq!(r.feasibility_bits(), "001111");
        assert_eq!((r.va_eq, r.va_eq_star), (3, 3));
        let r = threshold_report(&star(5), ClassPredicate::DefectiveForest(2), T).unwrap();
        assert_eq!(r.defect, Some(2));
        assert!(r.va_eq <= r.va_eq_star);
    }

    #[test]
    fn star_independent_threshold() {
        for delta in 2..=9usize {
            let g = star(delta);
            let bound = delta.div_ceil(2) + 1;
            for m in 1..=g.order() + 1 {
                let sat = exact_solve(&g, m, ClassPredicate::Independent, T).is_sat();
                assert_eq!(sat, m >= bound, "delta = {delta}, m = {m}");
            }
        }
    }

    fn arb_small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=7).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
                Graph::new(
                    n,
                    pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn exact_agrees_with_brute_force(g in arb_small_graph(), d in 1usize..3) {
            for pred in [ClassPredicate::Forest, ClassPredicate::Independent, ClassPredicate::DefectiveForest(d)] {
                for m in 1..=g.order() {
                    let a = exact_solve(&g, m, pred, T).is_sat();
                    let b = brute_force_solve(&g, m, pred).unwrap().is_sat();
                    prop_assert_eq!(a, b, "m = {}, pred = {}", m, pred);
                }
            }
        }

        #[test]
        fn unit_arboricity_iff_forest(g in arb_small_graph()) {
            let k = va_eq(&g, ClassPredicate::Forest, T).unwrap();
            prop_assert_eq!(k == 1, g.is_forest());
        }
    }
}
