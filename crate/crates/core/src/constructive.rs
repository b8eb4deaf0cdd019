//! Constructive equitable tree-coloring.
//!
//! The pipeline pads the graph with isolated vertices up to a multiple of
//! `m`, peels minimum-degree vertices, and puts them back one at a time:
//!
//! 1. a vertex goes straight into a smallest class where it closes no cycle,
//!    preferring classes holding at most one of its neighbors;
//! 2. otherwise a relay of depth one or two is tried: the vertex displaces
//!    some `u` from a class, `u` moves on (possibly displacing one more
//!    vertex) and the chain ends in a smallest class;
//! 3. otherwise the exchange step: with `V1'` a smallest class, find
//!    `z in V1'` with two non-adjacent neighbors `y1, y2` that each have
//!    exactly two neighbors in `V1'`. Then `V1' + {y1, y2} - {z}` is a forest,
//!    the rest of the graph (with `z` and the new vertex) is colored with
//!    `m - 1` classes recursively, and the two are combined.
//!
//! None of these steps is complete, so when they run out the caller falls
//! back to [`exact_solve_until`] on the unpadded graph.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{verify, ClassPredicate, Partition};
use crate::exact::{exact_solve_until, SolveOutcome, UnknownReason};
use crate::graph::{Graph, InducedSubgraph};

/// Fraction of the time budget spent on the constructive attempt before the
/// exact fallback takes over.
pub const CONSTRUCTIVE_SHARE: f64 = 0.7;

/// Exchange triples tried per failed reinsertion.
const MAX_EXCHANGE_TRIPLES: usize = 4;

/// One step of a coloring trace. Class numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Move {
    Place {
        vertex: usize,
        class: usize,
    },
    Transfer {
        vertex: usize,
        from: usize,
        to: usize,
    },
    /// The exchange step. `lifted` is the complete assignment of every placed
    /// vertex right after the lift, so replay does not need the sub-solve.
    Exchange {
        z: usize,
        y1: usize,
        y2: usize,
        depth: usize,
        lifted: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("move {index}: vertex {vertex} is out of range")]
    OutOfRange { index: usize, vertex: usize },
    #[error("move {index}: vertex {vertex} is already placed")]
    AlreadyPlaced { index: usize, vertex: usize },
    #[error("move {index}: vertex {vertex} is not in class {expected}")]
    WrongSource {
        index: usize,
        vertex: usize,
        expected: usize,
    },
    #[error("move {index}: class {class} no longer induces a forest")]
    CycleCreated { index: usize, class: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveTrace {
    moves: Vec<Move>,
}

impl MoveTrace {
    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays the moves on `n` initially unplaced vertices and returns the
    /// 1-based class of each vertex.
    pub fn replay(&self, n: usize) -> Result<Vec<Option<usize>>, ReplayError> {
        self.replay_inner(n, None)
    }

    /// Like [`MoveTrace::replay`], but also checks after every move that the
    /// classes it touched induce forests in `g`.
    pub fn replay_checked(&self, g: &Graph) -> Result<Vec<Option<usize>>, ReplayError> {
        self.replay_inner(g.order(), Some(g))
    }

    fn replay_inner(&self, n: usize, g: Option<&Graph>) -> Result<Vec<Option<usize>>, ReplayError> {
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        for (index, mv) in self.moves.iter().enumerate() {
            let range = |vertex: usize| {
                if vertex < n {
                    Ok(())
                } else {
                    Err(ReplayError::OutOfRange { index, vertex })
                }
            };
            let touched: Vec<usize> = match mv {
                &Move::Place { vertex, class } => {
                    range(vertex)?;
                    if class_of[vertex].is_some() {
                        return Err(ReplayError::AlreadyPlaced { index, vertex });
                    }
                    class_of[vertex] = Some(class);
                    vec![class]
                }
                &Move::Transfer { vertex, from, to } => {
                    range(vertex)?;
                    if class_of[vertex] != Some(from) {
                        return Err(ReplayError::WrongSource {
                            index,
                            vertex,
                            expected: from,
                        });
                    }
                    class_of[vertex] = Some(to);
                    vec![to]
                }
                Move::Exchange { lifted, .. } => {
                    for &(vertex, class) in lifted {
                        range(vertex)?;
                        class_of[vertex] = Some(class);
                    }
                    let mut classes: Vec<usize> = lifted.iter().map(|&(_, c)| c).collect();
                    classes.sort_unstable();
                    classes.dedup();
                    classes
                }
            };
            if let Some(g) = g {
                for class in touched {
                    let members: Vec<usize> =
                        (0..n).filter(|&v| class_of[v] == Some(class)).collect();
                    if !g
                        .induced_subgraph(&members)
                        .expect("in range")
                        .graph
                        .is_forest()
                    {
                        return Err(ReplayError::CycleCreated { index, class });
                    }
                }
            }
        }
        Ok(class_of)
    }
}

/// Adds `(m - n mod m) mod m` isolated vertices so the order becomes a
/// multiple of `m`. The new vertices get the highest ids.
pub fn pad_to_multiple(g: &Graph, m: usize) -> (Graph, usize) {
    assert!(m >= 1, "class count must be positive");
    let pad = (m - g.order() % m) % m;
    (g.with_isolated(pad), pad)
}

/// Inverse of [`pad_to_multiple`] on colorings: drops the padding vertices.
pub fn strip_padding(p: &Partition, original_order: usize) -> Partition {
    p.truncated(original_order)
}

/// How [`Configuration::reinsert_vertex`] placed a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reinsertion {
    Direct,
    /// A relay displacing this many vertices (1 or 2).
    Relay(usize),
    /// No direct placement and no admissible relay of depth at most two.
    HeuristicFailed,
}

/// Where the exchange step is attempted: the vertex `x` being colored, an
/// edge `x x1` into the first class (if `x` has a neighbor there), and the
/// first class itself (1-based). `x` is either unplaced or a member of the
/// first class; `V1'` is the first class without `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExchangeSite {
    pub x: usize,
    pub x1: Option<usize>,
    pub first_class: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("x must be unplaced or in the first class")]
    InvalidSite,
    #[error("({z}, {y1}, {y2}) is not an exchange triple for this site")]
    InvalidTriple { z: usize, y1: usize, y2: usize },
    #[error("V1' + {{y1, y2}} - {{z}} does not induce a forest")]
    FirstClassNotForest,
    #[error("sub-coloring is not a verified equitable tree-{expected}-coloring of G'")]
    SubColoringInvalid { expected: usize },
    #[error("lifted coloring is not equitable")]
    NotEquitable,
}

#[derive(Debug, Default)]
struct Scratch {
    stamp: u64,
    in_set: Vec<u64>,
    visited: Vec<u64>,
    queue: VecDeque<usize>,
}

/// A partial equitable tree-coloring being grown on a fixed graph, together
/// with the moves that produced it.
#[derive(Debug)]
pub struct Configuration<'g> {
    graph: &'g Graph,
    m: usize,
    depth: usize,
    /// 0-based class per vertex.
    class_of: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    trace: MoveTrace,
    scratch: RefCell<Scratch>,
}

impl<'g> Configuration<'g> {
    /// All vertices unplaced, `m` empty classes.
    pub fn new(graph: &'g Graph, m: usize) -> Self {
        assert!(m >= 1, "class count must be positive");
        let n = graph.order();
        Configuration {
            graph,
            m,
            depth: 0,
            class_of: vec![None; n],
            members: vec![Vec::new(); m],
            trace: MoveTrace::default(),
            scratch: RefCell::new(Scratch {
                stamp: 0,
                in_set: vec![0; n],
                visited: vec![0; n],
                queue: VecDeque::new(),
            }),
        }
    }

    /// Starts from an existing assignment without checking it, so that a
    /// coloring of `G - x x1` can be examined on `G`.
    pub fn from_partition(graph: &'g Graph, p: &Partition) -> Self {
        assert_eq!(p.len(), graph.order(), "partition must cover the graph");
        let mut cfg = Configuration::new(graph, p.m());
        for v in 0..p.len() {
            let c = p.class_of(v) - 1;
            cfg.class_of[v] = Some(c);
            cfg.members[c].push(v);
        }
        cfg
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// 1-based class of `v`, if placed.
    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.class_of[v].map(|c| c + 1)
    }

    /// Members of a 1-based class.
    pub fn class_members(&self, class: usize) -> &[usize] {
        &self.members[class - 1]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn trace(&self) -> &MoveTrace {
        &self.trace
    }

    pub fn into_trace(self) -> MoveTrace {
        self.trace
    }

    /// The coloring, once every vertex is placed.
    pub fn partition(&self) -> Option<Partition> {
        let labels: Option<Vec<usize>> = self.class_of.iter().copied().collect();
        labels.map(|l| Partition::from_zero_based(self.m, &l).expect("labels below m"))
    }

    /// `e(x, class - {without})`.
    pub fn edges_into(&self, x: usize, class: usize, without: Option<usize>) -> usize {
        self.edges_into0(x, class - 1, without)
    }

    /// Whether `x` can join `class - {without}` without closing a cycle:
    /// its neighbors there must lie in distinct components.
    pub fn can_join(&self, x: usize, class: usize, without: Option<usize>) -> bool {
        self.can_join0(x, class - 1, without)
    }

    fn edges_into0(&self, x: usize, c: usize, without: Option<usize>) -> usize {
        self.graph
            .neighbors(x)
            .iter()
            .filter(|&&w| self.class_of[w] == Some(c) && Some(w) != without)
            .count()
    }

    fn can_join0(&self, x: usize, c: usize, without: Option<usize>) -> bool {
        let mut guard = self.scratch.borrow_mut();
        let s = &mut *guard;
        s.stamp += 1;
        let stamp = s.stamp;
        for &u in &self.members[c] {
            if Some(u) != without && u != x {
                s.in_set[u] = stamp;
            }
        }
        let nbrs: Vec<usize> = self
            .graph
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&w| s.in_set[w] == stamp)
            .collect();
        if nbrs.len() <= 1 {
            return true;
        }
        for &root in &nbrs {
            if s.visited[root] == stamp {
                return false;
            }
            s.visited[root] = stamp;
            s.queue.clear();
            s.queue.push_back(root);
            while let Some(a) = s.queue.pop_front() {
                for &b in self.graph.neighbors(a) {
                    if s.in_set[b] == stamp && s.visited[b] != stamp {
                        s.visited[b] = stamp;
                        s.queue.push_back(b);
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, v: usize, to: usize) {
        if let Some(from) = self.class_of[v] {
            let pos = self.members[from].iter().position(|&u| u == v).unwrap();
            self.members[from].swap_remove(pos);
        }
        self.class_of[v] = Some(to);
        self.members[to].push(v);
    }

    /// Moves `v` into a 1-based class if that class stays acyclic, recording
    /// a `Transfer` (or a `Place` when `v` was unplaced). Returns whether the
    /// move was applied.
    pub fn transfer_move(&mut self, v: usize, to: usize) -> bool {
        let to0 = to - 1;
        if self.class_of[v] == Some(to0) || !self.can_join0(v, to0, None) {
            return false;
        }
        let mv = match self.class_of[v] {
            Some(from) => Move::Transfer {
                vertex: v,
                from: from + 1,
                to,
            },
            None => Move::Place {
                vertex: v,
                class: to,
            },
        };
        self.assign(v, to0);
        self.trace.moves.push(mv);
        debug_assert!(self.class_is_forest(to0));
        true
    }

    fn class_is_forest(&self, c: usize) -> bool {
        self.graph
            .induced_subgraph(&self.members[c])
            .expect("members are vertices")
            .graph
            .is_forest()
    }

    fn smallest_classes(&self) -> Vec<usize> {
        let min = self.members.iter().map(Vec::len).min().unwrap();
        (0..self.m)
            .filter(|&c| self.members[c].len() == min)
            .collect()
    }

    fn admits(&self, guard: Guard, x: usize, c: usize, without: Option<usize>) -> bool {
        match guard {
            Guard::AtMostOneEdge => self.edges_into0(x, c, without) <= 1,
            Guard::Acyclic => self.can_join0(x, c, without),
        }
    }

    /// Places an unplaced vertex `v`, keeping the coloring equitable. Direct
    /// placement into a smallest class is tried first, then relays of depth
    /// one and two. Candidates satisfying `e(., class) <= 1` are preferred;
    /// the exact acyclicity test is the second pass.
    pub fn reinsert_vertex(&mut self, v: usize) -> Reinsertion {
        assert!(self.class_of[v].is_none(), "vertex {v} is already placed");
        let targets = self.smallest_classes();
        for guard in [Guard::AtMostOneEdge, Guard::Acyclic] {
            if let Some(&c) = targets.iter().find(|&&c| self.admits(guard, v, c, None)) {
                self.assign(v, c);
                self.trace.moves.push(Move::Place {
                    vertex: v,
                    class: c + 1,
                });
                return Reinsertion::Direct;
            }
        }
        for depth in 1..=2 {
            for guard in [Guard::AtMostOneEdge, Guard::Acyclic] {
                if let Some(chain) = self.find_relay(v, depth, guard, &targets) {
                    self.apply_relay(v, &chain);
                    return Reinsertion::Relay(depth);
                }
            }
        }
        Reinsertion::HeuristicFailed
    }

    /// A relay `v -> c0`, `u1: c0 -> c1` (, `u2: c1 -> c2`) ending in a
    /// smallest class. Returned as `(c0, [(u, from, to), ...])`.
    fn find_relay(&self, v: usize, depth: usize, guard: Guard, targets: &[usize]) -> Option<Relay> {
        for c0 in 0..self.m {
            let mut first: Vec<usize> = self.members[c0].clone();
            first.sort_unstable();
            for &u1 in &first {
                if !self.admits(guard, v, c0, Some(u1)) {
                    continue;
                }
                if depth == 1 {
                    if let Some(&c1) = targets
                        .iter()
                        .find(|&&c1| c1 != c0 && self.admits(guard, u1, c1, None))
                    {
                        return Some(Relay {
                            entry: c0,
                            hops: vec![(u1, c0, c1)],
                        });
                    }
                    continue;
                }
                for c1 in (0..self.m).filter(|&c| c != c0) {
                    let mut second: Vec<usize> = self.members[c1].clone();
                    second.sort_unstable();
                    for &u2 in &second {
                        if !self.admits(guard, u1, c1, Some(u2)) {
                            continue;
                        }
                        if let Some(&c2) = targets
                            .iter()
                            .find(|&&c2| c2 != c0 && c2 != c1 && self.admits(guard, u2, c2, None))
                        {
                            return Some(Relay {
                                entry: c0,
                                hops: vec![(u1, c0, c1), (u2, c1, c2)],
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// Applies hops from the far end so every intermediate state is a
    /// subset-or-final version of each class and stays acyclic.
    fn apply_relay(&mut self, v: usize, relay: &Relay) {
        for &(u, from, to) in relay.hops.iter().rev() {
            self.assign(u, to);
            self.trace.moves.push(Move::Transfer {
                vertex: u,
                from: from + 1,
                to: to + 1,
            });
            debug_assert!(self.class_is_forest(to));
        }
        self.assign(v, relay.entry);
        self.trace.moves.push(Move::Place {
            vertex: v,
            class: relay.entry + 1,
        });
        debug_assert!(self.class_is_forest(relay.entry));
    }

    fn site_is_valid(&self, site: &ExchangeSite) -> bool {
        site.first_class >= 1
            && site.first_class <= self.m
            && site.x < self.graph.order()
            && self.class_of[site.x].is_none_or(|c| c + 1 == site.first_class)
    }

    /// `V1'`: the first class without `x`, sorted.
    pub fn pruned_first_class(&self, site: &ExchangeSite) -> Vec<usize> {
        let mut out: Vec<usize> = self.members[site.first_class - 1]
            .iter()
            .copied()
            .filter(|&v| v != site.x)
            .collect();
        out.sort_unstable();
        out
    }

    /// `A`: placed vertices outside the first class, excluding `x`, sorted.
    pub fn remainder(&self, site: &ExchangeSite) -> Vec<usize> {
        let first = site.first_class - 1;
        (0..self.graph.order())
            .filter(|&v| v != site.x && matches!(self.class_of[v], Some(c) if c != first))
            .collect()
    }

    /// `A1`: vertices of `A` with exactly two neighbors in `V1'`.
    pub fn low_attachment(&self, site: &ExchangeSite) -> Vec<usize> {
        let first = site.first_class - 1;
        self.remainder(site)
            .into_iter()
            .filter(|&a| {
                self.graph
                    .neighbors(a)
                    .iter()
                    .filter(|&&w| w != site.x && self.class_of[w] == Some(first))
                    .count()
                    == 2
            })
            .collect()
    }

    /// Every `(z, y1, y2)` with `z in V1'`, `y1 < y2` in `A1`, both adjacent
    /// to `z` and not to each other, in lexicographic order.
    pub fn exchange_triples(&self, site: &ExchangeSite) -> Vec<(usize, usize, usize)> {
        if !self.site_is_valid(site) {
            return Vec::new();
        }
        let low = self.low_attachment(site);
        let mut out = Vec::new();
        for z in self.pruned_first_class(site) {
            let ys: Vec<usize> = low
                .iter()
                .copied()
                .filter(|&y| self.graph.has_edge(z, y))
                .collect();
            for (i, &y1) in ys.iter().enumerate() {
                for &y2 in &ys[i + 1..] {
                    if !self.graph.has_edge(y1, y2) {
                        out.push((z, y1, y2));
                    }
                }
            }
        }
        out
    }

    /// `G'`: the graph induced by `A + {x, z} - {y1, y2}`.
    pub fn exchange_subgraph(
        &self,
        site: &ExchangeSite,
        (z, y1, y2): (usize, usize, usize),
    ) -> InducedSubgraph {
        let mut keep = self.remainder(site);
        keep.retain(|&v| v != y1 && v != y2);
        keep.push(site.x);
        keep.push(z);
        self.graph
            .induced_subgraph(&keep)
            .expect("vertices of the graph")
    }

    fn try_exchange(&mut self, v: usize, deadline: Instant) -> bool {
        if self.m < 3 {
            return false;
        }
        for c in self.smallest_classes() {
            let x1 = self
                .graph
                .neighbors(v)
                .iter()
                .copied()
                .find(|&w| self.class_of[w] == Some(c));
            let site = ExchangeSite {
                x: v,
                x1,
                first_class: c + 1,
            };
            for triple in self
                .exchange_triples(&site)
                .into_iter()
                .take(MAX_EXCHANGE_TRIPLES)
            {
                if Instant::now() >= deadline {
                    return false;
                }
                let sub = self.exchange_subgraph(&site, triple);
                let Ok(sub_cfg) =
                    color_constructively(&sub.graph, self.m - 1, deadline, self.depth + 1)
                else {
                    continue;
                };
                let coloring = sub_cfg
                    .partition()
                    .expect("constructive coloring is complete");
                if lift_coloring(self, &site, triple, &sub, &coloring).is_ok() {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Guard {
    AtMostOneEdge,
    Acyclic,
}

#[derive(Clone, Debug)]
struct Relay {
    entry: usize,
    hops: Vec<(usize, usize, usize)>,
}

/// First exchange triple for `site`, if any.
pub fn find_exchange_vertex(
    cfg: &Configuration<'_>,
    site: &ExchangeSite,
) -> Option<(usize, usize, usize)> {
    cfg.exchange_triples(site).into_iter().next()
}

/// Combines the forest `F1 = V1' + {y1, y2} - {z}` (which keeps the first
/// class index) with an equitable tree-`(m-1)`-coloring of `G'`, whose
/// classes take the remaining indices in ascending order. The result
/// replaces the configuration's assignment on `F1` and `G'`.
///
/// Every error here means the caller passed something inconsistent; the
/// solver itself only lifts verified inputs.
pub fn lift_coloring(
    cfg: &mut Configuration<'_>,
    site: &ExchangeSite,
    (z, y1, y2): (usize, usize, usize),
    sub: &InducedSubgraph,
    coloring: &Partition,
) -> Result<(), LiftError> {
    if !cfg.site_is_valid(site) {
        return Err(LiftError::InvalidSite);
    }
    if !cfg.exchange_triples(site).contains(&(z, y1, y2)) {
        return Err(LiftError::InvalidTriple { z, y1, y2 });
    }
    let mut forest = cfg.pruned_first_class(site);
    forest.retain(|&v| v != z);
    forest.extend([y1, y2]);
    forest.sort_unstable();
    if !cfg
        .graph
        .induced_subgraph(&forest)
        .expect("vertices")
        .graph
        .is_forest()
    {
        return Err(LiftError::FirstClassNotForest);
    }
    let expected = cfg.m - 1;
    let sub_ok = coloring.m() == expected
        && *sub == cfg.exchange_subgraph(site, (z, y1, y2))
        && verify(&sub.graph, coloring, ClassPredicate::Forest).is_ok_and(|r| r.is_valid());
    if !sub_ok {
        return Err(LiftError::SubColoringInvalid { expected });
    }
    let mut sizes = coloring.class_sizes();
    sizes.push(forest.len());
    if sizes.iter().max().unwrap() - sizes.iter().min().unwrap() > 1 {
        return Err(LiftError::NotEquitable);
    }

    let first = site.first_class - 1;
    let others: Vec<usize> = (0..cfg.m).filter(|&c| c != first).collect();
    for &v in &forest {
        cfg.assign(v, first);
    }
    for (i, &v) in sub.to_parent.iter().enumerate() {
        cfg.assign(v, others[coloring.class_of(i) - 1]);
    }
    let lifted = (0..cfg.graph.order())
        .filter_map(|v| cfg.class_of[v].map(|c| (v, c + 1)))
        .collect();
    cfg.trace.moves.push(Move::Exchange {
        z,
        y1,
        y2,
        depth: cfg.depth,
        lifted,
    });
    debug_assert!((0..cfg.m).all(|c| cfg.class_is_forest(c)));
    Ok(())
}

/// Peels minimum-degree vertices and reinserts them in reverse order, using
/// relays and then the exchange step when direct placement fails.
pub fn color_constructively<'g>(
    g: &'g Graph,
    m: usize,
    deadline: Instant,
    depth: usize,
) -> Result<Configuration<'g>, UnknownReason> {
    let (order, _) = g.degeneracy_order();
    let mut cfg = Configuration::new(g, m);
    cfg.depth = depth;
    for &v in order.iter().rev() {
        if Instant::now() >= deadline {
            return Err(UnknownReason::Timeout);
        }
        if cfg.reinsert_vertex(v) == Reinsertion::HeuristicFailed && !cfg.try_exchange(v, deadline)
        {
            return Err(if Instant::now() >= deadline {
                UnknownReason::Timeout
            } else {
                UnknownReason::HeuristicFailed
            });
        }
    }
    Ok(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    Constructive,
    Exact,
    /// Constructive first, exact search on whatever time is left.
    Auto,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMethod::Constructive => "constructive",
            SolveMethod::Exact => "exact",
            SolveMethod::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    /// Which engine produced the answer (`None` when nothing was decided).
    pub decided_by: Option<SolveMethod>,
    /// Moves on the padded graph; vertices `0..n` are the original ones.
    pub trace: MoveTrace,
    pub padding: usize,
}

/// [`solve_with`] using [`SolveMethod::Auto`].
pub fn solve(g: &Graph, m: usize, timeout: Duration) -> SolveReport {
    solve_with(g, m, SolveMethod::Auto, timeout)
}

/// Equitable tree-`m`-coloring of `g`. The constructive path never reports
/// `Unsat`; only the exact search does. Every `Sat` is verified here.
pub fn solve_with(g: &Graph, m: usize, method: SolveMethod, timeout: Duration) -> SolveReport {
    assert!(m >= 1, "class count must be positive");
    let start = Instant::now();
    let deadline = start + timeout;
    let (padded, padding) = pad_to_multiple(g, m);
    let mut reason = UnknownReason::HeuristicFailed;

    if method != SolveMethod::Exact {
        let share = if method == SolveMethod::Auto {
            CONSTRUCTIVE_SHARE
        } else {
            1.0
        };
        let constructive_deadline = start + timeout.mul_f64(share);
        match color_constructively(&padded, m, constructive_deadline, 0) {
            Ok(cfg) => {
                let full = cfg.partition().expect("every vertex placed");
                let p = strip_padding(&full, g.order());
                if verify(g, &p, ClassPredicate::Forest).is_ok_and(|r| r.is_valid()) {
                    return SolveReport {
                        outcome: SolveOutcome::Sat(p),
                        decided_by: Some(SolveMethod::Constructive),
                        trace: cfg.into_trace(),
                        padding,
                    };
                }
            }
            Err(r) => reason = r,
        }
        if method == SolveMethod::Constructive {
            return SolveReport {
                outcome: SolveOutcome::Unknown(reason),
                decided_by: None,
                trace: MoveTrace::default(),
                padding,
            };
        }
    }

    let outcome = exact_solve_until(g, m, ClassPredicate::Forest, deadline);
    let (decided_by, trace) = match &outcome {
        SolveOutcome::Sat(p) => {
            let moves = (0..g.order())
                .map(|v| Move::Place {
                    vertex: v,
                    class: p.class_of(v),
                })
                .collect();
            (Some(SolveMethod::Exact), MoveTrace { moves })
        }
        SolveOutcome::Unsat => (Some(SolveMethod::Exact), MoveTrace::default()),
        SolveOutcome::Unknown(_) => (None, MoveTrace::default()),
    };
    SolveReport {
        outcome,
        decided_by,
        trace,
        padding,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_solve, DEFAULT_TIMEOUT};
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn part(m: usize, a: &[usize]) -> Partition {
        Partition::new(m, a.to_vec()).unwrap()
    }

    #[test]
    fn padding_examples() {
        assert_eq!(pad_to_multiple(&Graph::empty(10), 5).1, 0);
        let (g, k) = pad_to_multiple(&cycle(9), 5);
        assert_eq!((g.order(), k), (10, 1));
        let (g, k) = pad_to_multiple(&path(7), 3);
        assert_eq!((g.order(), k, g.size()), (9, 2, 6));
        assert_eq!(g.degree(7) + g.degree(8), 0);
        let p = part(3, &[1, 2, 3, 1, 2, 3, 1, 2, 3]);
        assert_eq!(strip_padding(&p, 7), part(3, &[1, 2, 3, 1, 2, 3, 1]));
    }

    #[test]
    fn isolated_vertex_goes_to_a_smallest_class() {
        let g = Graph::empty(4);
        let mut cfg = Configuration::new(&g, 2);
        for v in 0..3 {
            assert_eq!(cfg.reinsert_vertex(v), Reinsertion::Direct);
        }
        assert_eq!(cfg.class_sizes(), vec![2, 1]);
        assert_eq!(cfg.reinsert_vertex(3), Reinsertion::Direct);
        assert_eq!(cfg.class_of(3), Some(2));
    }

    #[test]
    fn direct_placement_with_one_neighbor() {
        // Classes {0,1} and {2}; vertex 3 is adjacent to 0 and 2.
        let g = Graph::new(4, [(0, 1), (0, 3), (2, 3)]).unwrap();
        let mut cfg = Configuration::new(&g, 2);
        cfg.transfer_move(0, 1);
        cfg.transfer_move(1, 1);
        cfg.transfer_move(2, 2);
        assert_eq!(cfg.reinsert_vertex(3), Reinsertion::Direct);
        assert_eq!(cfg.class_of(3), Some(2));
    }

    /// Three classes, each a path a-b-c; vertex 9 is adjacent to the first
    /// two vertices of every path, so it closes a triangle wherever it goes.
    fn blocked_instance() -> (Graph, Partition) {
        let mut edges = vec![];
        for base in [0, 3, 6] {
            edges.extend([
                (base, base + 1),
                (base + 1, base + 2),
                (base, 9),
                (base + 1, 9),
            ]);
        }
        let g = Graph::new(10, edges).unwrap();
        let mut labels = vec![1, 1, 1, 2, 2, 2, 3, 3, 3];
        labels.push(1);
        (g, part(3, &labels))
    }

    #[test]
    fn single_relay_when_direct_placement_fails() {
        let (g, _) = blocked_instance();
        assert!(exact_solve(&g, 3, ClassPredicate::Forest, DEFAULT_TIMEOUT).is_sat());
        let mut cfg = Configuration::new(&g, 3);
        for v in 0..9 {
            assert!(cfg.transfer_move(v, 1 + v / 3));
        }
        for c in 1..=3 {
            assert!(!cfg.can_join(9, c, None));
        }
        let before = cfg.trace().len();
        assert_eq!(cfg.reinsert_vertex(9), Reinsertion::Relay(1));
        let moves = &cfg.trace().moves()[before..];
        assert_eq!(moves.len(), 2);
        assert!(matches!(moves[0], Move::Transfer { .. }));
        assert!(matches!(moves[1], Move::Place { vertex: 9, .. }));
        let p = cfg.partition().unwrap();
        assert!(verify(&g, &p, ClassPredicate::Forest).unwrap().is_valid());
        assert_eq!(
            cfg.trace().replay_checked(&g).unwrap(),
            p.assignment().iter().map(|&c| Some(c)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn transfer_guard() {
        // Destination class {0,1,2} is the path 0-1-2.
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 0), (4, 0), (4, 2)]).unwrap();
        let mut cfg = Configuration::new(&g, 2);
        for v in 0..3 {
            assert!(cfg.transfer_move(v, 1));
        }
        assert_eq!(cfg.edges_into(3, 1, None), 1);
        assert!(cfg.transfer_move(3, 1));
        assert_eq!(cfg.edges_into(4, 1, None), 2);
        assert!(!cfg.transfer_move(4, 1));
        assert_eq!(cfg.class_of(4), None);
        assert!(cfg.transfer_move(4, 2));
        assert!(cfg.transfer_move(3, 2));
        assert_eq!(
            cfg.trace().moves().last(),
            Some(&Move::Transfer {
                vertex: 3,
                from: 1,
                to: 2
            })
        );
    }

    /// Brute-force scan of all `(z, y1, y2)`, independent of the A1 bookkeeping.
    fn scan_triples(
        g: &Graph,
        p: &Partition,
        x: usize,
        first: usize,
    ) -> Vec<(usize, usize, usize)> {
        let n = g.order();
        let in_first = |v: usize| v != x && p.class_of(v) == first;
        let in_a = |v: usize| v != x && p.class_of(v) != first;
        let attach = |v: usize| (0..n).filter(|&w| in_first(w) && g.has_edge(v, w)).count();
        let mut out = vec![];
        for z in (0..n).filter(|&z| in_first(z)) {
            for y1 in 0..n {
                for y2 in y1 + 1..n {
                    let ok = [y1, y2]
                        .iter()
                        .all(|&y| in_a(y) && attach(y) == 2 && g.has_edge(z, y))
                        && !g.has_edge(y1, y2);
                    if ok {
                        out.push((z, y1, y2));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn exchange_triple_examples() {
        // A1 empty: nothing in A has two neighbors in V1'.
        let g = path(6);
        let p = part(3, &[1, 1, 2, 2, 3, 3]);
        let cfg = Configuration::from_partition(&g, &p);
        let site = ExchangeSite {
            x: 0,
            x1: Some(1),
            first_class: 1,
        };
        assert!(cfg.low_attachment(&site).is_empty());
        assert_eq!(find_exchange_vertex(&cfg, &site), None);

        // z = 1 is adjacent to y1 = 3, y2 = 4, both in A1, but y1 y2 is an edge.
        let g = Graph::new(6, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (0, 5)]).unwrap();
        let p = part(2, &[1, 1, 1, 2, 2, 2]);
        let cfg = Configuration::from_partition(&g, &p);
        let site = ExchangeSite {
            x: 0,
            x1: None,
            first_class: 1,
        };
        assert_eq!(cfg.low_attachment(&site), vec![3, 4]);
        assert_eq!(find_exchange_vertex(&cfg, &site), None);

        // Drop the edge 3-4: both clique vertices now work as z.
        let g = g.without_edge(3, 4);
        let cfg = Configuration::from_partition(&g, &p);
        assert_eq!(scan_triples(&g, &p, 0, 1), vec![(1, 3, 4), (2, 3, 4)]);
        assert_eq!(cfg.exchange_triples(&site), scan_triples(&g, &p, 0, 1));
        assert_eq!(find_exchange_vertex(&cfg, &site), Some((1, 3, 4)));
    }

    #[test]
    fn lift_produces_verified_coloring() {
        // m = 3, t = 3. V1 = {0 (x), 1, 2} where 1-2 is an edge; y's 3 and 6
        // each see 1 and 2.
        let edges = [
            (1, 2),
            (0, 1),
            (0, 2),
            (3, 1),
            (3, 2),
            (6, 1),
            (6, 2),
            (3, 4),
            (6, 7),
            (4, 8),
        ];
        let g = Graph::new(9, edges).unwrap();
        let p = part(3, &[1, 1, 1, 2, 2, 2, 3, 3, 3]);
        let mut cfg = Configuration::from_partition(&g, &p);
        let site = ExchangeSite {
            x: 0,
            x1: Some(1),
            first_class: 1,
        };
        assert_eq!(cfg.low_attachment(&site), vec![3, 6]);
        let triple = find_exchange_vertex(&cfg, &site).unwrap();
        assert_eq!(triple, (1, 3, 6));
        let sub = cfg.exchange_subgraph(&site, triple);
        assert_eq!(sub.graph.order(), 6);
        let sub_p = exact_solve(&sub.graph, 2, ClassPredicate::Forest, DEFAULT_TIMEOUT);
        let sub_p = sub_p.partition().unwrap().clone();
        lift_coloring(&mut cfg, &site, triple, &sub, &sub_p).unwrap();
        let lifted = cfg.partition().unwrap();
        assert!(verify(&g, &lifted, ClassPredicate::Forest)
            .unwrap()
            .is_valid());
        assert_eq!(lifted.class_sizes(), vec![3, 3, 3]);
        assert_eq!(cfg.class_members(1).len(), 3);

        // A bogus sub-coloring is rejected.
        let mut cfg = Configuration::from_partition(&g, &p);
        let bad = Partition::new(2, vec![1; 6]).unwrap();
        assert_eq!(
            lift_coloring(&mut cfg, &site, triple, &sub, &bad),
            Err(LiftError::SubColoringInvalid { expected: 2 })
        );
        assert_eq!(
            lift_coloring(&mut cfg, &site, (2, 3, 4), &sub, &sub_p),
            Err(LiftError::InvalidTriple { z: 2, y1: 3, y2: 4 })
        );
    }

    #[test]
    fn solve_examples() {
        let t = Duration::from_secs(10);
        for m in 1..6 {
            let r = solve(&path(11), m, t);
            assert!(r.outcome.is_sat());
            assert_eq!(r.decided_by, Some(SolveMethod::Constructive));
        }
        let r = solve(&complete(4), 1, t);
        assert_eq!(r.outcome, SolveOutcome::Unsat);
        let r = solve_with(&complete(4), 1, SolveMethod::Constructive, t);
        assert!(matches!(r.outcome, SolveOutcome::Unknown(_)));
        let r = solve_with(&cycle(7), 3, SolveMethod::Exact, t);
        assert_eq!(r.decided_by, Some(SolveMethod::Exact));
        let assignment: Vec<Option<usize>> = r.trace.replay(7).unwrap();
        let p = r.outcome.partition().unwrap();
        assert!(assignment
            .iter()
            .zip(p.assignment())
            .all(|(a, &b)| *a == Some(b)));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=14).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(proptest::bool::weighted(0.3), len).prop_map(move |mask| {
                Graph::new(
                    n,
                    pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn constructive_results_replay_and_verify(g in arb_graph(), m in 1usize..6) {
            let r = solve_with(&g, m, SolveMethod::Constructive, Duration::from_secs(5));
            prop_assert_ne!(&r.outcome, &SolveOutcome::Unsat);
            if let SolveOutcome::Sat(p) = &r.outcome {
                prop_assert!(verify(&g, p, ClassPredicate::Forest).unwrap().is_valid());
                let (padded, _) = pad_to_multiple(&g, m);
                let replayed = r.trace.replay_checked(&padded).unwrap();
                for (v, &class) in replayed.iter().take(g.order()).enumerate() {
                    prop_assert_eq!(class, Some(p.class_of(v)));
                }
            }
        }

        #[test]
        fn auto_agrees_with_exact(g in arb_graph(), m in 1usize..6) {
            let t = Duration::from_secs(10);
            let auto = solve(&g, m, t).outcome;
            let exact = exact_solve(&g, m, ClassPredicate::Forest, t);
            prop_assert_eq!(auto.is_sat(), exact.is_sat());
        }
    }
}
