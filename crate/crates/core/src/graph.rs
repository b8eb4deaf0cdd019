//! Simple undirected graphs on dense vertex ids `0..n`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::dsu::UnionFind;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("operation needs at least one vertex")]
    Empty,
    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),
}

/// Length of a shortest cycle. `Finite` sorts before `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Girth::Infinite
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// An immutable simple graph. Edges are stored normalized (`u < v`) and
/// sorted; adjacency lists are sorted as well.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// An induced subgraph together with the map from its vertices back to the
/// parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_parent[i]` is the parent-graph vertex that became vertex `i`.
    pub to_parent: Vec<usize>,
}

impl InducedSubgraph {
    pub fn from_parent(&self, v: usize) -> Option<usize> {
        self.to_parent.binary_search(&v).ok()
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates (in either orientation)
    /// and out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n,
            adj,
            edges: list,
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let e = (u.min(v), u.max(v));
        Graph::new(self.n, self.edges.iter().copied().filter(|&x| x != e))
            .expect("removing an edge keeps the graph simple")
    }

    /// Appends `k` isolated vertices with ids `n..n+k`.
    pub fn with_isolated(&self, k: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj.resize(self.n + k, Vec::new());
        Graph {
            n: self.n + k,
            adj,
            edges: self.edges.clone(),
        }
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).min().ok_or(GraphError::Empty)
    }

    pub fn max_degree(&self) -> Result<usize, GraphError> {
        self.adj.iter().map(Vec::len).max().ok_or(GraphError::Empty)
    }

    /// Shortest cycle length, via a breadth-first search from every root.
    /// A non-tree edge `uw` met while searching from `r` closes a closed walk
    /// of length `d(u) + d(w) + 1` containing a cycle no longer than that,
    /// and the search rooted on a shortest cycle sees it exactly.
    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.fill(usize::MAX);
            queue.clear();
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                        if 2 * dist[u] + 1 >= best {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// `e(S1, S2)`: edges with one endpoint in each of two disjoint sets.
    pub fn edges_between(&self, s1: &[usize], s2: &[usize]) -> Result<usize, GraphError> {
        let mut side = vec![0u8; self.n];
        for &v in s1 {
            self.check_vertex(v)?;
            side[v] = 1;
        }
        for &v in s2 {
            self.check_vertex(v)?;
            if side[v] == 1 {
                return Err(GraphError::OverlappingSets(v));
            }
            side[v] = 2;
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| side[u] != 0 && side[v] != 0 && side[u] != side[v])
            .count())
    }

    /// The subgraph induced by `vertices` (duplicates ignored). New ids follow
    /// ascending order of the parent ids.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph, GraphError> {
        let mut to_parent = vertices.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in to_parent.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let graph = Graph::new(to_parent.len(), edges).expect("induced subgraph of a simple graph");
        Ok(InducedSubgraph { graph, to_parent })
    }

    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().all(|&(u, v)| uf.union(u, v))
    }

    /// Repeatedly deletes a vertex of minimum current degree (smallest id on
    /// ties) and returns the deletion order together with the largest degree
    /// seen at deletion time, i.e. the degeneracy.
    pub fn degeneracy_order(&self) -> (Vec<usize>, usize) {
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut k = 0;
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            k = k.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        (order, k)
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy_order().1
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(Graph::new(3, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn girth_examples() {
        assert_eq!(cycle(5).girth(), Girth::Finite(5));
        assert_eq!(complete(4).girth(), Girth::Finite(3));
        assert_eq!(path(7).girth(), Girth::Infinite);
        assert_eq!(star(6).girth(), Girth::Infinite);
        assert_eq!(Graph::empty(0).girth(), Girth::Infinite);
        // K_{3,3}
        let k33 = Graph::new(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap();
        assert_eq!(k33.girth(), Girth::Finite(4));
        // Petersen graph has girth 5.
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let petersen = Graph::new(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(petersen.girth(), Girth::Finite(5));
    }

    #[test]
    fn degree_extremes() {
        assert_eq!(
            (complete(4).min_degree(), complete(4).max_degree()),
            (Ok(3), Ok(3))
        );
        assert_eq!((star(5).min_degree(), star(5).max_degree()), (Ok(1), Ok(5)));
        assert_eq!(
            (cycle(6).min_degree(), cycle(6).max_degree()),
            (Ok(2), Ok(2))
        );
        assert_eq!(Graph::empty(0).min_degree(), Err(GraphError::Empty));
        assert_eq!(Graph::empty(0).max_degree(), Err(GraphError::Empty));
    }

    #[test]
    fn edges_between_examples() {
        assert_eq!(complete(4).edges_between(&[0, 1], &[2, 3]), Ok(4));
        assert_eq!(cycle(4).edges_between(&[0], &[2]), Ok(0));
        assert_eq!(cycle(4).edges_between(&[0], &[1, 3]), Ok(2));
        assert_eq!(
            cycle(4).edges_between(&[0, 1], &[1]),
            Err(GraphError::OverlappingSets(1))
        );
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = complete(4).induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(k3.graph, complete(3));
        assert_eq!(k3.to_parent, vec![0, 1, 2]);
        assert_eq!(
            cycle(4).induced_subgraph(&[]).unwrap().graph,
            Graph::empty(0)
        );
        let p3 = cycle(5).induced_subgraph(&[4, 0, 1]).unwrap();
        assert_eq!(p3.graph.size(), 2);
        assert!(p3.graph.is_forest());
        assert_eq!(p3.graph.max_degree(), Ok(2));
        assert!(cycle(5).induced_subgraph(&[5]).is_err());
    }

    #[test]
    fn forest_examples() {
        assert!(path(5).is_forest());
        assert!(!complete(3).is_forest());
        assert!(Graph::empty(0).is_forest());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(path(6).degeneracy(), 1);
        assert_eq!(star(4).degeneracy(), 1);
        assert_eq!(complete(5).degeneracy(), 4);
        // K3 plus three vertices joined to all of it: peeling the outer
        // vertices at degree 3 leaves K3 (degree 2).
        let sharp = Graph::new(
            6,
            [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .chain((3..6).flat_map(|o| (0..3).map(move |k| (k, o)))),
        )
        .unwrap();
        assert_eq!(sharp.degeneracy(), 3);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
                let chosen = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
                Graph::new(n, chosen).unwrap()
            })
        })
    }

    /// Shortest cycle by brute force: for each edge uv, the shortest u-v path
    /// avoiding that edge, plus one.
    fn girth_by_edge_deletion(g: &Graph) -> Girth {
        g.edges()
            .iter()
            .filter_map(|&(u, v)| {
                let h = g.without_edge(u, v);
                let mut dist = vec![usize::MAX; h.order()];
                let mut q = VecDeque::from([u]);
                dist[u] = 0;
                while let Some(x) = q.pop_front() {
                    for &y in h.neighbors(x) {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            q.push_back(y);
                        }
                    }
                }
                (dist[v] != usize::MAX).then(|| dist[v] + 1)
            })
            .min()
            .map_or(Girth::Infinite, Girth::Finite)
    }

    proptest! {
        #[test]
        fn girth_matches_edge_deletion(g in arb_graph(10)) {
            prop_assert_eq!(g.girth(), girth_by_edge_deletion(&g));
        }

        #[test]
        fn structural_identities(g in arb_graph(12), mask in proptest::collection::vec(any::<bool>(), 12)) {
            let s: Vec<usize> = (0..g.order()).filter(|&v| mask[v]).collect();
            let rest: Vec<usize> = (0..g.order()).filter(|&v| !mask[v]).collect();
            let gs = g.induced_subgraph(&s).unwrap();
            let gr = g.induced_subgraph(&rest).unwrap();
            prop_assert!(gs.graph.girth() >= g.girth());
            prop_assert_eq!(g.is_forest(), g.girth().is_infinite());
            let degree_sum: usize = (0..g.order()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.size());
            prop_assert_eq!(
                g.edges_between(&s, &rest).unwrap() + gs.graph.size() + gr.graph.size(),
                g.size()
            );
            prop_assert!(g.degeneracy() <= g.max_degree().unwrap());
        }
    }
}
