//! Combinatorial 1-plane drawings: a graph plus the pairs of edges that
//! cross. Nothing here is geometric; validation checks the necessary
//! conditions a real drawing would satisfy.

pub mod bounds;

use std::collections::{HashMap, HashSet};
use std::fmt;

use rustworkx_core::petgraph::graph::UnGraph;

use crate::graph::{Girth, Graph};
use crate::scalar::Scalar;

pub use bounds::{
    edge_bound, edge_cap, min_degree_bound, min_degree_bound_for, threshold_f, threshold_for,
    BoundError,
};

/// An undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Edge {
        Edge(a.min(b), a.max(b))
    }

    pub fn u(self) -> usize {
        self.0
    }

    pub fn v(self) -> usize {
        self.1
    }

    pub fn endpoints(self) -> [usize; 2] {
        [self.0, self.1]
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Edge {
        Edge::new(a, b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// A crossing between two edges, stored with `e1 <= e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossing {
    e1: Edge,
    e2: Edge,
}

impl Crossing {
    pub fn new(a: Edge, b: Edge) -> Crossing {
        Crossing {
            e1: a.min(b),
            e2: a.max(b),
        }
    }

    pub fn e1(self) -> Edge {
        self.e1
    }

    pub fn e2(self) -> Edge {
        self.e2
    }

    /// The four endpoints, sorted. Only meaningful for a valid crossing.
    pub fn cluster(self) -> Cluster {
        let mut v = [self.e1.0, self.e1.1, self.e2.0, self.e2.1];
        v.sort_unstable();
        Cluster(v)
    }

    fn endpoints_distinct(self) -> bool {
        let c = self.cluster().0;
        c.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cluster(pub [usize; 4]);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A crossing names an edge the graph does not have.
    MissingEdge { crossing: usize, edge: Edge },
    /// The two crossed edges share an endpoint (or are the same edge).
    SharedEndpoint { crossing: usize },
    /// An edge is crossed more than once.
    EdgeReused {
        edge: Edge,
        first: usize,
        second: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEdge { crossing, edge } => {
                write!(f, "crossing #{crossing}: edge {edge} is not in the graph")
            }
            Violation::SharedEndpoint { crossing } => {
                write!(f, "crossing #{crossing}: crossed edges share an endpoint")
            }
            Violation::EdgeReused {
                edge,
                first,
                second,
            } => {
                write!(
                    f,
                    "edge {edge} is crossed by both crossing #{first} and #{second}"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    graph: Graph,
    crossings: Vec<Crossing>,
}

impl Drawing {
    /// Crossings are kept as given; call [`Drawing::validate_one_plane`] to
    /// learn whether they are consistent with the graph.
    pub fn new(graph: Graph, crossings: Vec<Crossing>) -> Drawing {
        Drawing { graph, crossings }
    }

    /// A crossing-free drawing.
    pub fn plane(graph: Graph) -> Drawing {
        Drawing::new(graph, Vec::new())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn into_parts(self) -> (Graph, Vec<Crossing>) {
        (self.graph, self.crossings)
    }

    pub fn validate_one_plane(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut crossed_by: HashMap<Edge, usize> = HashMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for e in [c.e1, c.e2] {
                if !self.graph.has_edge(e.0, e.1) {
                    out.push(Violation::MissingEdge {
                        crossing: i,
                        edge: e,
                    });
                }
            }
            if !c.endpoints_distinct() {
                out.push(Violation::SharedEndpoint { crossing: i });
            }
            let crossed: &[Edge] = if c.e1 == c.e2 { &[c.e1] } else { &[c.e1, c.e2] };
            for &e in crossed {
                if let Some(&first) = crossed_by.get(&e) {
                    out.push(Violation::EdgeReused {
                        edge: e,
                        first,
                        second: i,
                    });
                } else {
                    crossed_by.insert(e, i);
                }
            }
        }
        out
    }

    pub fn clusters(&self) -> Vec<Cluster> {
        self.crossings.iter().map(|c| c.cluster()).collect()
    }

    /// Whether the crossing clusters are pairwise disjoint.
    pub fn is_ic(&self) -> bool {
        let mut seen = HashSet::new();
        self.crossings
            .iter()
            .flat_map(|c| c.cluster().0)
            .all(|v| seen.insert(v))
    }

    /// Removes the smaller edge of every crossing.
    pub fn planarize(&self) -> Graph {
        let drop: HashSet<Edge> = self.crossings.iter().map(|c| c.e1).collect();
        Graph::new(
            self.graph.order(),
            self.graph
                .edges()
                .iter()
                .copied()
                .filter(|&e| !drop.contains(&Edge::from(e))),
        )
        .expect("subgraph of a simple graph")
    }

    /// Audits the drawing: edge density, minimum degree and
    /// crossing count against the girth-parameterized bounds.
    pub fn check_density<T: Scalar>(&self) -> DensityReport<T> {
        let g = &self.graph;
        let n = g.order();
        let girth = g.girth();
        let crossing_cap = n / 4;
        let edge_bound = match girth {
            Girth::Finite(k) => Some(edge_bound::<T>(n, k).expect("girth is at least 3")),
            Girth::Infinite => None,
        };
        let min_degree = g.min_degree().ok();
        let degree_bound = min_degree.map(|_| min_degree_bound_for(girth));
        let edges_ok = edge_bound
            .map(|b| T::from_int(g.size() as i64) <= b)
            .unwrap_or(true);
        let min_degree_ok = match (min_degree, degree_bound) {
            (Some(d), Some(b)) => d <= b,
            _ => true,
        };
        DensityReport {
            order: n,
            edges: g.size(),
            girth,
            crossings: self.crossings.len(),
            crossing_cap,
            edge_bound,
            min_degree,
            min_degree_bound: degree_bound,
            edges_ok,
            min_degree_ok,
            crossings_ok: self.crossings.len() <= crossing_cap,
        }
    }
}

/// Result of [`Drawing::check_density`]. Bounds that do not apply (acyclic
/// graph, empty graph) are `None` and count as passing.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport<T> {
    pub order: usize,
    pub edges: usize,
    pub girth: Girth,
    pub crossings: usize,
    pub crossing_cap: usize,
    pub edge_bound: Option<T>,
    pub min_degree: Option<usize>,
    pub min_degree_bound: Option<usize>,
    pub edges_ok: bool,
    pub min_degree_ok: bool,
    pub crossings_ok: bool,
}

impl<T> DensityReport<T> {
    pub fn passes(&self) -> bool {
        self.edges_ok && self.min_degree_ok && self.crossings_ok
    }
}

/// Left-right planarity test.
pub fn is_planar(g: &Graph) -> bool {
    if g.order() >= 3 && g.size() > 3 * g.order() - 6 {
        return false;
    }
    let pg = UnGraph::<(), ()>::from_edges(g.edges().iter().map(|&(u, v)| (u as u32, v as u32)));
    rustworkx_core::planar::is_planar(&pg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::ExactBound;

    fn cross(a: (usize, usize), b: (usize, usize)) -> Crossing {
        Crossing::new(a.into(), b.into())
    }

    fn k8_minus_nothing() -> Graph {
        complete(8)
    }

    #[test]
    fn clusters_examples() {
        assert!(Drawing::plane(complete(4)).clusters().is_empty());
        let d = Drawing::new(complete(4), vec![cross((0, 1), (2, 3))]);
        assert_eq!(d.clusters(), vec![Cluster([0, 1, 2, 3])]);
        let d = Drawing::new(
            k8_minus_nothing(),
            vec![cross((0, 1), (2, 3)), cross((4, 5), (6, 7))],
        );
        assert_eq!(
            d.clusters(),
            vec![Cluster([0, 1, 2, 3]), Cluster([4, 5, 6, 7])]
        );
    }

    #[test]
    fn one_plane_validation() {
        assert!(Drawing::plane(complete(4)).validate_one_plane().is_empty());

        let d = Drawing::new(cycle(4), vec![cross((0, 2), (1, 3))]);
        let v = d.validate_one_plane();
        assert_eq!(v.len(), 2);
        assert!(matches!(v[0], Violation::MissingEdge { crossing: 0, .. }));

        let d = Drawing::new(
            complete(6),
            vec![cross((0, 1), (2, 3)), cross((0, 1), (4, 5))],
        );
        assert_eq!(
            d.validate_one_plane(),
            vec![Violation::EdgeReused {
                edge: Edge::new(0, 1),
                first: 0,
                second: 1
            }]
        );

        let d = Drawing::new(complete(4), vec![cross((0, 1), (1, 2))]);
        assert_eq!(
            d.validate_one_plane(),
            vec![Violation::SharedEndpoint { crossing: 0 }]
        );
    }

    #[test]
    fn independence_of_crossings() {
        assert!(Drawing::plane(complete(5)).is_ic());
        assert!(Drawing::new(complete(4), vec![cross((0, 1), (2, 3))]).is_ic());
        let shared = Drawing::new(
            complete(7),
            vec![cross((0, 1), (2, 3)), cross((3, 4), (5, 6))],
        );
        assert!(shared.validate_one_plane().is_empty());
        assert!(!shared.is_ic());
        let disjoint = Drawing::new(
            complete(8),
            vec![cross((0, 1), (2, 3)), cross((4, 5), (6, 7))],
        );
        assert!(disjoint.is_ic());
    }

    #[test]
    fn planarize_removes_smaller_edge() {
        assert_eq!(Drawing::plane(cycle(5)).planarize(), cycle(5));
        let d = Drawing::new(complete(4), vec![cross((2, 3), (0, 1))]);
        let p = d.planarize();
        assert_eq!(p.size(), 5);
        assert!(!p.has_edge(0, 1));
        assert!(p.has_edge(2, 3));
    }

    #[test]
    fn planarity() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        let k33 = Graph::new(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap();
        assert!(!is_planar(&k33));
        assert!(is_planar(&Graph::empty(0)));
        assert!(is_planar(&cycle(30)));
        // Petersen graph is not planar.
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        assert!(!is_planar(
            &Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
        ));
        // K5 minus an edge is planar.
        assert!(is_planar(&complete(5).without_edge(0, 1)));
    }

    #[test]
    fn density_examples() {
        let r = Drawing::plane(cycle(5)).check_density::<ExactBound>();
        assert_eq!(r.edge_bound, Some(ExactBound::new(25, 4)));
        assert!(r.passes());

        let k6 = Drawing::new(complete(6), vec![cross((0, 1), (2, 3))]);
        assert!(k6.validate_one_plane().is_empty() && k6.is_ic());
        let r = k6.check_density::<ExactBound>();
        assert_eq!(r.edge_bound, Some(ExactBound::new(27, 2)));
        assert!(!r.edges_ok);
        assert!(!r.passes());

        let r = Drawing::plane(star(4)).check_density::<ExactBound>();
        assert_eq!(r.girth, Girth::Infinite);
        assert_eq!(r.edge_bound, None);
        assert!(r.passes());

        let r = Drawing::plane(Graph::empty(0)).check_density::<f64>();
        assert!(r.passes());
    }
}
