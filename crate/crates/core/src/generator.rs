//! Seeded graph and drawing generators.
//!
//! All randomness comes from a ChaCha8 stream seeded with the caller's `u64`,
//! so a (parameters, seed) pair always yields the same output.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drawing::{is_planar, Crossing, Drawing, Edge};
use crate::graph::{Girth, Graph};
use crate::ExactBound;

/// Identifier written into corpus manifests.
pub const RNG_ID: &str = "chacha8";

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn invalid(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidParameter(msg.into())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// BFS distance from `s` to `t`, capped: returns `None` if it exceeds `cap`.
fn distance_at_most(g: &[Vec<usize>], s: usize, t: usize, cap: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return Some(dist[u]);
        }
        if dist[u] == cap {
            continue;
        }
        for &w in &g[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Whether adding `uv` keeps every cycle through it at length `>= girth`.
fn keeps_girth(adj: &[Vec<usize>], u: usize, v: usize, girth: usize) -> bool {
    distance_at_most(adj, u, v, girth.saturating_sub(2)).is_none()
}

/// Vertices within `radius` of any source, sorted.
fn ball<const K: usize>(adj: &[Vec<usize>], sources: [usize; K], radius: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..adj.len()).filter(|&v| dist[v] != usize::MAX).collect()
}

fn to_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges.iter().copied()).expect("generated edges are simple")
}

/// Random connected planar graph with girth at least `min_girth`: a random
/// spanning tree, then shuffled non-edges inserted while planarity and the
/// girth floor allow. Stops at `target_edges` if given.
pub fn random_planar_with(
    n: usize,
    min_girth: usize,
    target_edges: Option<usize>,
    seed: u64,
) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if min_girth < 3 {
        return Err(invalid("min_girth must be at least 3"));
    }
    let mut rng = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(3 * n);
    for i in 1..n {
        let (a, b) = (perm[i], perm[rng.gen_range(0..i)]);
        adj[a].push(b);
        adj[b].push(a);
        edges.push((a, b));
    }
    // Euler: a planar graph with girth g has at most g(n-2)/(g-2) edges.
    let cap = if n >= 3 {
        min_girth * (n - 2) / (min_girth - 2)
    } else {
        n - 1
    };
    let limit = target_edges.map_or(cap, |t| t.min(cap));
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !adj[u].contains(&v))
        .collect();
    candidates.shuffle(&mut rng);
    for (u, v) in candidates {
        if edges.len() >= limit {
            break;
        }
        if !keeps_girth(&adj, u, v, min_girth) {
            continue;
        }
        edges.push((u, v));
        if is_planar(&to_graph(n, &edges)) {
            adj[u].push(v);
            adj[v].push(u);
        } else {
            edges.pop();
        }
    }
    Ok(to_graph(n, &edges))
}

/// [`random_planar_with`] filling greedily up to the planar limit.
pub fn random_planar(n: usize, min_girth: usize, seed: u64) -> Result<Graph, GeneratorError> {
    random_planar_with(n, min_girth, None, seed)
}

/// Adds up to `max_crossings` crossings to a planar graph. Each crossing
/// pairs an existing edge `ab` with a new edge `cd` on four vertices no
/// earlier crossing used, so the crossings are independent by construction.
/// `cd` is chosen lexicographically smaller than `ab`, which makes
/// [`Drawing::planarize`] return exactly `g`. New edges must not lower the
/// girth below that of `g`, must keep `g` planar after swapping every crossed
/// `ab` for its `cd`, and must keep the drawing within its density bounds.
pub fn ic_augment(g: &Graph, max_crossings: usize, seed: u64) -> Result<Drawing, GeneratorError> {
    if !is_planar(g) {
        return Err(invalid("ic_augment needs a planar graph"));
    }
    let n = g.order();
    let floor = g.girth().finite().unwrap_or(usize::MAX);
    let mut rng = rng(seed);
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut current = g.clone();
    // g with every crossed edge ab swapped for its partner cd; kept planar.
    let mut swapped = g.clone();
    let mut used = vec![false; n];
    let mut crossings = Vec::new();

    let mut crossed: Vec<(usize, usize)> = g.edges().to_vec();
    crossed.shuffle(&mut rng);
    for (a, b) in crossed {
        if crossings.len() >= max_crossings || crossings.len() >= n / 4 {
            break;
        }
        if used[a] || used[b] {
            continue;
        }
        // Pairs close to ab come first: in a plane drawing the edge crossing
        // ab joins two faces incident to it.
        let radius = if floor == usize::MAX {
            2
        } else {
            floor / 2 + 1
        };
        let near = ball(&adj, [a, b], radius);
        let admissible = |c: usize, d: usize| {
            c < d
                && !used[c]
                && !used[d]
                && ![a, b].contains(&c)
                && ![a, b].contains(&d)
                && (c, d) < (a, b)
                && !adj[c].contains(&d)
        };
        let mut close: Vec<(usize, usize)> = near
            .iter()
            .flat_map(|&c| near.iter().map(move |&d| (c, d)))
            .filter(|&(c, d)| admissible(c, d))
            .collect();
        close.shuffle(&mut rng);
        let mut far: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (c + 1..n).map(move |d| (c, d)))
            .filter(|&(c, d)| admissible(c, d) && !(near.contains(&c) && near.contains(&d)))
            .collect();
        far.shuffle(&mut rng);
        far.truncate(4);
        for (c, d) in close.into_iter().take(24).chain(far) {
            if floor != usize::MAX && !keeps_girth(&adj, c, d, floor) {
                continue;
            }
            if floor == usize::MAX && distance_at_most(&adj, c, d, n).is_some() {
                continue;
            }
            let next_swapped = swapped
                .without_edge(a, b)
                .with_edge(c, d)
                .expect("non-edge");
            if !is_planar(&next_swapped) {
                continue;
            }
            let next = current.with_edge(c, d).expect("non-edge");
            let mut trial = crossings.clone();
            trial.push(Crossing::new(Edge::new(a, b), Edge::new(c, d)));
            if !Drawing::new(next.clone(), trial.clone())
                .check_density::<ExactBound>()
                .passes()
            {
                continue;
            }
            adj[c].push(d);
            adj[d].push(c);
            for v in [a, b, c, d] {
                used[v] = true;
            }
            current = next;
            swapped = next_swapped;
            crossings = trial;
            break;
        }
    }
    crossings.sort_unstable();
    let drawing = Drawing::new(current, crossings);
    debug_assert!(drawing.validate_one_plane().is_empty() && drawing.is_ic());
    debug_assert_eq!(&drawing.planarize(), g);
    Ok(drawing)
}

/// `K_k` plus `t` vertices, each adjacent to all of `K_k` and nothing else.
/// Vertices `0..k` form the clique.
pub fn sharpness_example(k: usize, t: usize) -> Result<Graph, GeneratorError> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    if t + 3 < 2 * k {
        return Err(invalid(format!(
            "t must be at least 2k - 3 = {}",
            2 * k - 3
        )));
    }
    let clique = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)));
    let spokes = (k..k + t).flat_map(|v| (0..k).map(move |i| (i, v)));
    Ok(Graph::new(k + t, clique.chain(spokes)).expect("simple"))
}

/// The path `0 - 1 - ... - (len-1)` plus a universal vertex `len`.
pub fn fan_example(path_len: usize) -> Result<Graph, GeneratorError> {
    if path_len == 0 {
        return Err(invalid("path_len must be at least 1"));
    }
    let path = (1..path_len).map(|i| (i - 1, i));
    let hub = (0..path_len).map(|i| (i, path_len));
    Ok(Graph::new(path_len + 1, path.chain(hub)).expect("simple"))
}

/// Replaces every edge by a path of `r + 1` edges. New vertices follow the
/// original ones, `r` per edge in edge order.
pub fn subdivide(g: &Graph, r: usize) -> Graph {
    let n = g.order();
    let mut edges = Vec::with_capacity(g.size() * (r + 1));
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let mut prev = u;
        for j in 0..r {
            let w = n + i * r + j;
            edges.push((prev, w));
            prev = w;
        }
        edges.push((prev, v));
    }
    Graph::new(n + g.size() * r, edges).expect("simple")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `K_{1, delta}` with center 0.
    Star(usize),
    Cycle(usize),
    Complete(usize),
    Subdivide(Graph, usize),
}

pub fn named(family: &Family) -> Result<Graph, GeneratorError> {
    Ok(match family {
        &Family::Star(delta) => Graph::new(delta + 1, (1..=delta).map(|v| (0, v))).expect("simple"),
        &Family::Cycle(n) => {
            if n < 3 {
                return Err(invalid("a cycle needs at least 3 vertices"));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("simple")
        }
        &Family::Complete(k) => {
            if k == 0 {
                return Err(invalid("K_0 is not a graph here"));
            }
            Graph::new(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)))).expect("simple")
        }
        Family::Subdivide(g, r) => subdivide(g, *r),
    })
}

/// Parameters of a generated corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Instances per girth class.
    pub per_class: usize,
    pub min_order: usize,
    pub max_order: usize,
    /// Girth classes, each in `3..=6` or `26` for the high-girth class.
    pub girths: Vec<usize>,
}

impl CorpusSpec {
    pub fn new(seed: u64, per_class: usize) -> CorpusSpec {
        CorpusSpec {
            seed,
            per_class,
            min_order: 8,
            max_order: 60,
            girths: vec![3, 4, 5, 6],
        }
    }
}

/// One corpus drawing and how it was made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub family: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub girth: Girth,
    pub drawing: Drawing,
}

/// IC drawings for each girth class. Girth classes up to 6 use
/// [`random_planar`] plus [`ic_augment`]; the class 26 uses subdivisions of
/// small planar graphs and long cycles, since dense planar graphs of that
/// girth do not fit in 60 vertices. Instances are retried with fresh seeds
/// until the girth matches the class exactly.
pub fn corpus(spec: &CorpusSpec) -> Result<Vec<CorpusEntry>, GeneratorError> {
    if spec.min_order < 4 || spec.min_order > spec.max_order {
        return Err(invalid("need 4 <= min_order <= max_order"));
    }
    let mut master = rng(spec.seed);
    let mut out = Vec::new();
    for &g in &spec.girths {
        if !(3..=6).contains(&g) && g != 26 {
            return Err(invalid(format!("unsupported girth class {g}")));
        }
        for i in 0..spec.per_class {
            let id = format!("g{g:02}-{i:04}");
            let entry = loop {
                let seed: u64 = master.gen();
                if let Some(e) = corpus_instance(spec, g, id.clone(), seed)? {
                    break e;
                }
            };
            out.push(entry);
        }
    }
    Ok(out)
}

fn corpus_instance(
    spec: &CorpusSpec,
    class: usize,
    id: String,
    seed: u64,
) -> Result<Option<CorpusEntry>, GeneratorError> {
    let mut rng = rng(seed);
    let (family, params, base) = if class == 26 {
        if rng.gen_bool(0.5) {
            let lo = spec.min_order.max(26);
            if lo > spec.max_order {
                return Err(invalid("girth 26 needs max_order >= 26"));
            }
            let len = rng.gen_range(lo..=spec.max_order);
            (
                "cycle",
                serde_json::json!({ "n": len }),
                named(&Family::Cycle(len))?,
            )
        } else {
            // K4 subdivided 8 times has girth 27 and 52 vertices.
            let base = named(&Family::Complete(if spec.max_order >= 52 { 4 } else { 3 }))?;
            let r = 8;
            let g = subdivide(&base, r);
            if g.order() > spec.max_order {
                return Ok(None);
            }
            (
                "subdivide",
                serde_json::json!({ "base": base.order(), "r": r }),
                g,
            )
        }
    } else {
        let n = rng.gen_range(spec.min_order.max(class)..=spec.max_order);
        let g = random_planar(n, class, rng.gen())?;
        (
            "random_planar",
            serde_json::json!({ "n": n, "min_girth": class }),
            g,
        )
    };
    let girth = base.girth();
    if class <= 6 && girth != Girth::Finite(class) {
        return Ok(None);
    }
    let max_crossings = rng.gen_range(0..=base.order() / 4);
    let drawing = ic_augment(&base, max_crossings, rng.gen())?;
    let mut params = params;
    params["max_crossings"] = serde_json::json!(max_crossings);
    Ok(Some(CorpusEntry {
        id,
        family: family.to_string(),
        params,
        seed,
        girth: drawing.graph().girth(),
        drawing,
    }))
}
