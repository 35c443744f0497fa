//! Independent oracles and random inputs shared by the integration tests.
//!
//! Nothing here calls the algorithms under test: cycles are enumerated by
//! plain depth-first search and the definitions are applied literally.

#![allow(dead_code)]

use std::collections::BTreeSet;

use afembed_core::{Edge, EdgeId, Graph, VertexId};
use rand::Rng;

pub mod words;

/// A graph as bare index lists: `edges[i] = (source, range)`.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl RawGraph {
    pub fn to_graph(&self) -> Graph {
        Graph::new(
            (0..self.vertices).map(|i| VertexId::new(&format!("v{i}")).unwrap()),
            self.edges.iter().enumerate().map(|(i, &(s, r))| Edge {
                id: EdgeId::new(&format!("e{i}")).unwrap(),
                source: VertexId::new(&format!("v{s}")).unwrap(),
                range: VertexId::new(&format!("v{r}")).unwrap(),
            }),
        )
        .unwrap()
    }

    pub fn receivers(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, r)| r == v).count()
    }
}

/// Every simple cycle, as its list of edge indices in traversal order
/// (source side first), each reported once starting from its smallest
/// vertex.
pub fn simple_cycles(g: &RawGraph) -> Vec<Vec<usize>> {
    fn dfs(
        g: &RawGraph,
        start: usize,
        at: usize,
        on_path: &mut Vec<bool>,
        edges: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for (i, &(s, r)) in g.edges.iter().enumerate() {
            if s != at || r < start {
                continue;
            }
            if r == start {
                let mut cycle = edges.clone();
                cycle.push(i);
                out.push(cycle);
            } else if !on_path[r] {
                on_path[r] = true;
                edges.push(i);
                dfs(g, start, r, on_path, edges, out);
                edges.pop();
                on_path[r] = false;
            }
        }
    }
    let mut out = Vec::new();
    for start in 0..g.vertices {
        let mut on_path = vec![false; g.vertices];
        on_path[start] = true;
        dfs(g, start, start, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Af,
    AfEmbeddable,
    NotFinite,
}

/// AF iff there is no loop; not finite iff some simple loop has a vertex
/// `r(α_i)` receiving more than one edge.
pub fn oracle_classify(g: &RawGraph) -> OracleVerdict {
    let cycles = simple_cycles(g);
    if cycles.is_empty() {
        return OracleVerdict::Af;
    }
    let entrance = cycles
        .iter()
        .any(|c| c.iter().any(|&e| g.receivers(g.edges[e].1) > 1));
    if entrance {
        OracleVerdict::NotFinite
    } else {
        OracleVerdict::AfEmbeddable
    }
}

pub fn oracle_cycle_vertices(g: &RawGraph) -> BTreeSet<usize> {
    simple_cycles(g)
        .iter()
        .flat_map(|c| c.iter().map(|&e| g.edges[e].0))
        .collect()
}

/// True if some vertex can reach itself along a nonempty path.
pub fn has_cycle(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0..n).any(|start| {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = g
            .out_edge_indices(start)
            .iter()
            .map(|&e| g.range_index(e))
            .collect();
        while let Some(v) = stack.pop() {
            if v == start {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(g.out_edge_indices(v).iter().map(|&e| g.range_index(e)));
        }
        false
    })
}

/// Number of paths of each length `0..=max_len` that end at `v`, by
/// dynamic programming over lengths.
pub fn paths_into(g: &Graph, v: &str, max_len: usize) -> Vec<u64> {
    let n = g.vertex_count();
    // ways[w] = number of paths of the current length from w to v
    let mut ways = vec![0u64; n];
    ways[g.vertex_index(v).unwrap()] = 1;
    let mut out = vec![1];
    for _ in 0..max_len {
        let mut next = vec![0u64; n];
        for (e, _) in g.edges().iter().enumerate() {
            next[g.source_index(e)] += ways[g.range_index(e)];
        }
        out.push(next.iter().sum());
        ways = next;
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> RawGraph {
    let vertices = rng.gen_range(1..=max_vertices);
    let count = rng.gen_range(0..=max_edges);
    let edges = (0..count)
        .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
        .collect();
    RawGraph { vertices, edges }
}

/// A graph satisfying the no-entrance condition with `1..=max_loops`
/// disjoint loops: loop vertices receive only their loop edge, and every
/// other edge either leaves a loop or goes forward among the extra vertices.
pub fn random_condition5_graph(rng: &mut impl Rng, max_loops: usize) -> RawGraph {
    let loops = rng.gen_range(1..=max_loops);
    let mut edges = Vec::new();
    let mut next = 0;
    let mut loop_vertices = Vec::new();
    for _ in 0..loops {
        let len = rng.gen_range(1..=4);
        for i in 0..len {
            edges.push((next + i, next + (i + 1) % len));
            loop_vertices.push(next + i);
        }
        next += len;
    }
    let extra = rng.gen_range(0..=3);
    let vertices = next + extra;
    for _ in 0..rng.gen_range(0..=4) {
        if extra == 0 {
            break;
        }
        let r = next + rng.gen_range(0..extra);
        let s = if rng.gen_bool(0.5) && r > next {
            rng.gen_range(next..r)
        } else {
            loop_vertices[rng.gen_range(0..loop_vertices.len())]
        };
        edges.push((s, r));
    }
    RawGraph { vertices, edges }
}

/// A random graph containing a loop with an entrance.
pub fn random_entrance_graph(rng: &mut impl Rng) -> RawGraph {
    let len = rng.gen_range(1..=4);
    let vertices = len + rng.gen_range(0..=3);
    let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    let target = rng.gen_range(0..len);
    edges.push((rng.gen_range(0..vertices), target));
    for _ in 0..rng.gen_range(0..=4) {
        edges.push((rng.gen_range(0..vertices), rng.gen_range(0..vertices)));
    }
    // shuffle declaration order so the loop is not always listed first
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    RawGraph { vertices, edges }
}

/// The 4-cycle `e_i : u_i → u_{i+1}`.
pub fn square() -> Graph {
    Graph::builder()
        .vertices(["u1", "u2", "u3", "u4"])
        .edge("e1", "u1", "u2")
        .edge("e2", "u2", "u3")
        .edge("e3", "u3", "u4")
        .edge("e4", "u4", "u1")
        .build()
        .unwrap()
}

pub fn raw_square() -> RawGraph {
    RawGraph {
        vertices: 4,
        edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
    }
}

/// `F` for the 4-cycle as drawn: the square's vertices, the sink `v`, the
/// four `f` edges and a tail cut after `levels` levels of doubled edges.
/// Built by hand, not through the embedding code.
pub fn raw_figure_f(levels: usize) -> RawGraph {
    // vertices 0..4 = u1..u4, 4 = v, 5.. = tail levels
    let mut edges: Vec<(usize, usize)> = (0..4).map(|i| (4, i)).collect();
    for k in 1..=levels {
        let from = 4 + k;
        let to = if k == 1 { 4 } else { 4 + k - 1 };
        edges.push((from, to));
        edges.push((from, to));
    }
    RawGraph {
        vertices: 5 + levels,
        edges,
    }
}
