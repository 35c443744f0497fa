//! Cycle and entrance analysis, and the finiteness classifier.
//!
//! "No loop has an entrance" is decided as "every vertex lying on a cycle has
//! exactly one receiver". If a cycle vertex `w` received two edges, any loop
//! through `w` has an entrance at `w`; conversely an entrance at `r(α_i)`
//! is a cycle vertex with at least two receivers. For non-simple loops the
//! literal definition visits some vertices twice, but the set of visited
//! vertices is the same union of cycle vertices, so nothing changes.
//!
//! Under that condition every nontrivial strongly connected component is a
//! single directed cycle, which is why [`disjoint_simple_loops`] can recover
//! the loops by walking unique receivers backwards.

use alloc::boxed::Box;
use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Path};
use crate::id::{EdgeId, VertexId};
use crate::scc::strongly_connected_components;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a simple loop: {0}")]
    InvalidLoop(String),
    #[error("invalid entrance witness: {0}")]
    InvalidWitness(String),
    #[error("a loop has an entrance at `{}` (edge `{}`)", .0.entry_vertex(), .0.entry_edge())]
    EntranceExists(Box<EntranceWitness>),
}

/// A simple loop `e_n ⋯ e_1` with `u_i = s(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleLoop {
    /// `(e_n, …, e_1)`, range end first.
    edges: Vec<EdgeId>,
    /// `(u_1, …, u_n)`.
    vertices: Vec<VertexId>,
}

impl SimpleLoop {
    /// Validates `(e_n, …, e_1)` against `g`.
    pub fn new(g: &Graph, edges: &[&str]) -> Result<Self, LoopError> {
        let path = g.path(edges)?;
        if path.range() != path.source() {
            return Err(LoopError::InvalidLoop(format!(
                "r(α) = {} differs from s(α) = {}",
                path.range(),
                path.source()
            )));
        }
        let mut seen = BTreeSet::new();
        for e in path.edges() {
            let range = &g.edge(e.as_str()).expect("resolved above").range;
            if !seen.insert(range.clone()) {
                return Err(LoopError::InvalidLoop(format!(
                    "vertex {range} is visited twice"
                )));
            }
        }
        let vertices = path
            .edges()
            .iter()
            .rev()
            .map(|e| g.edge(e.as_str()).expect("resolved above").source.clone())
            .collect();
        Ok(SimpleLoop {
            edges: path.edges().to_vec(),
            vertices,
        })
    }

    /// Rebuilds a loop from `(e_1, …, e_n)` and `(u_1, …, u_n)`, taking
    /// `e_i : u_i → u_{i+1}` as given. Used when the host graph no longer
    /// contains the loop edges.
    pub fn from_cycle(edges: Vec<EdgeId>, vertices: Vec<VertexId>) -> Result<Self, LoopError> {
        if edges.is_empty() || edges.len() != vertices.len() {
            return Err(LoopError::InvalidLoop(
                "needs one vertex per edge and at least one edge".to_string(),
            ));
        }
        if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return Err(LoopError::InvalidLoop("repeated vertex".to_string()));
        }
        if edges.iter().collect::<BTreeSet<_>>().len() != edges.len() {
            return Err(LoopError::InvalidLoop("repeated edge".to_string()));
        }
        let mut edges = edges;
        edges.reverse();
        Ok(SimpleLoop { edges, vertices })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(e_n, …, e_1)`.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// `(u_1, …, u_n)`.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// `e_i`, 1-based.
    pub fn edge(&self, i: usize) -> &EdgeId {
        &self.edges[self.edges.len() - i]
    }

    /// `u_i = s(e_i)`, 1-based.
    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i - 1]
    }

    pub fn contains_edge(&self, e: &str) -> bool {
        self.edges.iter().any(|x| x.as_str() == e)
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x.as_str() == v)
    }

    /// The loop as a path based at `u_1`.
    pub fn as_path(&self) -> Path {
        Path::from_parts(
            self.vertices[0].clone(),
            self.vertices[0].clone(),
            self.edges.clone(),
        )
    }

    /// The same loop with `u_1 = v`.
    pub fn rotated_to(&self, v: &str) -> Option<SimpleLoop> {
        let k = self.vertices.iter().position(|x| x.as_str() == v)?;
        let n = self.len();
        let mut ascending: Vec<EdgeId> = self.edges.iter().rev().cloned().collect();
        ascending.rotate_left(k);
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(k);
        debug_assert_eq!(vertices.len(), n);
        ascending.reverse();
        Some(SimpleLoop {
            edges: ascending,
            vertices,
        })
    }
}

impl fmt::Display for SimpleLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Evidence that `C^*(E)` is infinite: a loop `α` based at a vertex that
/// also receives an edge off the loop, and a second path `β` with the same
/// range whose range projection is orthogonal to that of `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntranceWitness {
    simple_loop: SimpleLoop,
    entry_vertex: VertexId,
    entry_edge: EdgeId,
    alpha: Path,
    beta: Path,
}

impl EntranceWitness {
    pub fn new(
        g: &Graph,
        simple_loop: SimpleLoop,
        entry_vertex: VertexId,
        entry_edge: EdgeId,
        alpha: Path,
        beta: Path,
    ) -> Result<Self, LoopError> {
        let w = EntranceWitness {
            simple_loop,
            entry_vertex,
            entry_edge,
            alpha,
            beta,
        };
        w.validate(g)?;
        Ok(w)
    }

    pub fn simple_loop(&self) -> &SimpleLoop {
        &self.simple_loop
    }

    pub fn entry_vertex(&self) -> &VertexId {
        &self.entry_vertex
    }

    pub fn entry_edge(&self) -> &EdgeId {
        &self.entry_edge
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn validate(&self, g: &Graph) -> Result<(), LoopError> {
        let bad = |msg: String| Err(LoopError::InvalidWitness(msg));
        let edges: Vec<&str> = self.simple_loop.edges.iter().map(|e| e.as_str()).collect();
        let relooped = SimpleLoop::new(g, &edges)?;
        if relooped.vertices.iter().collect::<BTreeSet<_>>()
            != self.simple_loop.vertices.iter().collect::<BTreeSet<_>>()
        {
            return bad("loop vertices do not match its edges".to_string());
        }
        let v = self.entry_vertex.as_str();
        if !self.simple_loop.contains_vertex(v) {
            return bad(format!("entry vertex {v} is not on the loop"));
        }
        let receivers = g.receivers(v)?;
        if receivers.len() < 2 {
            return bad(format!(
                "entry vertex {v} has only {} receiver(s)",
                receivers.len()
            ));
        }
        if !receivers.contains(&self.entry_edge) {
            return bad(format!("{} is not received by {v}", self.entry_edge));
        }
        if self.simple_loop.contains_edge(self.entry_edge.as_str()) {
            return bad(format!("{} lies on the loop", self.entry_edge));
        }
        for (name, p) in [("α", &self.alpha), ("β", &self.beta)] {
            let edges: Vec<&str> = p.edges().iter().map(|e| e.as_str()).collect();
            if edges.is_empty() {
                return bad(format!("{name} has length zero"));
            }
            if g.path(&edges)? != *p {
                return bad(format!("{name} has inconsistent endpoints"));
            }
        }
        if self.alpha.range() != self.alpha.source() || self.alpha.range().as_str() != v {
            return bad("α is not a loop based at the entry vertex".to_string());
        }
        if self.beta.range() != self.alpha.range() {
            return bad("r(β) differs from r(α)".to_string());
        }
        if self.alpha == self.beta {
            return bad("α and β coincide".to_string());
        }
        if self.alpha.is_prefix_of(&self.beta) || self.beta.is_prefix_of(&self.alpha) {
            return bad("α and β have nested range projections".to_string());
        }
        Ok(())
    }
}

/// The inequality `s_α s_α^* ⪇ s_α s_α^* + s_β s_β^* ≤ p_{s(α)}` for a
/// validated witness, rendered in the term grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfiniteProjection {
    pub vertex: VertexId,
    pub alpha: Path,
    pub beta: Path,
    pub chain: String,
}

/// The finiteness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    /// No loops: the algebra is AF.
    Af,
    /// Loops exist but none has an entrance: AF-embeddable, not AF.
    AfEmbeddableNotAf,
    /// Some loop has an entrance: the algebra is infinite.
    NotFinite,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Af => "AF",
            Verdict::AfEmbeddableNotAf => "AF_EMBEDDABLE_NOT_AF",
            Verdict::NotFinite => "NOT_FINITE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Af,
    AfEmbeddable { loops: Vec<SimpleLoop> },
    NotFinite { witness: EntranceWitness },
}

impl Classification {
    pub fn verdict(&self) -> Verdict {
        match self {
            Classification::Af => Verdict::Af,
            Classification::AfEmbeddable { .. } => Verdict::AfEmbeddableNotAf,
            Classification::NotFinite { .. } => Verdict::NotFinite,
        }
    }
}

fn vertex_successors(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| {
            g.out_edge_indices(v)
                .iter()
                .map(|&e| g.range_index(e))
                .collect()
        })
        .collect()
}

/// Component id per vertex, and whether that component carries a cycle.
fn cyclic_components(g: &Graph) -> (Vec<usize>, Vec<bool>) {
    let comps = strongly_connected_components(&vertex_successors(g));
    let mut comp_of = vec![0; g.vertex_count()];
    let mut cyclic = vec![false; comps.len()];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
        cyclic[c] = members.len() > 1
            || g.out_edge_indices(members[0])
                .iter()
                .any(|&e| g.range_index(e) == members[0]);
    }
    (comp_of, cyclic)
}

/// Vertices lying on at least one loop.
pub fn cycle_vertices(g: &Graph) -> BTreeSet<VertexId> {
    let (comp_of, cyclic) = cyclic_components(g);
    g.vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| cyclic[comp_of[*i]])
        .map(|(_, v)| v.clone())
        .collect()
}

fn min_edge_by_id(g: &Graph, edges: impl Iterator<Item = usize>) -> Option<usize> {
    edges.min_by(|&a, &b| g.edges()[a].id.cmp(&g.edges()[b].id))
}

/// Smallest cycle vertex (by id) receiving more than one edge, paired with a
/// receiver that does not lie on [`loop_through`] for that vertex.
pub fn entrance_violation(g: &Graph) -> Option<(VertexId, EdgeId)> {
    let (comp_of, cyclic) = cyclic_components(g);
    let v =
        (0..g.vertex_count()).find(|&v| cyclic[comp_of[v]] && g.in_edge_indices(v).len() > 1)?;
    let closing = closing_edge(g, v, &comp_of);
    let entry = min_edge_by_id(
        g,
        g.in_edge_indices(v)
            .iter()
            .copied()
            .filter(|&e| e != closing),
    )
    .expect("at least two receivers");
    Some((g.vertices()[v].clone(), g.edges()[entry].id.clone()))
}

/// Receiver of `v` from inside its own component, smallest by id.
fn closing_edge(g: &Graph, v: usize, comp_of: &[usize]) -> usize {
    min_edge_by_id(
        g,
        g.in_edge_indices(v)
            .iter()
            .copied()
            .filter(|&e| comp_of[g.source_index(e)] == comp_of[v]),
    )
    .expect("cycle vertex has an in-component receiver")
}

/// A simple loop based at cycle vertex `v`: the smallest in-component
/// receiver of `v`, preceded by a shortest path from `v` to its source
/// (ties broken by edge id).
pub fn loop_through(g: &Graph, v: &str) -> Option<SimpleLoop> {
    let (comp_of, cyclic) = cyclic_components(g);
    let vi = g.vertex_index(v)?;
    if !cyclic[comp_of[vi]] {
        return None;
    }
    let closing = closing_edge(g, vi, &comp_of);
    let target = g.source_index(closing);

    // BFS from v to target inside the component.
    let mut prev: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[vi] = true;
    let mut queue = VecDeque::from([vi]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        let mut outs: Vec<usize> = g
            .out_edge_indices(x)
            .iter()
            .copied()
            .filter(|&e| comp_of[g.range_index(e)] == comp_of[vi])
            .collect();
        outs.sort_by(|&a, &b| g.edges()[a].id.cmp(&g.edges()[b].id));
        for e in outs {
            let y = g.range_index(e);
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some(e);
                queue.push_back(y);
            }
        }
    }

    let mut edges = vec![g.edges()[closing].id.as_str()];
    let mut x = target;
    while x != vi {
        let e = prev[x].expect("target reachable inside its component");
        edges.push(g.edges()[e].id.as_str());
        x = g.source_index(e);
    }
    SimpleLoop::new(g, &edges).ok()
}

fn witness_at(g: &Graph, v: VertexId, entry: EdgeId) -> EntranceWitness {
    let simple_loop = loop_through(g, v.as_str()).expect("entrance vertex lies on a cycle");
    let alpha = simple_loop.as_path();
    let beta = g.path(&[entry.as_str()]).expect("entry edge exists");
    EntranceWitness::new(g, simple_loop, v, entry, alpha, beta)
        .expect("constructed witness is valid")
}

/// The loops of a graph with no entrances, one per cyclic component, each
/// rotated so that `u_1` is the smallest vertex id on it. Sorted by `u_1`.
pub fn disjoint_simple_loops(g: &Graph) -> Result<Vec<SimpleLoop>, LoopError> {
    if let Some((v, e)) = entrance_violation(g) {
        return Err(LoopError::EntranceExists(Box::new(witness_at(g, v, e))));
    }
    let (comp_of, cyclic) = cyclic_components(g);
    let mut done = vec![false; cyclic.len()];
    let mut loops = Vec::new();
    for v in 0..g.vertex_count() {
        let c = comp_of[v];
        if !cyclic[c] || done[c] {
            continue;
        }
        done[c] = true;
        let mut edges = Vec::new();
        let mut x = v;
        loop {
            let e = g.in_edge_indices(x)[0];
            edges.push(g.edges()[e].id.as_str());
            x = g.source_index(e);
            if x == v {
                break;
            }
        }
        loops.push(SimpleLoop::new(g, &edges)?);
    }
    Ok(loops)
}

pub fn classify(g: &Graph) -> Classification {
    if cycle_vertices(g).is_empty() {
        return Classification::Af;
    }
    match disjoint_simple_loops(g) {
        Ok(loops) => Classification::AfEmbeddable { loops },
        Err(LoopError::EntranceExists(w)) => Classification::NotFinite { witness: *w },
        Err(e) => unreachable!("loop extraction on a valid graph failed: {e}"),
    }
}

fn range_projection(p: &Path) -> String {
    let mut out = String::new();
    for e in p.edges() {
        out.push_str(&format!("s({e}) "));
    }
    let n = p.edges().len();
    for (i, e) in p.edges().iter().rev().enumerate() {
        out.push_str(&format!("s*({e})"));
        if i + 1 < n {
            out.push(' ');
        }
    }
    out
}

/// The infinite-projection statement for a witness valid in `g`.
pub fn witness_infinite(g: &Graph, w: &EntranceWitness) -> Result<InfiniteProjection, LoopError> {
    w.validate(g)?;
    let a = range_projection(&w.alpha);
    let b = range_projection(&w.beta);
    let v = w.alpha.source().clone();
    Ok(InfiniteProjection {
        chain: format!("{a} < {a} + {b} <= p({v})"),
        vertex: v,
        alpha: w.alpha.clone(),
        beta: w.beta.clone(),
    })
}
