//! Finite directed multigraphs and their paths.
//!
//! Conventions follow the receive-side Cuntz-Krieger setup: an edge `e` runs
//! from its source `s(e)` to its range `r(e)`, and a path is written
//! `(α_n, …, α_1)` with the range end first, so `r(α_i) = s(α_{i+1})`.
//! [`Path::edges`] stores edges in exactly that order: index 0 is `α_n`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::id::{EdgeId, InvalidId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    InvalidId(#[from] InvalidId),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    UndeclaredEndpoint { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edges are not composable: r({inner}) != s({outer})")]
    NotComposable { inner: String, outer: String },
    #[error("empty edge list does not name a path")]
    EmptyPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub range: VertexId,
}

/// A finite directed multigraph `E = (E^0, E^1, r, s)`.
///
/// Vertices are kept sorted by id; edges keep their declaration order.
/// Parallel edges and self-loops are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    vertex_index: BTreeMap<VertexId, usize>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<EdgeId, usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let mut vertex_index = BTreeMap::new();
        for v in vertices {
            let name = v.to_string();
            if vertex_index.insert(v, 0).is_some() {
                return Err(GraphError::DuplicateVertex(name));
            }
        }
        let vertices: Vec<VertexId> = vertex_index.keys().cloned().collect();
        for (i, v) in vertices.iter().enumerate() {
            vertex_index.insert(v.clone(), i);
        }

        let mut in_edges = alloc::vec![Vec::new(); vertices.len()];
        let mut out_edges = alloc::vec![Vec::new(); vertices.len()];
        let mut edge_index = BTreeMap::new();
        let mut stored = Vec::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let endpoint = |v: &VertexId| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UndeclaredEndpoint {
                        edge: edge.id.to_string(),
                        vertex: v.to_string(),
                    })
            };
            let s = endpoint(&edge.source)?;
            let r = endpoint(&edge.range)?;
            if edge_index.insert(edge.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateEdge(edge.id.to_string()));
            }
            out_edges[s].push(i);
            in_edges[r].push(i);
            stored.push(edge);
        }

        Ok(Graph {
            vertices,
            vertex_index,
            edges: stored,
            edge_index,
            in_edges,
            out_edges,
        })
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Vertices in sorted order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in declaration order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn edge_index(&self, e: &str) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertex_index.contains_key(v)
    }

    pub fn edge(&self, e: &str) -> Option<&Edge> {
        self.edge_index(e).map(|i| &self.edges[i])
    }

    /// Indices of the edges whose range is vertex `v` (by index).
    pub fn in_edge_indices(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Indices of the edges whose source is vertex `v` (by index).
    pub fn out_edge_indices(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn source_index(&self, edge: usize) -> usize {
        self.vertex_index[&self.edges[edge].source]
    }

    pub fn range_index(&self, edge: usize) -> usize {
        self.vertex_index[&self.edges[edge].range]
    }

    /// `r^{-1}(v)`: the edges received by `v`, in declaration order.
    pub fn receivers(&self, v: &str) -> Result<Vec<EdgeId>, GraphError> {
        let i = self
            .vertex_index(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        Ok(self.in_edges[i]
            .iter()
            .map(|&e| self.edges[e].id.clone())
            .collect())
    }

    /// Whether `(α_n, …, α_1)` (range end first) is composable.
    pub fn is_path(&self, edges: &[&str]) -> Result<bool, GraphError> {
        let resolved = edges
            .iter()
            .map(|e| {
                self.edge(e)
                    .ok_or_else(|| GraphError::UnknownEdge(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(resolved.windows(2).all(|w| w[1].range == w[0].source))
    }

    /// Builds the path `(α_n, …, α_1)` from edge ids listed range end first.
    pub fn path(&self, edges: &[&str]) -> Result<Path, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        let resolved = edges
            .iter()
            .map(|e| {
                self.edge(e)
                    .ok_or_else(|| GraphError::UnknownEdge(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for w in resolved.windows(2) {
            if w[1].range != w[0].source {
                return Err(GraphError::NotComposable {
                    inner: w[1].id.to_string(),
                    outer: w[0].id.to_string(),
                });
            }
        }
        Ok(Path {
            range: resolved[0].range.clone(),
            source: resolved[resolved.len() - 1].source.clone(),
            edges: resolved.iter().map(|e| e.id.clone()).collect(),
        })
    }

    pub fn vertex_path(&self, v: &str) -> Result<Path, GraphError> {
        let i = self
            .vertex_index(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        Ok(Path::vertex(self.vertices[i].clone()))
    }
}

/// Incremental construction from string tokens.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_string());
        self
    }

    pub fn vertices<'a>(mut self, ids: impl IntoIterator<Item = &'a str>) -> Self {
        self.vertices.extend(ids.into_iter().map(String::from));
        self
    }

    /// Adds edge `id` from `source` to `range`.
    pub fn edge(mut self, id: &str, source: &str, range: &str) -> Self {
        self.edges
            .push((id.to_string(), source.to_string(), range.to_string()));
        self
    }

    pub fn build(self) -> Result<Graph, GraphError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexId::new(v))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|(id, s, r)| {
                Ok(Edge {
                    id: EdgeId::new(id)?,
                    source: VertexId::new(s)?,
                    range: VertexId::new(r)?,
                })
            })
            .collect::<Result<Vec<_>, InvalidId>>()?;
        Graph::new(vertices, edges)
    }
}

/// A finite path; a vertex is a path of length zero.
///
/// `edges[0]` is the range-end edge `α_n`, `edges[len-1]` the source-end `α_1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub(crate) range: VertexId,
    pub(crate) source: VertexId,
    pub(crate) edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path {
            range: v.clone(),
            source: v,
            edges: Vec::new(),
        }
    }

    /// Trusted constructor; callers guarantee composability.
    pub(crate) fn from_parts(range: VertexId, source: VertexId, edges: Vec<EdgeId>) -> Self {
        Path {
            range,
            source,
            edges,
        }
    }

    pub fn range(&self) -> &VertexId {
        &self.range
    }

    pub fn source(&self) -> &VertexId {
        &self.source
    }

    /// Edges range end first.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// `self · inner`: traverse `inner` first, then `self`.
    /// Requires `r(inner) = s(self)`.
    pub fn concat(&self, inner: &Path) -> Option<Path> {
        if inner.range != self.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend(inner.edges.iter().cloned());
        Some(Path {
            range: self.range.clone(),
            source: inner.source.clone(),
            edges,
        })
    }

    /// Splits into `(outer, inner)` with `outer` holding the `k` range-end
    /// edges, so that `outer.concat(&inner) == self`.
    pub fn split_at(&self, k: usize, graph: &Graph) -> Option<(Path, Path)> {
        if k > self.len() {
            return None;
        }
        let mid = if k == 0 {
            self.range.clone()
        } else {
            graph.edge(self.edges[k - 1].as_str())?.source.clone()
        };
        Some((
            Path {
                range: self.range.clone(),
                source: mid.clone(),
                edges: self.edges[..k].to_vec(),
            },
            Path {
                range: mid,
                source: self.source.clone(),
                edges: self.edges[k..].to_vec(),
            },
        ))
    }

    /// True if `self` is a range-side prefix of `other`, i.e.
    /// `other = self · μ` for some path `μ`.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.range == other.range && other.edges.starts_with(&self.edges)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "{}", self.range);
        }
        f.write_str("(")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The four-cycle u1 → u2 → u3 → u4 → u1 with e_i : u_i → u_{i+1}.
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

    pub fn square_with_entrance() -> Graph {
        Graph::builder()
            .vertices(["u1", "u2", "u3", "u4", "w"])
            .edge("e1", "u1", "u2")
            .edge("e2", "u2", "u3")
            .edge("e3", "u3", "u4")
            .edge("e4", "u4", "u1")
            .edge("x", "w", "u2")
            .build()
            .unwrap()
    }

    pub fn double_self_loop() -> Graph {
        Graph::builder()
            .vertex("v")
            .edge("a", "v", "v")
            .edge("b", "v", "v")
            .build()
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn receivers_of_square_vertex() {
        let g = square();
        assert_eq!(g.receivers("u2").unwrap(), vec![EdgeId::new("e1").unwrap()]);
    }

    #[test]
    fn receivers_of_isolated_vertex_is_empty() {
        let g = Graph::builder().vertex("z").build().unwrap();
        assert!(g.receivers("z").unwrap().is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn receivers_with_parallel_self_loops() {
        let g = double_self_loop();
        let r = g.receivers("v").unwrap();
        assert_eq!(r.len(), 2);
        assert!(matches!(
            g.receivers("nope"),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn composability() {
        let g = square();
        assert!(g.is_path(&["e2", "e1"]).unwrap());
        assert!(!g.is_path(&["e1", "e3"]).unwrap());
        assert!(g.is_path(&["e3"]).unwrap());
        assert!(matches!(
            g.is_path(&["zz"]),
            Err(GraphError::UnknownEdge(_))
        ));
    }

    #[test]
    fn undeclared_endpoint_and_duplicates() {
        let err = Graph::builder().vertex("a").edge("e", "a", "b").build();
        assert!(matches!(err, Err(GraphError::UndeclaredEndpoint { .. })));
        let err = Graph::builder().vertex("a").vertex("a").build();
        assert!(matches!(err, Err(GraphError::DuplicateVertex(_))));
        let err = Graph::builder()
            .vertex("a")
            .edge("e", "a", "a")
            .edge("e", "a", "a")
            .build();
        assert!(matches!(err, Err(GraphError::DuplicateEdge(_))));
    }

    #[test]
    fn path_endpoints_follow_range_first_order() {
        let g = square();
        let p = g.path(&["e3", "e2", "e1"]).unwrap();
        assert_eq!(p.source().as_str(), "u1");
        assert_eq!(p.range().as_str(), "u4");
        let (outer, inner) = p.split_at(1, &g).unwrap();
        assert_eq!(outer.edges().len(), 1);
        assert_eq!(inner.range().as_str(), "u3");
        assert_eq!(outer.concat(&inner).unwrap(), p);
        assert!(g.path(&["e1", "e2"]).is_err());
    }
}
