use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::id::{EdgeId, TailId, VertexId};

/// What the rewriting engine needs to know about the ambient graph.
///
/// The graph may be infinite (lazy Bratteli tails); only finite receiver
/// sets are ever requested.
pub trait CkContext {
    /// `(s(e), r(e))` if `e` is an edge.
    fn endpoints(&self, e: &str) -> Option<(VertexId, VertexId)>;

    fn vertex(&self, v: &str) -> Option<VertexId>;

    /// `r^{-1}(v)`, or `None` if `v` is not a vertex.
    fn receivers(&self, v: &str) -> Option<Vec<EdgeId>>;

    fn receiver_count(&self, v: &str) -> Option<usize> {
        self.receivers(v).map(|r| r.len())
    }

    /// The sink vertex whose corner carries the unitary of `tail`.
    fn unitary_sink(&self, tail: &str) -> Option<VertexId>;

    fn edge_id(&self, e: &str) -> Option<EdgeId> {
        self.endpoints(e).and_then(|_| EdgeId::new(e).ok())
    }
}

impl CkContext for Graph {
    fn endpoints(&self, e: &str) -> Option<(VertexId, VertexId)> {
        self.edge(e).map(|x| (x.source.clone(), x.range.clone()))
    }

    fn vertex(&self, v: &str) -> Option<VertexId> {
        self.vertex_index(v).map(|i| self.vertices()[i].clone())
    }

    fn receivers(&self, v: &str) -> Option<Vec<EdgeId>> {
        Graph::receivers(self, v).ok()
    }

    fn receiver_count(&self, v: &str) -> Option<usize> {
        self.vertex_index(v).map(|i| self.in_edge_indices(i).len())
    }

    fn unitary_sink(&self, _tail: &str) -> Option<VertexId> {
        None
    }

    fn edge_id(&self, e: &str) -> Option<EdgeId> {
        self.edge(e).map(|x| x.id.clone())
    }
}

/// A finite graph together with formal unitaries attached to some of its
/// vertices; the context of a depth-truncated augmented graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailedGraph {
    pub graph: Graph,
    pub tails: BTreeMap<TailId, VertexId>,
}

impl CkContext for TailedGraph {
    fn endpoints(&self, e: &str) -> Option<(VertexId, VertexId)> {
        self.graph.endpoints(e)
    }

    fn vertex(&self, v: &str) -> Option<VertexId> {
        CkContext::vertex(&self.graph, v)
    }

    fn receivers(&self, v: &str) -> Option<Vec<EdgeId>> {
        CkContext::receivers(&self.graph, v)
    }

    fn receiver_count(&self, v: &str) -> Option<usize> {
        CkContext::receiver_count(&self.graph, v)
    }

    fn unitary_sink(&self, tail: &str) -> Option<VertexId> {
        self.tails.get(tail).cloned()
    }

    fn edge_id(&self, e: &str) -> Option<EdgeId> {
        CkContext::edge_id(&self.graph, e)
    }
}
