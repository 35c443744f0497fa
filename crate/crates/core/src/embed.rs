//! Replacing each loop by a Bratteli tail.
//!
//! For a graph with no entrances, every loop `e_n ⋯ e_1` (with
//! `u_i = s(e_i)`) is removed and replaced by a fresh sink `v`, edges
//! `f_i : v → u_i`, and an infinite single-vertex-per-level tail
//! `⋯ ⇉ ℓ_2 ⇉ ℓ_1 ⇉ ℓ_0 = v` with `mult(k)` parallel edges from `ℓ_k` to
//! `ℓ_{k-1}`. The corner at `v` is the UHF algebra with stage sizes
//! `N_k = mult(1) ⋯ mult(k)`, which carries a unitary `t` with full
//! spectrum. The loop edges are then sent to `s_{f_{i+1}} t s_{f_i}^*`,
//! indices taken cyclically (`f_{n+1} = f_1`).
//!
//! Generated ids live under a per-loop namespace `ns`:
//! `ns.v`, `ns.L<k>.1`, `ns.f<i>`, `ns.b<k>.<m>` (all indices 1-based).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};
use crate::id::{EdgeId, TailId, VertexId};
use crate::loops::{classify, Classification, EntranceWitness, LoopError, SimpleLoop};
use crate::symbolic::{CkContext, CkTerm, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("a loop has an entrance at `{}` (edge `{}`); no AF embedding exists", .0.entry_vertex(), .0.entry_edge())]
    EntranceExists(Box<EntranceWitness>),
    #[error("invalid multiplicity sequence: {0}")]
    InvalidMultiplicity(String),
    #[error("generated id `{0}` collides with an existing id")]
    NamespaceCollision(String),
    #[error("inconsistent augmented graph: {0}")]
    InvalidSpec(String),
    #[error("no tail with index {0}")]
    UnknownTail(usize),
    #[error("corner dimension overflows u64 at level {0}")]
    Overflow(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Edge multiplicities `mult(1), mult(2), …` of a tail: a finite prefix
/// followed by a constant value repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicitySeq {
    prefix: Vec<u32>,
    tail: u32,
}

impl MultiplicitySeq {
    /// Every entry must be at least 1 and the repeated value at least 2, so
    /// that the stage sizes grow without bound.
    pub fn new(prefix: Vec<u32>, tail: u32) -> Result<Self, EmbedError> {
        if prefix.contains(&0) {
            return Err(EmbedError::InvalidMultiplicity(
                "multiplicities must be at least 1".into(),
            ));
        }
        if tail < 2 {
            return Err(EmbedError::InvalidMultiplicity(format!(
                "repeating value {tail} < 2 gives a finite-dimensional corner"
            )));
        }
        Ok(MultiplicitySeq { prefix, tail })
    }

    pub fn uniform(m: u32) -> Result<Self, EmbedError> {
        Self::new(Vec::new(), m)
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn repeating(&self) -> u32 {
        self.tail
    }

    /// `mult(k)` for `k ≥ 1`.
    pub fn get(&self, k: usize) -> u32 {
        assert!(k >= 1, "tail levels start at 1");
        self.prefix.get(k - 1).copied().unwrap_or(self.tail)
    }
}

impl Default for MultiplicitySeq {
    fn default() -> Self {
        MultiplicitySeq {
            prefix: Vec::new(),
            tail: 2,
        }
    }
}

/// `prefix,…;tail`, or just `tail`.
impl FromStr for MultiplicitySeq {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| EmbedError::InvalidMultiplicity(format!("`{x}` is not a count")))
        };
        let (prefix, tail) = match s.split_once(';') {
            Some((p, t)) => (p, t),
            None => ("", s),
        };
        let prefix = prefix
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?;
        MultiplicitySeq::new(prefix, num(tail)?)
    }
}

impl fmt::Display for MultiplicitySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            for (i, m) in self.prefix.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{m}")?;
            }
            f.write_str(";")?;
        }
        write!(f, "{}", self.tail)
    }
}

/// A Bratteli tail with sink `ns.v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliTailSpec {
    namespace: TailId,
    sink: VertexId,
    mult: MultiplicitySeq,
}

fn generated_vertex(ns: &TailId, suffix: &str) -> VertexId {
    VertexId::new(&format!("{ns}.{suffix}")).expect("namespace and suffix are valid tokens")
}

fn generated_edge(ns: &TailId, suffix: &str) -> EdgeId {
    EdgeId::new(&format!("{ns}.{suffix}")).expect("namespace and suffix are valid tokens")
}

/// Parses a decimal written without leading zeros.
fn canonical_index(s: &str) -> Option<usize> {
    let n: usize = s.parse().ok()?;
    (n.to_string() == s).then_some(n)
}

impl BratteliTailSpec {
    pub fn new(namespace: TailId, mult: MultiplicitySeq) -> Self {
        let sink = generated_vertex(&namespace, "v");
        BratteliTailSpec {
            namespace,
            sink,
            mult,
        }
    }

    pub fn namespace(&self) -> &TailId {
        &self.namespace
    }

    pub fn sink(&self) -> &VertexId {
        &self.sink
    }

    pub fn mult(&self) -> &MultiplicitySeq {
        &self.mult
    }

    /// `ℓ_k`; `ℓ_0` is the sink.
    pub fn level_vertex(&self, k: usize) -> VertexId {
        if k == 0 {
            self.sink.clone()
        } else {
            generated_vertex(&self.namespace, &format!("L{k}.1"))
        }
    }

    /// The `m`-th edge from `ℓ_k` to `ℓ_{k-1}`; `k, m ≥ 1`.
    pub fn tail_edge(&self, k: usize, m: u32) -> EdgeId {
        generated_edge(&self.namespace, &format!("b{k}.{m}"))
    }

    pub fn f_edge(&self, i: usize) -> EdgeId {
        generated_edge(&self.namespace, &format!("f{i}"))
    }

    /// Stage sizes `N_0, …, N_depth`.
    pub fn corner_dimensions(&self, depth: usize) -> Result<Vec<u64>, EmbedError> {
        let mut dims = Vec::with_capacity(depth + 1);
        let mut n: u64 = 1;
        dims.push(n);
        for k in 1..=depth {
            n = n
                .checked_mul(u64::from(self.mult.get(k)))
                .ok_or(EmbedError::Overflow(k))?;
            dims.push(n);
        }
        Ok(dims)
    }

    fn owns<'a>(&self, id: &'a str) -> Option<&'a str> {
        id.strip_prefix(self.namespace.as_str())?.strip_prefix('.')
    }

    /// Level `k` if `id` names `ℓ_k` (including the sink as `k = 0`).
    fn parse_level(&self, id: &str) -> Option<usize> {
        let rest = self.owns(id)?;
        if rest == "v" {
            return Some(0);
        }
        let k = canonical_index(rest.strip_prefix('L')?.strip_suffix(".1")?)?;
        (k >= 1).then_some(k)
    }

    /// `(k, m)` if `id` names a tail edge.
    pub(crate) fn parse_tail_edge(&self, id: &str) -> Option<(usize, u32)> {
        let (k, m) = self.owns(id)?.strip_prefix('b')?.split_once('.')?;
        let k = canonical_index(k)?;
        let m = canonical_index(m)?;
        let m = u32::try_from(m).ok()?;
        (k >= 1 && m >= 1 && m <= self.mult.get(k)).then_some((k, m))
    }
}

/// One loop of `E` and the tail that replaces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopReplacement {
    simple_loop: SimpleLoop,
    tail: BratteliTailSpec,
    /// `f_1, …, f_n` with `s(f_i) = v`, `r(f_i) = u_i`.
    f_edges: Vec<Edge>,
}

impl LoopReplacement {
    pub fn new(simple_loop: SimpleLoop, tail: BratteliTailSpec) -> Self {
        let f_edges = (1..=simple_loop.len())
            .map(|i| Edge {
                id: tail.f_edge(i),
                source: tail.sink().clone(),
                range: simple_loop.vertex(i).clone(),
            })
            .collect();
        LoopReplacement {
            simple_loop,
            tail,
            f_edges,
        }
    }

    pub fn simple_loop(&self) -> &SimpleLoop {
        &self.simple_loop
    }

    pub fn tail(&self) -> &BratteliTailSpec {
        &self.tail
    }

    pub fn f_edges(&self) -> &[Edge] {
        &self.f_edges
    }

    /// `f_i`, 1-based and cyclic: `f_{n+1} = f_1`.
    pub fn f(&self, i: usize) -> &Edge {
        &self.f_edges[(i - 1) % self.f_edges.len()]
    }
}

/// The loop-free graph `F`: what is left of `E` plus one tail per loop.
/// The tails are infinite; [`materialize`] cuts them at a depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraphSpec {
    base: Graph,
    replacements: Vec<LoopReplacement>,
}

impl AugmentedGraphSpec {
    /// Checks that the replaced loops are disjoint and absent from `base`,
    /// that each `u_i` receives nothing in `base`, and that generated ids
    /// cannot collide with `base` or with each other.
    pub fn new(base: Graph, replacements: Vec<LoopReplacement>) -> Result<Self, EmbedError> {
        let invalid = |msg: String| Err(EmbedError::InvalidSpec(msg));
        let mut namespaces = Vec::new();
        let mut seen_vertices = Vec::new();
        for rep in &replacements {
            let ns = rep.tail.namespace.as_str();
            if namespaces.iter().any(|other: &&str| {
                ns.starts_with(&format!("{other}."))
                    || other.starts_with(&format!("{ns}."))
                    || *other == ns
            }) {
                return invalid(format!("namespace `{ns}` overlaps another tail"));
            }
            namespaces.push(ns);
            let clash = base
                .vertices()
                .iter()
                .map(|v| v.as_str())
                .chain(base.edges().iter().map(|e| e.id.as_str()))
                .find(|id| rep.tail.owns(id).is_some());
            if let Some(id) = clash {
                return Err(EmbedError::NamespaceCollision(id.to_string()));
            }
            for e in rep.simple_loop.edges() {
                if base.edge(e.as_str()).is_some() {
                    return invalid(format!("replaced loop edge `{e}` is still present"));
                }
            }
            for u in rep.simple_loop.vertices() {
                let receivers = base
                    .receivers(u.as_str())
                    .map_err(|_| EmbedError::InvalidSpec(format!("loop vertex `{u}` missing")))?;
                if !receivers.is_empty() {
                    return invalid(format!("loop vertex `{u}` has an entrance"));
                }
                if seen_vertices.contains(u) {
                    return invalid(format!("loops share vertex `{u}`"));
                }
                seen_vertices.push(u.clone());
            }
            if rep.f_edges
                != LoopReplacement::new(rep.simple_loop.clone(), rep.tail.clone()).f_edges
            {
                return invalid(format!("f edges of `{ns}` do not match the loop"));
            }
        }
        Ok(AugmentedGraphSpec { base, replacements })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn replacements(&self) -> &[LoopReplacement] {
        &self.replacements
    }

    pub fn replacement_for_tail(&self, tail: &str) -> Option<&LoopReplacement> {
        self.replacements
            .iter()
            .find(|r| r.tail.namespace.as_str() == tail)
    }

    fn tail_owning(&self, id: &str) -> Option<&LoopReplacement> {
        self.replacements.iter().find(|r| r.tail.owns(id).is_some())
    }
}

impl CkContext for AugmentedGraphSpec {
    fn endpoints(&self, e: &str) -> Option<(VertexId, VertexId)> {
        if let Some(edge) = self.base.edge(e) {
            return Some((edge.source.clone(), edge.range.clone()));
        }
        let rep = self.tail_owning(e)?;
        if let Some(f) = rep.f_edges.iter().find(|f| f.id.as_str() == e) {
            return Some((f.source.clone(), f.range.clone()));
        }
        let (k, _) = rep.tail.parse_tail_edge(e)?;
        Some((rep.tail.level_vertex(k), rep.tail.level_vertex(k - 1)))
    }

    fn vertex(&self, v: &str) -> Option<VertexId> {
        if let Some(i) = self.base.vertex_index(v) {
            return Some(self.base.vertices()[i].clone());
        }
        let rep = self.tail_owning(v)?;
        rep.tail.parse_level(v).map(|k| rep.tail.level_vertex(k))
    }

    fn receivers(&self, v: &str) -> Option<Vec<EdgeId>> {
        if let Ok(mut r) = self.base.receivers(v) {
            for rep in &self.replacements {
                r.extend(
                    rep.f_edges
                        .iter()
                        .filter(|f| f.range.as_str() == v)
                        .map(|f| f.id.clone()),
                );
            }
            return Some(r);
        }
        let rep = self.tail_owning(v)?;
        let k = rep.tail.parse_level(v)? + 1;
        Some(
            (1..=rep.tail.mult.get(k))
                .map(|m| rep.tail.tail_edge(k, m))
                .collect(),
        )
    }

    fn receiver_count(&self, v: &str) -> Option<usize> {
        if self.base.contains_vertex(v) {
            return self.receivers(v).map(|r| r.len());
        }
        let rep = self.tail_owning(v)?;
        let k = rep.tail.parse_level(v)? + 1;
        Some(rep.tail.mult.get(k) as usize)
    }

    fn unitary_sink(&self, tail: &str) -> Option<VertexId> {
        self.replacement_for_tail(tail).map(|r| r.tail.sink.clone())
    }
}

/// Images of the generators of `C^*(E)` as terms over `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    domain: Graph,
    vertex_images: Vec<CkTerm>,
    edge_images: Vec<CkTerm>,
}

impl GeneratorMap {
    /// `domain` is `E`; images are indexed like `domain.vertices()` and
    /// `domain.edges()`.
    pub fn new(
        domain: Graph,
        vertex_images: Vec<CkTerm>,
        edge_images: Vec<CkTerm>,
    ) -> Result<Self, EmbedError> {
        if vertex_images.len() != domain.vertex_count() || edge_images.len() != domain.edge_count()
        {
            return Err(EmbedError::InvalidSpec(
                "generator map does not cover E^0 ∪ E^1".into(),
            ));
        }
        Ok(GeneratorMap {
            domain,
            vertex_images,
            edge_images,
        })
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn vertex_image(&self, v: &str) -> Option<&CkTerm> {
        self.domain.vertex_index(v).map(|i| &self.vertex_images[i])
    }

    pub fn edge_image(&self, e: &str) -> Option<&CkTerm> {
        self.domain.edge_index(e).map(|i| &self.edge_images[i])
    }

    pub fn vertex_images(&self) -> impl Iterator<Item = (&VertexId, &CkTerm)> {
        self.domain.vertices().iter().zip(&self.vertex_images)
    }

    pub fn edge_images(&self) -> impl Iterator<Item = (&EdgeId, &CkTerm)> {
        self.domain
            .edges()
            .iter()
            .map(|e| &e.id)
            .zip(&self.edge_images)
    }

    pub fn with_vertex_image(mut self, v: &str, term: CkTerm) -> Result<Self, EmbedError> {
        let i = self
            .domain
            .vertex_index(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        self.vertex_images[i] = term;
        Ok(self)
    }

    pub fn with_edge_image(mut self, e: &str, term: CkTerm) -> Result<Self, EmbedError> {
        let i = self
            .domain
            .edge_index(e)
            .ok_or_else(|| GraphError::UnknownEdge(e.to_string()))?;
        self.edge_images[i] = term;
        Ok(self)
    }

    /// True if every image is the corresponding generator itself.
    pub fn is_identity(&self, ctx: &dyn CkContext) -> bool {
        self.vertex_images()
            .all(|(v, t)| CkTerm::p(ctx, v.as_str()).ok().as_ref() == Some(t))
            && self
                .edge_images()
                .all(|(e, t)| CkTerm::s(ctx, e.as_str()).ok().as_ref() == Some(t))
    }
}

fn choose_namespace(g: &Graph, index: usize) -> TailId {
    let mut ns = format!("T{index}");
    let taken = |ns: &str| {
        let dotted = format!("{ns}.");
        g.vertices()
            .iter()
            .map(|v| v.as_str())
            .chain(g.edges().iter().map(|e| e.id.as_str()))
            .any(|id| id.starts_with(&dotted))
    };
    while taken(&ns) {
        ns.push('_');
    }
    TailId::new(&ns).expect("generated namespace is a valid token")
}

/// [`embed_with`] using the all-2 tail (`M_{2^∞}` corners).
pub fn embed(g: &Graph) -> Result<(AugmentedGraphSpec, GeneratorMap), EmbedError> {
    embed_with(g, &MultiplicitySeq::default())
}

/// Builds `F` and the generator map `C^*(E) → C^*(F)`.
///
/// For a loop-free input there is nothing to replace and the map is the
/// identity. Fails with the entrance witness if some loop has an entrance.
pub fn embed_with(
    g: &Graph,
    mult: &MultiplicitySeq,
) -> Result<(AugmentedGraphSpec, GeneratorMap), EmbedError> {
    let loops = match classify(g) {
        Classification::NotFinite { witness } => {
            return Err(EmbedError::EntranceExists(Box::new(witness)))
        }
        Classification::Af => Vec::new(),
        Classification::AfEmbeddable { loops } => loops,
    };

    let replacements: Vec<LoopReplacement> = loops
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            LoopReplacement::new(
                l,
                BratteliTailSpec::new(choose_namespace(g, i + 1), mult.clone()),
            )
        })
        .collect();

    let kept = g
        .edges()
        .iter()
        .filter(|e| {
            !replacements
                .iter()
                .any(|r| r.simple_loop.contains_edge(e.id.as_str()))
        })
        .cloned();
    let base = Graph::new(g.vertices().iter().cloned(), kept)?;
    let spec = AugmentedGraphSpec::new(base, replacements)?;

    let vertex_images = g
        .vertices()
        .iter()
        .map(|v| CkTerm::p(&spec, v.as_str()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut edge_images = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let image = match spec
            .replacements
            .iter()
            .find(|r| r.simple_loop.contains_edge(e.id.as_str()))
        {
            None => CkTerm::s(&spec, e.id.as_str())?,
            Some(rep) => {
                let n = rep.simple_loop.len();
                let i = (1..=n)
                    .find(|&i| rep.simple_loop.edge(i) == &e.id)
                    .expect("edge is on this loop");
                loop_edge_image(&spec, rep, i)?
            }
        };
        edge_images.push(image);
    }
    let map = GeneratorMap::new(g.clone(), vertex_images, edge_images)?;
    Ok((spec, map))
}

/// `s_{f_{i+1}} t s_{f_i}^*`.
pub fn loop_edge_image(
    ctx: &dyn CkContext,
    rep: &LoopReplacement,
    i: usize,
) -> Result<CkTerm, SymbolicError> {
    let next = CkTerm::s(ctx, rep.f(i + 1).id.as_str())?;
    let t = CkTerm::t(ctx, rep.tail.namespace.as_str())?;
    let back = CkTerm::s_star(ctx, rep.f(i).id.as_str())?;
    next.multiply(&t, ctx)?.multiply(&back, ctx)
}

/// The finite graph `F_d`: every tail cut after level `depth`.
pub fn materialize(spec: &AugmentedGraphSpec, depth: usize) -> Result<Graph, EmbedError> {
    let mut vertices: Vec<VertexId> = spec.base.vertices().to_vec();
    let mut edges: Vec<Edge> = spec.base.edges().to_vec();
    for rep in &spec.replacements {
        let tail = &rep.tail;
        vertices.extend((0..=depth).map(|k| tail.level_vertex(k)));
        edges.extend(rep.f_edges.iter().cloned());
        for k in 1..=depth {
            for m in 1..=tail.mult.get(k) {
                edges.push(Edge {
                    id: tail.tail_edge(k, m),
                    source: tail.level_vertex(k),
                    range: tail.level_vertex(k - 1),
                });
            }
        }
    }
    Graph::new(vertices, edges).map_err(|e| match e {
        GraphError::DuplicateVertex(id) | GraphError::DuplicateEdge(id) => {
            EmbedError::NamespaceCollision(id)
        }
        other => EmbedError::Graph(other),
    })
}

/// Stage sizes `N_0 = 1, N_k = mult(1) ⋯ mult(k)` of tail `tail_index`
/// (0-based), up to `depth`. These are the numbers of paths of length `k`
/// ending at the sink.
pub fn corner_dimension(
    spec: &AugmentedGraphSpec,
    tail_index: usize,
    depth: usize,
) -> Result<Vec<u64>, EmbedError> {
    spec.replacements
        .get(tail_index)
        .ok_or(EmbedError::UnknownTail(tail_index))?
        .tail
        .corner_dimensions(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::loops::cycle_vertices;
    use crate::symbolic::NormalMonomial;

    #[test]
    fn multiplicity_parsing_and_guard() {
        let m: MultiplicitySeq = "3;2".parse().unwrap();
        assert_eq!((m.get(1), m.get(2), m.get(50)), (3, 2, 2));
        assert_eq!(m.to_string(), "3;2");
        assert_eq!(
            "2".parse::<MultiplicitySeq>().unwrap(),
            MultiplicitySeq::default()
        );
        assert!("1".parse::<MultiplicitySeq>().is_err());
        assert!("0,2;2".parse::<MultiplicitySeq>().is_err());
        assert!("x;2".parse::<MultiplicitySeq>().is_err());
        assert!(MultiplicitySeq::uniform(1).is_err());
    }

    #[test]
    fn square_embeds_like_the_figure() {
        let (spec, map) = embed(&square()).unwrap();
        assert_eq!(spec.replacements().len(), 1);
        let rep = &spec.replacements()[0];
        assert_eq!(rep.tail().sink().as_str(), "T1.v");
        for (i, f) in rep.f_edges().iter().enumerate() {
            assert_eq!(f.source.as_str(), "T1.v");
            assert_eq!(f.range, *rep.simple_loop().vertex(i + 1));
        }
        assert_eq!(spec.base().edge_count(), 0);
        assert_eq!(
            map.edge_image("e1").unwrap().to_string(),
            "s(T1.f2) t(T1) s*(T1.f1)"
        );
        assert_eq!(
            map.edge_image("e4").unwrap().to_string(),
            "s(T1.f1) t(T1) s*(T1.f4)"
        );
        assert_eq!(map.vertex_image("u3").unwrap().to_string(), "p(u3)");

        let f3 = materialize(&spec, 3).unwrap();
        assert_eq!(f3.vertex_count(), 4 + 1 + 3);
        assert_eq!(f3.edge_count(), 4 + 6);
        assert!(cycle_vertices(&f3).is_empty());
        for i in 1..=4 {
            let u = format!("u{i}");
            let r = f3.receivers(&u).unwrap();
            assert_eq!(r.len(), 1);
            assert_eq!(r[0].as_str(), format!("T1.f{i}"));
        }
    }

    #[test]
    fn depth_zero_has_no_levels() {
        let (spec, _) = embed(&square()).unwrap();
        let f0 = materialize(&spec, 0).unwrap();
        assert_eq!(f0.vertex_count(), 5);
        assert_eq!(f0.edge_count(), 4);
    }

    #[test]
    fn acyclic_input_is_left_alone() {
        let g = Graph::builder()
            .vertices(["a", "b"])
            .edge("x", "a", "b")
            .build()
            .unwrap();
        let (spec, map) = embed(&g).unwrap();
        assert!(spec.replacements().is_empty());
        assert!(map.is_identity(&spec));
        assert_eq!(materialize(&spec, 4).unwrap(), g);
    }

    #[test]
    fn self_loop_maps_to_conjugated_unitary() {
        let g = Graph::builder()
            .vertex("u")
            .edge("e", "u", "u")
            .build()
            .unwrap();
        let (spec, map) = embed(&g).unwrap();
        let expected = NormalMonomial::simple(
            &spec,
            crate::graph::Path::from_parts(
                VertexId::new("u").unwrap(),
                VertexId::new("T1.v").unwrap(),
                alloc::vec![EdgeId::new("T1.f1").unwrap()],
            ),
            Some(("T1", 1)),
            crate::graph::Path::from_parts(
                VertexId::new("u").unwrap(),
                VertexId::new("T1.v").unwrap(),
                alloc::vec![EdgeId::new("T1.f1").unwrap()],
            ),
        )
        .unwrap();
        assert_eq!(
            map.edge_image("e").unwrap(),
            &CkTerm::from_monomial(expected)
        );
    }

    #[test]
    fn entrances_are_refused() {
        match embed(&square_with_entrance()) {
            Err(EmbedError::EntranceExists(w)) => assert_eq!(w.entry_vertex().as_str(), "u2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn corner_dimensions() {
        let (spec, _) = embed(&square()).unwrap();
        assert_eq!(corner_dimension(&spec, 0, 3).unwrap(), [1, 2, 4, 8]);
        let (spec, _) = embed_with(&square(), &"3;2".parse().unwrap()).unwrap();
        assert_eq!(corner_dimension(&spec, 0, 3).unwrap(), [1, 3, 6, 12]);
        assert!(matches!(
            corner_dimension(&spec, 1, 3),
            Err(EmbedError::UnknownTail(1))
        ));
        assert!(matches!(
            corner_dimension(&spec, 0, 70),
            Err(EmbedError::Overflow(_))
        ));
    }

    #[test]
    fn namespaces_avoid_host_ids() {
        let g = Graph::builder()
            .vertices(["T1.v", "u"])
            .edge("e", "u", "u")
            .build()
            .unwrap();
        let (spec, _) = embed(&g).unwrap();
        assert_eq!(spec.replacements()[0].tail().namespace().as_str(), "T1_");
        assert!(materialize(&spec, 2).is_ok());
    }

    #[test]
    fn lazy_context_resolves_deep_levels() {
        let (spec, _) = embed(&square()).unwrap();
        let (s, r) = spec.endpoints("T1.b40.2").unwrap();
        assert_eq!((s.as_str(), r.as_str()), ("T1.L40.1", "T1.L39.1"));
        assert_eq!(spec.endpoints("T1.b1.1").unwrap().1.as_str(), "T1.v");
        assert!(spec.endpoints("T1.b1.3").is_none());
        assert!(spec.endpoints("T1.b01.1").is_none());
        assert_eq!(spec.receiver_count("T1.L7.1"), Some(2));
        assert_eq!(spec.receivers("u2").unwrap().len(), 1);
        assert!(spec.vertex("T1.L0.1").is_none());
    }
}
