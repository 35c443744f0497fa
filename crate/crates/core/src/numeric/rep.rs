//! The path-space representation of a truncated augmented graph.
//!
//! `F_d` is finite and has no loops, so it has finitely many paths. The
//! Hilbert space has one basis vector `ξ_μ` for each of them, and
//!
//! ```text
//! S_e ξ_μ = ξ_{eμ} if s(e) = r(μ), else 0        P_w ξ_μ = [r(μ) = w] ξ_μ
//! ```
//!
//! Relations (1) and (2) hold exactly. Relation (3) at `w` fails only on
//! the vertex vector `ξ_w`, so it holds on the span of paths whose source
//! receives nothing in `F_d` (the interior). That span is invariant under
//! every `S_e`, `S_e^*`, `P_w` and `T`.
//!
//! Every path into a tail sink `v` lies in the tail. Its edges, read from
//! the range end, are `b_{1,m_1}, …, b_{k,m_k}`, and its index on level `k`
//! is the mixed-radix number `j = ((m_1 - 1) mult(2) + (m_2 - 1)) ⋯`. The
//! unitary `T` multiplies it by `e^{2πi j / N_k}` and vanishes off the
//! paths into `v`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use super::eigen::EigenError;
use super::sparse::SparseOperator;
use crate::embed::{materialize, AugmentedGraphSpec, EmbedError};
use crate::graph::{Graph, Path};
use crate::id::{TailId, VertexId};
use crate::symbolic::{coeff::to_f64, CkTerm, Letter, TailedGraph};

/// Refuse to build path spaces larger than this.
pub const MAX_BASIS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("depth 0 has no tail levels; use depth >= 1")]
    DepthZero,
    #[error("`{0}` is not a generator of the truncated graph")]
    UnknownGenerator(String),
    #[error("no replaced loop with tail `{0}`")]
    UnknownTail(String),
    #[error("the path space has more than {0} paths")]
    TooLarge(usize),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// All paths of a finite acyclic graph, shortest first.
#[derive(Debug, Clone)]
pub struct PathBasis {
    paths: Vec<Path>,
    index: BTreeMap<Path, usize>,
    /// Edge index of `α_n` (the range-side edge).
    head: Vec<Option<usize>>,
    /// Index of the path with `α_n` removed; a vertex path points to itself.
    rest: Vec<usize>,
    range: Vec<usize>,
    source: Vec<usize>,
}

impl PathBasis {
    pub fn new(g: &Graph) -> Result<Self, NumericError> {
        let mut basis = PathBasis {
            paths: Vec::new(),
            index: BTreeMap::new(),
            head: Vec::new(),
            rest: Vec::new(),
            range: Vec::new(),
            source: Vec::new(),
        };
        let source_of: Vec<usize> = (0..g.edge_count()).map(|e| g.source_index(e)).collect();
        let range_of: Vec<usize> = (0..g.edge_count()).map(|e| g.range_index(e)).collect();
        for (i, v) in g.vertices().iter().enumerate() {
            basis.push(Path::vertex(v.clone()), None, i, i, i);
        }
        let mut layer = 0..basis.len();
        while !layer.is_empty() {
            let start = basis.len();
            for mu in layer {
                for &e in g.out_edge_indices(basis.range[mu]) {
                    debug_assert_eq!(source_of[e], basis.range[mu]);
                    let mut edges = Vec::with_capacity(basis.paths[mu].len() + 1);
                    edges.push(g.edges()[e].id.clone());
                    edges.extend(basis.paths[mu].edges().iter().cloned());
                    let path = Path::from_parts(
                        g.edges()[e].range.clone(),
                        basis.paths[mu].source().clone(),
                        edges,
                    );
                    basis.push(path, Some(e), mu, range_of[e], basis.source[mu]);
                    if basis.len() > MAX_BASIS {
                        return Err(NumericError::TooLarge(MAX_BASIS));
                    }
                }
            }
            layer = start..basis.len();
        }
        Ok(basis)
    }

    fn push(&mut self, path: Path, head: Option<usize>, rest: usize, range: usize, source: usize) {
        self.index.insert(path.clone(), self.paths.len());
        self.paths.push(path);
        self.head.push(head);
        self.rest.push(rest);
        self.range.push(range);
        self.source.push(source);
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Vertex index of `r(μ)`.
    pub fn range_index(&self, i: usize) -> usize {
        self.range[i]
    }

    /// Vertex index of `s(μ)`.
    pub fn source_index(&self, i: usize) -> usize {
        self.source[i]
    }
}

/// Generators of `C^*(F_d)` and the tail unitaries as sparse operators on
/// the path space of `F_d`.
#[derive(Debug, Clone)]
pub struct TruncatedRep {
    depth: usize,
    context: TailedGraph,
    basis: PathBasis,
    p: Vec<SparseOperator>,
    s: Vec<SparseOperator>,
    s_adj: Vec<SparseOperator>,
    t: BTreeMap<TailId, (SparseOperator, SparseOperator)>,
    interior: Vec<usize>,
}

pub fn build_rep(spec: &AugmentedGraphSpec, depth: usize) -> Result<TruncatedRep, NumericError> {
    if depth == 0 {
        return Err(NumericError::DepthZero);
    }
    let graph = materialize(spec, depth)?;
    let basis = PathBasis::new(&graph)?;
    let dim = basis.len();
    let one = Complex64::new(1.0, 0.0);

    let p = (0..graph.vertex_count())
        .map(|w| {
            SparseOperator::diagonal(
                (0..dim).filter(|&i| basis.range[i] == w).map(|i| (i, one)),
                dim,
            )
        })
        .collect();
    let mut s_triplets: Vec<Vec<(usize, usize, Complex64)>> =
        (0..graph.edge_count()).map(|_| Vec::new()).collect();
    for i in 0..dim {
        if let Some(e) = basis.head[i] {
            s_triplets[e].push((i, basis.rest[i], one));
        }
    }
    let s: Vec<SparseOperator> = s_triplets
        .into_iter()
        .map(|t| SparseOperator::from_triplets(dim, t))
        .collect();
    let s_adj = s.iter().map(SparseOperator::adjoint).collect();

    let mut t = BTreeMap::new();
    let mut tails = BTreeMap::new();
    for rep in spec.replacements() {
        let tail = rep.tail();
        let sink = graph
            .vertex_index(tail.sink().as_str())
            .expect("materialized sink");
        let dims = tail.corner_dimensions(depth)?;
        let mut diag = Vec::new();
        for i in (0..dim).filter(|&i| basis.range[i] == sink) {
            let path = &basis.paths[i];
            let mut j: u64 = 0;
            for e in path.edges() {
                let (k, m) = tail
                    .parse_tail_edge(e.as_str())
                    .expect("paths into a sink stay in its tail");
                j = j * u64::from(tail.mult().get(k)) + u64::from(m - 1);
            }
            let angle = 2.0 * PI * (j as f64) / (dims[path.len()] as f64);
            diag.push((i, Complex64::new(libm::cos(angle), libm::sin(angle))));
        }
        let op = SparseOperator::diagonal(diag, dim);
        let adj = op.adjoint();
        t.insert(tail.namespace().clone(), (op, adj));
        tails.insert(tail.namespace().clone(), tail.sink().clone());
    }

    let interior = (0..dim)
        .filter(|&i| graph.in_edge_indices(basis.source[i]).is_empty())
        .collect();

    Ok(TruncatedRep {
        depth,
        context: TailedGraph { graph, tails },
        basis,
        p,
        s,
        s_adj,
        t,
        interior,
    })
}

impl TruncatedRep {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.context.graph
    }

    /// `F_d` with its tail unitaries, as a context for symbolic terms.
    pub fn context(&self) -> &TailedGraph {
        &self.context
    }

    pub fn basis(&self) -> &PathBasis {
        &self.basis
    }

    pub fn p(&self, v: &str) -> Option<&SparseOperator> {
        self.graph().vertex_index(v).map(|i| &self.p[i])
    }

    pub fn s(&self, e: &str) -> Option<&SparseOperator> {
        self.graph().edge_index(e).map(|i| &self.s[i])
    }

    pub fn s_adjoint(&self, e: &str) -> Option<&SparseOperator> {
        self.graph().edge_index(e).map(|i| &self.s_adj[i])
    }

    pub fn t(&self, tail: &str) -> Option<&SparseOperator> {
        self.t.get(tail).map(|(op, _)| op)
    }

    pub fn t_adjoint(&self, tail: &str) -> Option<&SparseOperator> {
        self.t.get(tail).map(|(_, adj)| adj)
    }

    pub fn tail_sink(&self, tail: &str) -> Option<&VertexId> {
        self.context.tails.get(tail)
    }

    /// Indices of paths whose source receives no edge of `F_d`.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior.binary_search(&i).is_ok()
    }

    fn letter(&self, l: &Letter) -> Result<&SparseOperator, NumericError> {
        let missing = || NumericError::UnknownGenerator(l.to_string());
        match l {
            Letter::P(v) => self.p(v.as_str()),
            Letter::S(e) => self.s(e.as_str()),
            Letter::SStar(e) => self.s_adjoint(e.as_str()),
            Letter::T(t) => self.t(t.as_str()),
            Letter::TStar(t) => self.t_adjoint(t.as_str()),
        }
        .ok_or_else(missing)
    }
}

/// Evaluates `Σ c · s_α t^k s_β^*` letter by letter.
pub fn op_of_term(term: &CkTerm, rep: &TruncatedRep) -> Result<SparseOperator, NumericError> {
    let mut out = SparseOperator::zero(rep.dim());
    for (m, c) in term.iter() {
        let letters = m.letters();
        let mut acc = rep.letter(&letters[0])?.clone();
        for l in &letters[1..] {
            acc = acc.mul(rep.letter(l)?);
        }
        out = out.add(&acc.scale(to_f64(c)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{embed, embed_with};
    use crate::graph::fixtures::square;
    use crate::symbolic::parse_term;

    fn level_sizes(rep: &TruncatedRep, sink: &str) -> Vec<usize> {
        let sink = rep.graph().vertex_index(sink).unwrap();
        let mut sizes = alloc::vec![0; rep.depth() + 1];
        for (i, p) in rep.basis().paths().iter().enumerate() {
            if rep.basis().range_index(i) == sink {
                sizes[p.len()] += 1;
            }
        }
        sizes
    }

    #[test]
    fn square_corner_at_depth_three() {
        let (spec, _) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 3).unwrap();
        assert_eq!(level_sizes(&rep, "T1.v"), [1, 2, 4, 8]);
        assert_eq!(rep.t("T1").unwrap().nnz(), 15);
        let (spec, _) = embed_with(&square(), &"3;2".parse().unwrap()).unwrap();
        let rep = build_rep(&spec, 3).unwrap();
        assert_eq!(level_sizes(&rep, "T1.v"), [1, 3, 6, 12]);
    }

    #[test]
    fn depth_one_unitary() {
        let (spec, _) = embed(&square()).unwrap();
        assert!(matches!(build_rep(&spec, 0), Err(NumericError::DepthZero)));
        let rep = build_rep(&spec, 1).unwrap();
        let t = rep.t("T1").unwrap();
        let v = Path::vertex(VertexId::new("T1.v").unwrap());
        let b1 = rep.graph().path(&["T1.b1.1"]).unwrap();
        let b2 = rep.graph().path(&["T1.b1.2"]).unwrap();
        let idx = |p: &Path| rep.basis().index_of(p).unwrap();
        assert_eq!(t.get(idx(&v), idx(&v)), Complex64::new(1.0, 0.0));
        assert_eq!(t.get(idx(&b1), idx(&b1)), Complex64::new(1.0, 0.0));
        assert!((t.get(idx(&b2), idx(&b2)) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(t.nnz(), 3);
    }

    #[test]
    fn unitary_commutes_with_sink_projection() {
        let (spec, _) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 4).unwrap();
        let t = rep.t("T1").unwrap();
        let pv = rep.p("T1.v").unwrap();
        assert_eq!(&pv.mul(t), t);
        assert_eq!(&t.mul(pv), t);
        assert_eq!(
            t.mul(rep.t_adjoint("T1").unwrap()).sub(pv).max_abs() < 1e-15,
            true
        );
    }

    #[test]
    fn projection_trace_counts_paths() {
        let (spec, _) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 3).unwrap();
        let p = op_of_term(&CkTerm::p(&spec, "u1").unwrap(), &rep).unwrap();
        // u1 itself and f1 followed by each of the 15 paths into the sink
        assert_eq!(p.nnz(), 16);
    }

    #[test]
    fn interior_is_paths_from_sources() {
        let (spec, _) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 2).unwrap();
        for &i in rep.interior() {
            assert_eq!(
                rep.graph().vertices()[rep.basis().source_index(i)].as_str(),
                "T1.L2.1"
            );
        }
        // 4 paths into the sink from level 2, each also extended by an f
        // edge, plus the level-2 vertex itself and the 2 paths into level 1
        assert_eq!(rep.interior().len(), 4 + 4 * 4 + 1 + 2);
    }

    #[test]
    fn unknown_generators_are_reported() {
        let (spec, _) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 2).unwrap();
        let deep = parse_term("s(T1.b5.1)", &spec).unwrap();
        assert!(matches!(
            op_of_term(&deep, &rep),
            Err(NumericError::UnknownGenerator(_))
        ));
    }
}
