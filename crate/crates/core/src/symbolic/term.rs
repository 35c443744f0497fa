//! Normal forms for words in `p_v`, `s_e`, `s_e^*` and the tail unitaries.
//!
//! Rewrite rules, applied until none matches:
//!
//! ```text
//! s_e^* s_f  -> δ_{ef} p_{s(e)}          p_w p_x -> δ_{wx} p_w
//! p_w s_e    -> δ_{w,r(e)} s_e           s_e p_w -> δ_{w,s(e)} s_e
//! t t^*, t^* t -> p_v                    p_v t = t p_v -> t
//! s_e s_e^*  -> p_{r(e)}   if r^{-1}(r(e)) = {e}
//! ```
//!
//! A word survives only if adjacent letters agree on the vertex between
//! them. An irreducible word therefore alternates between segments
//! `s_α s_β^*` (with `s(α) = s(β)`) and nonzero powers of tail unitaries:
//!
//! ```text
//! s_{α_0} s_{β_0}^* t^{k_1} s_{α_1} s_{β_1}^* t^{k_2} ⋯ t^{k_m} s_{α_m} s_{β_m}^*
//! ```
//!
//! where no inner segment is the bare projection at its sink. The common
//! case `s_α t^k s_β^*` is `m = 1` with `β_0` and `α_1` trivial.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::coeff::{format_coeff, Coeff};
use super::context::CkContext;
use crate::graph::Path;
use crate::id::{TailId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("unknown vertex `{0}` in this context")]
    UnknownVertex(String),
    #[error("unknown edge `{0}` in this context")]
    UnknownEdge(String),
    #[error("unknown tail unitary `{0}` in this context")]
    UnknownTail(String),
    #[error("ill-formed monomial: {0}")]
    IllFormed(String),
    #[error("term syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("relation (3) is not imposed at `{0}`: it receives no edges")]
    NoReceivers(String),
}

/// `s_α s_β^*` with `s(α) = s(β)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub(crate) alpha: Path,
    pub(crate) beta: Path,
}

impl Segment {
    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    fn projection(v: VertexId) -> Self {
        Segment {
            alpha: Path::vertex(v.clone()),
            beta: Path::vertex(v),
        }
    }

    pub fn is_projection(&self) -> bool {
        self.alpha.is_vertex() && self.beta.is_vertex()
    }

    fn adjoint(&self) -> Self {
        Segment {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    /// Unique-receiver contraction at the source end.
    fn contract(mut self, ctx: &dyn CkContext) -> Result<Self, SymbolicError> {
        while let (Some(a), Some(b)) = (self.alpha.edges.last(), self.beta.edges.last()) {
            if a != b {
                break;
            }
            let (_, range) = ctx
                .endpoints(a.as_str())
                .ok_or_else(|| SymbolicError::UnknownEdge(a.to_string()))?;
            if ctx.receiver_count(range.as_str()) != Some(1) {
                break;
            }
            self.alpha.edges.pop();
            self.beta.edges.pop();
            self.alpha.source = range.clone();
            self.beta.source = range;
        }
        Ok(self)
    }

    /// `(s_a s_b^*)(s_c s_d^*)`, or `None` if it vanishes.
    fn mul(&self, right: &Segment, ctx: &dyn CkContext) -> Result<Option<Segment>, SymbolicError> {
        let b = &self.beta;
        let c = &right.alpha;
        let product = if b.is_prefix_of(c) {
            // s_b^* s_c = s_μ with c = b·μ
            let mu = Path::from_parts(
                b.source.clone(),
                c.source.clone(),
                c.edges[b.len()..].to_vec(),
            );
            Segment {
                alpha: self.alpha.concat(&mu).expect("s(a) = s(b) = r(μ)"),
                beta: right.beta.clone(),
            }
        } else if c.is_prefix_of(b) {
            // s_b^* s_c = s_μ^* with b = c·μ
            let mu = Path::from_parts(
                c.source.clone(),
                b.source.clone(),
                b.edges[c.len()..].to_vec(),
            );
            Segment {
                alpha: self.alpha.clone(),
                beta: right.beta.concat(&mu).expect("s(d) = s(c) = r(μ)"),
            }
        } else {
            return Ok(None);
        };
        product.contract(ctx).map(Some)
    }
}

/// `t^k` for the unitary of one tail; `k ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitaryPower {
    pub tail: TailId,
    pub power: i64,
}

/// An irreducible word; see the module docs for its shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalMonomial {
    segments: Vec<Segment>,
    powers: Vec<UnitaryPower>,
}

/// The `s_α t^k s_β^*` view of a monomial with at most one unitary block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleForm {
    pub alpha: Path,
    pub unitary: Option<UnitaryPower>,
    pub beta: Path,
}

impl NormalMonomial {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn powers(&self) -> &[UnitaryPower] {
        &self.powers
    }

    pub fn projection(ctx: &dyn CkContext, v: &str) -> Result<Self, SymbolicError> {
        let v = ctx
            .vertex(v)
            .ok_or_else(|| SymbolicError::UnknownVertex(v.to_string()))?;
        Ok(NormalMonomial {
            segments: vec![Segment::projection(v)],
            powers: Vec::new(),
        })
    }

    pub fn edge(ctx: &dyn CkContext, e: &str) -> Result<Self, SymbolicError> {
        let (s, r) = ctx
            .endpoints(e)
            .ok_or_else(|| SymbolicError::UnknownEdge(e.to_string()))?;
        let id = ctx.edge_id(e).expect("endpoints resolved");
        Ok(NormalMonomial {
            segments: vec![Segment {
                alpha: Path::from_parts(r, s.clone(), vec![id]),
                beta: Path::vertex(s),
            }],
            powers: Vec::new(),
        })
    }

    pub fn unitary(ctx: &dyn CkContext, tail: &str, power: i64) -> Result<Self, SymbolicError> {
        let sink = ctx
            .unitary_sink(tail)
            .ok_or_else(|| SymbolicError::UnknownTail(tail.to_string()))?;
        if power == 0 {
            return Ok(NormalMonomial {
                segments: vec![Segment::projection(sink)],
                powers: Vec::new(),
            });
        }
        let tail = TailId::new(tail).map_err(|e| SymbolicError::UnknownTail(e.0))?;
        Ok(NormalMonomial {
            segments: vec![Segment::projection(sink.clone()), Segment::projection(sink)],
            powers: vec![UnitaryPower { tail, power }],
        })
    }

    /// Builds `s_α t^k s_β^*` directly, checking that it is already
    /// irreducible. Independent of [`CkTerm::multiply`].
    pub fn simple(
        ctx: &dyn CkContext,
        alpha: Path,
        unitary: Option<(&str, i64)>,
        beta: Path,
    ) -> Result<Self, SymbolicError> {
        if alpha.source != beta.source {
            return Err(SymbolicError::IllFormed("s(α) != s(β)".into()));
        }
        let m = match unitary {
            None | Some((_, 0)) => NormalMonomial {
                segments: vec![Segment { alpha, beta }],
                powers: Vec::new(),
            },
            Some((tail, power)) => {
                let sink = ctx
                    .unitary_sink(tail)
                    .ok_or_else(|| SymbolicError::UnknownTail(tail.to_string()))?;
                if alpha.source != sink {
                    return Err(SymbolicError::IllFormed(
                        "a unitary block needs s(α) = s(β) = its sink".into(),
                    ));
                }
                NormalMonomial {
                    segments: vec![
                        Segment {
                            alpha,
                            beta: Path::vertex(sink.clone()),
                        },
                        Segment {
                            alpha: Path::vertex(sink),
                            beta,
                        },
                    ],
                    powers: vec![UnitaryPower {
                        tail: TailId::new(tail).map_err(|e| SymbolicError::UnknownTail(e.0))?,
                        power,
                    }],
                }
            }
        };
        for seg in &m.segments {
            if seg.clone().contract(ctx)? != *seg {
                return Err(SymbolicError::IllFormed(
                    "segment admits a unique-receiver contraction".into(),
                ));
            }
        }
        Ok(m)
    }

    /// Assembles a word without rewriting it.
    pub(crate) fn from_raw(segments: Vec<Segment>, powers: Vec<UnitaryPower>) -> Self {
        debug_assert_eq!(segments.len(), powers.len() + 1);
        NormalMonomial { segments, powers }
    }

    pub fn as_simple(&self) -> Option<SimpleForm> {
        match (self.segments.as_slice(), self.powers.as_slice()) {
            ([seg], []) => Some(SimpleForm {
                alpha: seg.alpha.clone(),
                unitary: None,
                beta: seg.beta.clone(),
            }),
            ([left, right], [power]) if left.beta.is_vertex() && right.alpha.is_vertex() => {
                Some(SimpleForm {
                    alpha: left.alpha.clone(),
                    unitary: Some(power.clone()),
                    beta: right.beta.clone(),
                })
            }
            _ => None,
        }
    }

    /// `r` of the leftmost letter.
    pub fn left_vertex(&self) -> &VertexId {
        &self.segments[0].alpha.range
    }

    /// The vertex to the right of the rightmost letter.
    pub fn right_vertex(&self) -> &VertexId {
        &self.segments[self.segments.len() - 1].beta.range
    }

    /// True for a bare vertex projection `p_w`.
    pub fn as_projection(&self) -> Option<&VertexId> {
        match self.segments.as_slice() {
            [seg] if self.powers.is_empty() && seg.is_projection() => Some(&seg.alpha.range),
            _ => None,
        }
    }

    pub fn adjoint(&self) -> Self {
        NormalMonomial {
            segments: self.segments.iter().rev().map(Segment::adjoint).collect(),
            powers: self
                .powers
                .iter()
                .rev()
                .map(|p| UnitaryPower {
                    tail: p.tail.clone(),
                    power: -p.power,
                })
                .collect(),
        }
    }

    pub fn multiply(
        &self,
        right: &NormalMonomial,
        ctx: &dyn CkContext,
    ) -> Result<Option<NormalMonomial>, SymbolicError> {
        let mut segs = self.segments.clone();
        let mut pows = self.powers.clone();
        let mut rsegs: VecDeque<Segment> = right.segments.iter().cloned().collect();
        let mut rpows: VecDeque<UnitaryPower> = right.powers.iter().cloned().collect();
        loop {
            let left = segs.pop().expect("monomials have a segment");
            let first = rsegs.pop_front().expect("monomials have a segment");
            let Some(joined) = left.mul(&first, ctx)? else {
                return Ok(None);
            };
            let merge = joined.is_projection()
                && matches!((pows.last(), rpows.front()), (Some(p), Some(q)) if p.tail == q.tail);
            if !merge {
                segs.push(joined);
                segs.extend(rsegs);
                pows.extend(rpows);
                return Ok(Some(NormalMonomial {
                    segments: segs,
                    powers: pows,
                }));
            }
            let p = pows.pop().expect("checked");
            let q = rpows.pop_front().expect("checked");
            let power = p.power + q.power;
            if power != 0 {
                pows.push(UnitaryPower {
                    tail: p.tail,
                    power,
                });
                segs.extend(rsegs);
                pows.extend(rpows);
                return Ok(Some(NormalMonomial {
                    segments: segs,
                    powers: pows,
                }));
            }
            // t^k p_v t^{-k} = p_v: the neighbouring segments meet.
        }
    }

    /// Letters of the word, left to right.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        if let Some(v) = self.as_projection() {
            out.push(Letter::P(v.clone()));
            return out;
        }
        for (i, seg) in self.segments.iter().enumerate() {
            out.extend(seg.alpha.edges.iter().map(|e| Letter::S(e.clone())));
            out.extend(
                seg.beta
                    .edges
                    .iter()
                    .rev()
                    .map(|e| Letter::SStar(e.clone())),
            );
            if let Some(p) = self.powers.get(i) {
                let letter = if p.power > 0 {
                    Letter::T(p.tail.clone())
                } else {
                    Letter::TStar(p.tail.clone())
                };
                for _ in 0..p.power.unsigned_abs() {
                    out.push(letter.clone());
                }
            }
        }
        out
    }
}

/// One generator symbol of the term grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    P(VertexId),
    S(crate::id::EdgeId),
    SStar(crate::id::EdgeId),
    T(TailId),
    TStar(TailId),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::P(v) => write!(f, "p({v})"),
            Letter::S(e) => write!(f, "s({e})"),
            Letter::SStar(e) => write!(f, "s*({e})"),
            Letter::T(t) => write!(f, "t({t})"),
            Letter::TStar(t) => write!(f, "t*({t})"),
        }
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of normal monomials with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CkTerm {
    terms: BTreeMap<NormalMonomial, Coeff>,
}

impl CkTerm {
    pub fn zero() -> Self {
        CkTerm::default()
    }

    pub fn from_monomial(m: NormalMonomial) -> Self {
        Self::from_monomial_scaled(m, Coeff::one())
    }

    pub fn from_monomial_scaled(m: NormalMonomial, c: Coeff) -> Self {
        let mut out = CkTerm::zero();
        out.add_monomial(m, c);
        out
    }

    pub fn p(ctx: &dyn CkContext, v: &str) -> Result<Self, SymbolicError> {
        NormalMonomial::projection(ctx, v).map(Self::from_monomial)
    }

    pub fn s(ctx: &dyn CkContext, e: &str) -> Result<Self, SymbolicError> {
        NormalMonomial::edge(ctx, e).map(Self::from_monomial)
    }

    pub fn s_star(ctx: &dyn CkContext, e: &str) -> Result<Self, SymbolicError> {
        NormalMonomial::edge(ctx, e).map(|m| Self::from_monomial(m.adjoint()))
    }

    pub fn t(ctx: &dyn CkContext, tail: &str) -> Result<Self, SymbolicError> {
        NormalMonomial::unitary(ctx, tail, 1).map(Self::from_monomial)
    }

    pub fn t_star(ctx: &dyn CkContext, tail: &str) -> Result<Self, SymbolicError> {
        NormalMonomial::unitary(ctx, tail, -1).map(Self::from_monomial)
    }

    /// `s_α` for a path given range end first.
    pub fn s_path(ctx: &dyn CkContext, path: &Path) -> Result<Self, SymbolicError> {
        let mut acc = CkTerm::p(ctx, path.range().as_str())?;
        for e in path.edges() {
            acc = acc.multiply(&CkTerm::s(ctx, e.as_str())?, ctx)?;
        }
        Ok(acc)
    }

    pub(crate) fn add_monomial(&mut self, m: NormalMonomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NormalMonomial, &Coeff)> {
        self.terms.iter()
    }

    /// The single monomial of a term with coefficient one.
    pub fn as_monomial(&self) -> Option<&NormalMonomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = CkTerm::zero();
        for (m, x) in &self.terms {
            out.add_monomial(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &CkTerm, ctx: &dyn CkContext) -> Result<CkTerm, SymbolicError> {
        let mut out = CkTerm::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(m) = a.multiply(b, ctx)? {
                    out.add_monomial(m, x.clone() * y.clone());
                }
            }
        }
        Ok(out)
    }

    /// Conjugate-linear involution.
    pub fn adjoint(&self) -> CkTerm {
        let mut out = CkTerm::zero();
        for (m, x) in &self.terms {
            out.add_monomial(m.adjoint(), x.conj());
        }
        out
    }
}

impl Add for &CkTerm {
    type Output = CkTerm;

    fn add(self, rhs: &CkTerm) -> CkTerm {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_monomial(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CkTerm {
    type Output = CkTerm;

    fn sub(self, rhs: &CkTerm) -> CkTerm {
        self + &(-rhs)
    }
}

impl Neg for &CkTerm {
    type Output = CkTerm;

    fn neg(self) -> CkTerm {
        let mut out = CkTerm::zero();
        for (m, c) in &self.terms {
            out.add_monomial(m.clone(), -c.clone());
        }
        out
    }
}

impl fmt::Display for CkTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative_real = c.im.is_zero() && c.re < num_rational::BigRational::zero();
            let c_abs = if negative_real { -c.clone() } else { c.clone() };
            match (i, negative_real) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !c_abs.is_one() {
                write!(f, "{} ", format_coeff(&c_abs))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::square;
    use crate::graph::Graph;
    use crate::symbolic::coeff::{imag_unit, real};

    fn two_receivers() -> Graph {
        Graph::builder()
            .vertices(["a", "b", "w"])
            .edge("x", "a", "w")
            .edge("y", "b", "w")
            .build()
            .unwrap()
    }

    #[test]
    fn orthogonality_and_isometry() {
        let g = square();
        let e1 = CkTerm::s(&g, "e1").unwrap();
        let e2 = CkTerm::s(&g, "e2").unwrap();
        let p1 = CkTerm::p(&g, "u1").unwrap();
        assert_eq!(e1.adjoint().multiply(&e1, &g).unwrap(), p1);
        assert!(e1.adjoint().multiply(&e2, &g).unwrap().is_zero());
    }

    #[test]
    fn unique_receiver_contracts() {
        let g = square();
        let e1 = CkTerm::s(&g, "e1").unwrap();
        let range = e1.multiply(&e1.adjoint(), &g).unwrap();
        assert_eq!(range, CkTerm::p(&g, "u2").unwrap());
    }

    #[test]
    fn shared_range_does_not_contract() {
        let g = two_receivers();
        let x = CkTerm::s(&g, "x").unwrap();
        let xx = x.multiply(&x.adjoint(), &g).unwrap();
        assert_ne!(xx, CkTerm::p(&g, "w").unwrap());
        assert_eq!(xx.to_string(), "s(x) s*(x)");
        let y = CkTerm::s(&g, "y").unwrap();
        assert!(y.adjoint().multiply(&xx, &g).unwrap().is_zero());
    }

    #[test]
    fn projections_absorb_and_annihilate() {
        let g = square();
        let e1 = CkTerm::s(&g, "e1").unwrap();
        let p1 = CkTerm::p(&g, "u1").unwrap();
        let p2 = CkTerm::p(&g, "u2").unwrap();
        assert_eq!(p2.multiply(&e1, &g).unwrap(), e1);
        assert_eq!(e1.multiply(&p1, &g).unwrap(), e1);
        assert!(p1.multiply(&e1, &g).unwrap().is_zero());
        assert!(p1.multiply(&p2, &g).unwrap().is_zero());
        assert_eq!(p1.multiply(&p1, &g).unwrap(), p1);
    }

    #[test]
    fn adjoint_conjugates_coefficients() {
        let g = square();
        let e1 = CkTerm::s(&g, "e1")
            .unwrap()
            .scale(&(real(1, 2) + imag_unit()));
        let adj = e1.adjoint();
        let (_, c) = adj.iter().next().unwrap();
        assert_eq!(*c, real(1, 2) - imag_unit());
        assert_eq!(adj.adjoint(), e1);
    }

    #[test]
    fn display_of_sums() {
        let g = two_receivers();
        let x = CkTerm::s(&g, "x").unwrap();
        let y = CkTerm::s(&g, "y").unwrap().scale(&real(-3, 4));
        assert_eq!((&x + &y).to_string(), "s(x) - 3/4 s(y)");
        assert_eq!((&x - &x).to_string(), "0");
    }
}
