//! Checking relation instances by normal-form equality.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::context::CkContext;
use super::term::{CkTerm, NormalMonomial, Segment, SymbolicError};
use crate::embed::{AugmentedGraphSpec, GeneratorMap};
use crate::graph::{Graph, Path};
use crate::loops::{classify, Classification, EntranceWitness, LoopError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationStatus {
    /// Both sides have the same normal form.
    Proved,
    /// The normal forms differ; the entry carries `lhs - rhs`.
    Failed,
    /// A fact that holds by construction and is listed, not rewritten.
    Recorded,
    /// Not a finitary rewrite fact; checked by the numeric model.
    Delegated,
}

impl RelationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationStatus::Proved => "proved",
            RelationStatus::Failed => "failed",
            RelationStatus::Recorded => "recorded",
            RelationStatus::Delegated => "delegated",
        }
    }
}

impl fmt::Display for RelationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationEntry {
    /// Short instance name such as `ck2 e=e1 f=e3`.
    pub id: String,
    /// The identity being checked, in the term grammar.
    pub statement: String,
    pub status: RelationStatus,
    /// `lhs - rhs` in normal form. Zero for every status except a failed
    /// equality; a failed `nonzero` entry also has a zero difference.
    pub difference: CkTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationReport {
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status != RelationStatus::Failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationEntry> {
        self.entries
            .iter()
            .filter(|e| e.status == RelationStatus::Failed)
    }

    pub fn count(&self, status: RelationStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    fn check(&mut self, id: String, lhs: &CkTerm, rhs: &CkTerm) {
        let difference = lhs - rhs;
        let status = if difference.is_zero() {
            RelationStatus::Proved
        } else {
            RelationStatus::Failed
        };
        self.entries.push(RelationEntry {
            id,
            statement: format!("{lhs} = {rhs}"),
            status,
            difference,
        });
    }

    fn note(&mut self, id: String, statement: String, status: RelationStatus) {
        self.entries.push(RelationEntry {
            id,
            statement,
            status,
            difference: CkTerm::zero(),
        });
    }

    fn extend(&mut self, other: RelationReport) {
        self.entries.extend(other.entries);
    }
}

fn expand_segments(
    ctx: &dyn CkContext,
    segment: &Segment,
    v: &str,
    receivers: &[crate::id::EdgeId],
) -> Result<Vec<Segment>, SymbolicError> {
    if segment.alpha().source().as_str() != v {
        return Ok(alloc::vec![segment.clone()]);
    }
    receivers
        .iter()
        .map(|g| {
            let edge = NormalMonomial::edge(ctx, g.as_str())?;
            let path = &edge.segments()[0].alpha;
            Ok(Segment {
                alpha: segment.alpha.concat(path).expect("r(g) = v"),
                beta: segment.beta.concat(path).expect("r(g) = v"),
            })
        })
        .collect()
}

/// Rewrites every `p_v` inside `term` as `Σ_{g ∈ r^{-1}(v)} s_g s_g^*`.
///
/// An occurrence of `p_v` is any segment `s_α s_β^*` with `s(α) = v`,
/// bare projections included. The result is left uncontracted, so its
/// monomials are raw words rather than normal forms; it is meant to be
/// compared against terms whose sums at `v` were never contracted.
pub fn expand_ck3(term: &CkTerm, v: &str, ctx: &dyn CkContext) -> Result<CkTerm, SymbolicError> {
    ctx.vertex(v)
        .ok_or_else(|| SymbolicError::UnknownVertex(v.into()))?;
    let receivers = ctx
        .receivers(v)
        .ok_or_else(|| SymbolicError::UnknownVertex(v.into()))?;
    if receivers.is_empty() {
        return Err(SymbolicError::NoReceivers(v.into()));
    }
    let mut out = CkTerm::zero();
    for (m, c) in term.iter() {
        let mut words: Vec<Vec<Segment>> = alloc::vec![Vec::new()];
        for seg in m.segments() {
            let choices = expand_segments(ctx, seg, v, &receivers)?;
            words = words
                .into_iter()
                .flat_map(|w| {
                    choices.iter().map(move |s| {
                        let mut w = w.clone();
                        w.push(s.clone());
                        w
                    })
                })
                .collect();
        }
        for segments in words {
            out.add_monomial(
                NormalMonomial::from_raw(segments, m.powers().to_vec()),
                c.clone(),
            );
        }
    }
    Ok(out)
}

/// `p_v` for every vertex in the support of `term` that is the bare
/// projection of a vertex with receivers, expanded by relation (3).
fn expand_bare_projections(term: &CkTerm, ctx: &dyn CkContext) -> Result<CkTerm, SymbolicError> {
    let mut out = CkTerm::zero();
    for (m, c) in term.iter() {
        let single = CkTerm::from_monomial_scaled(m.clone(), c.clone());
        let expanded = match m.as_projection() {
            Some(w) if ctx.receiver_count(w.as_str()).unwrap_or(0) > 0 => {
                expand_ck3(&single, w.as_str(), ctx)?
            }
            _ => single,
        };
        out = &out + &expanded;
    }
    Ok(out)
}

/// Checks relations (1)–(3) for the images of a generator map.
///
/// Relation (3) is tried first as a plain normal-form equality. If that
/// fails, the projection side is expanded with [`expand_ck3`] and compared
/// again. Each `p̃_v ≠ 0` is listed as recorded, and each loop of the
/// domain gets a delegated spectrum entry.
pub fn verify_ck_family(
    map: &GeneratorMap,
    ctx: &dyn CkContext,
) -> Result<RelationReport, SymbolicError> {
    let e = map.domain();
    let mut report = RelationReport::default();
    let image_p = |v: &str| map.vertex_image(v).expect("domain vertex");
    let image_s = |x: &str| map.edge_image(x).expect("domain edge");

    for v in e.vertices() {
        let p = image_p(v.as_str());
        report.check(format!("ck1 idempotent v={v}"), &p.multiply(p, ctx)?, p);
        report.check(format!("ck1 self-adjoint v={v}"), &p.adjoint(), p);
    }

    for a in e.edges() {
        let sa = image_s(a.id.as_str()).adjoint();
        for b in e.edges() {
            let lhs = sa.multiply(image_s(b.id.as_str()), ctx)?;
            let rhs = if a.id == b.id {
                image_p(a.source.as_str()).clone()
            } else {
                CkTerm::zero()
            };
            report.check(format!("ck2 e={} f={}", a.id, b.id), &lhs, &rhs);
        }
    }

    for v in e.vertices() {
        let receivers = e.receivers(v.as_str()).expect("domain vertex");
        if receivers.is_empty() {
            continue;
        }
        let lhs = image_p(v.as_str()).clone();
        let mut rhs = CkTerm::zero();
        for g in &receivers {
            let s = image_s(g.as_str());
            rhs = &rhs + &s.multiply(&s.adjoint(), ctx)?;
        }
        let id = format!("ck3 v={v}");
        if lhs == rhs {
            report.check(id, &lhs, &rhs);
        } else {
            let expanded = expand_bare_projections(&lhs, ctx)?;
            if expanded == rhs {
                report.check(id, &expanded, &rhs);
            } else {
                report.check(id, &lhs, &rhs);
            }
        }
    }

    for v in e.vertices() {
        let p = image_p(v.as_str());
        let id = format!("nonzero v={v}");
        if p.is_zero() {
            report.entries.push(RelationEntry {
                id,
                statement: format!("image of p({v}) != 0"),
                status: RelationStatus::Failed,
                difference: CkTerm::zero(),
            });
        } else {
            report.note(id, format!("{p} != 0"), RelationStatus::Recorded);
        }
    }

    if let Classification::AfEmbeddable { loops } = classify(e) {
        for l in loops {
            report.note(
                format!("spectrum loop={}", l.edge(1)),
                format!("spectrum of the image of {l} is the circle plus 0"),
                RelationStatus::Delegated,
            );
        }
    }
    Ok(report)
}

/// The three computations behind the embedding, for every replaced loop:
/// `s̃_{e_i}^* s̃_{e_i} = p_{u_i}`, `s̃_{e_i} s̃_{e_i}^* = p_{u_{i+1}}` and
/// `s̃_{e_n} ⋯ s̃_{e_1} = s_{f_1} t^n s_{f_1}^*`.
pub fn verify_embedding(
    spec: &AugmentedGraphSpec,
    map: &GeneratorMap,
) -> Result<RelationReport, SymbolicError> {
    let mut report = RelationReport::default();
    for rep in spec.replacements() {
        let l = rep.simple_loop();
        let n = l.len();
        let image = |i: usize| {
            map.edge_image(l.edge(i).as_str())
                .ok_or_else(|| SymbolicError::UnknownEdge(l.edge(i).to_string()))
        };
        for i in 1..=n {
            let s = image(i)?;
            let u_i = CkTerm::p(spec, l.vertex(i).as_str())?;
            let u_next = CkTerm::p(spec, l.vertex(i % n + 1).as_str())?;
            report.check(
                format!("isometry e={}", l.edge(i)),
                &s.adjoint().multiply(s, spec)?,
                &u_i,
            );
            report.check(
                format!("range e={}", l.edge(i)),
                &s.multiply(&s.adjoint(), spec)?,
                &u_next,
            );
        }
        let mut product = image(1)?.clone();
        for i in 2..=n {
            product = image(i)?.multiply(&product, spec)?;
        }
        let f1 = &rep.f(1);
        let f1_path = Path::from_parts(
            f1.range.clone(),
            f1.source.clone(),
            alloc::vec![f1.id.clone()],
        );
        let expected = NormalMonomial::simple(
            spec,
            f1_path.clone(),
            Some((rep.tail().namespace().as_str(), n as i64)),
            f1_path,
        )?;
        report.check(
            format!("loop tail={}", rep.tail().namespace()),
            &product,
            &CkTerm::from_monomial(expected),
        );
    }
    Ok(report)
}

/// Proves the algebraic content of an entrance witness:
/// `s_α^* s_α = p_{s(α)}`, `s_β^* s_β = p_{s(β)}` and `s_α^* s_β = 0`.
pub fn verify_witness(w: &EntranceWitness, g: &Graph) -> Result<RelationReport, LoopError> {
    w.validate(g)?;
    let run = || -> Result<RelationReport, SymbolicError> {
        let mut report = RelationReport::default();
        let sa = CkTerm::s_path(g, w.alpha())?;
        let sb = CkTerm::s_path(g, w.beta())?;
        report.check(
            "isometry alpha".into(),
            &sa.adjoint().multiply(&sa, g)?,
            &CkTerm::p(g, w.alpha().source().as_str())?,
        );
        report.check(
            "isometry beta".into(),
            &sb.adjoint().multiply(&sb, g)?,
            &CkTerm::p(g, w.beta().source().as_str())?,
        );
        report.check(
            "orthogonal alpha beta".into(),
            &sa.adjoint().multiply(&sb, g)?,
            &CkTerm::zero(),
        );
        Ok(report)
    };
    run().map_err(|e| LoopError::InvalidWitness(e.to_string()))
}

/// Convenience: the family check followed by the embedding identities.
pub fn verify_all(
    spec: &AugmentedGraphSpec,
    map: &GeneratorMap,
) -> Result<RelationReport, SymbolicError> {
    let mut report = verify_ck_family(map, spec)?;
    report.extend(verify_embedding(spec, map)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embed;
    use crate::graph::fixtures::*;
    use crate::loops::classify;
    use crate::symbolic::parse_term;

    #[test]
    fn square_family_is_proved() {
        let (spec, map) = embed(&square()).unwrap();
        let report = verify_all(&spec, &map).unwrap();
        assert!(
            report.all_hold(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert_eq!(report.count(RelationStatus::Recorded), 4);
        assert_eq!(report.count(RelationStatus::Delegated), 1);
        // 4 × 2 relation (1) + 16 relation (2) + 4 relation (3) + 9 embedding
        assert_eq!(report.count(RelationStatus::Proved), 8 + 16 + 4 + 9);
    }

    #[test]
    fn identity_on_two_receivers_needs_expansion() {
        let g = Graph::builder()
            .vertices(["a", "b", "w"])
            .edge("x", "a", "w")
            .edge("y", "b", "w")
            .build()
            .unwrap();
        let (spec, map) = embed(&g).unwrap();
        let report = verify_ck_family(&map, &spec).unwrap();
        assert!(report.all_hold());
        let ck3 = report.entries.iter().find(|e| e.id == "ck3 v=w").unwrap();
        assert_eq!(
            ck3.statement,
            "s(x) s*(x) + s(y) s*(y) = s(x) s*(x) + s(y) s*(y)"
        );
    }

    #[test]
    fn expand_ck3_instances() {
        let g = double_self_loop();
        let p = CkTerm::p(&g, "v").unwrap();
        let expanded = expand_ck3(&p, "v", &g).unwrap();
        assert_eq!(expanded.to_string(), "s(a) s*(a) + s(b) s*(b)");

        let (spec, _) = embed(&square()).unwrap();
        let p1 = CkTerm::p(&spec, "u1").unwrap();
        assert_eq!(
            expand_ck3(&p1, "u1", &spec).unwrap().to_string(),
            "s(T1.f1) s*(T1.f1)"
        );
        assert!(matches!(
            expand_ck3(&p1, "T1.L0.1", &spec),
            Err(SymbolicError::UnknownVertex(_))
        ));
        let lonely = Graph::builder().vertex("z").build().unwrap();
        let pz = CkTerm::p(&lonely, "z").unwrap();
        assert!(matches!(
            expand_ck3(&pz, "z", &lonely),
            Err(SymbolicError::NoReceivers(_))
        ));
    }

    #[test]
    fn swapped_f_indices_are_caught() {
        let (spec, map) = embed(&square()).unwrap();
        let bad = parse_term("s(T1.f3) t(T1) s*(T1.f1)", &spec).unwrap();
        let map = map.with_edge_image("e1", bad).unwrap();
        let report = verify_all(&spec, &map).unwrap();
        let failed: Vec<_> = report.failures().map(|e| e.id.as_str()).collect();
        assert!(failed.contains(&"ck3 v=u2"));
        assert!(failed.contains(&"range e=e1"));
        assert!(failed.contains(&"ck2 e=e1 f=e2"));
    }

    #[test]
    fn omitted_unitary_passes_relations_and_defers_spectrum() {
        let (spec, map) = embed(&square()).unwrap();
        let bare = parse_term("s(T1.f2) s*(T1.f1)", &spec).unwrap();
        let map = map.with_edge_image("e1", bare).unwrap();
        let family = verify_ck_family(&map, &spec).unwrap();
        assert!(family.all_hold());
        assert_eq!(family.count(RelationStatus::Delegated), 1);
        let embedding = verify_embedding(&spec, &map).unwrap();
        let failed: Vec<_> = embedding.failures().map(|e| e.id.as_str()).collect();
        assert_eq!(failed, ["loop tail=T1"]);
    }

    #[test]
    fn zero_projection_image_fails() {
        let (spec, map) = embed(&square()).unwrap();
        let map = map.with_vertex_image("u3", CkTerm::zero()).unwrap();
        let report = verify_ck_family(&map, &spec).unwrap();
        assert!(report.failures().any(|e| e.id == "nonzero v=u3"));
    }

    #[test]
    fn witnesses_verify() {
        for g in [double_self_loop(), square_with_entrance()] {
            let Classification::NotFinite { witness } = classify(&g) else {
                panic!("expected an entrance");
            };
            let report = verify_witness(&witness, &g).unwrap();
            assert_eq!(report.count(RelationStatus::Proved), 3);
        }
    }
}
