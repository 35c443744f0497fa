//! Residuals of the relations and the spectrum of mapped loops in a
//! truncated representation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use super::eigen::eigenvalues_sparse;
use super::rep::{op_of_term, NumericError, TruncatedRep};
use super::sparse::SparseOperator;
use crate::embed::{AugmentedGraphSpec, GeneratorMap};
use crate::id::TailId;
use crate::symbolic::{CkTerm, NormalMonomial};

/// Nonzero eigenvalues below this modulus are treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// For relation residuals.
    pub algebraic: f64,
    /// For eigenvalue moduli and the spectral distance.
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-12,
            spectral: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub relation: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualReport {
    /// Operator-norm bounds on the interior subspace.
    pub interior: Vec<Residual>,
    /// `‖(P_w - Σ S_e S_e^*) ξ_w‖` on the vertex vectors, where relation (3)
    /// cannot hold in a truncation.
    pub boundary: Vec<Residual>,
}

impl ResidualReport {
    pub fn max_interior(&self) -> f64 {
        self.interior.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self, tol: f64) -> impl Iterator<Item = &Residual> {
        self.interior.iter().filter(move |r| !(r.residual <= tol))
    }
}

struct Collector<'a> {
    rep: &'a TruncatedRep,
    out: Vec<Residual>,
}

impl Collector<'_> {
    fn push(&mut self, relation: String, lhs: &SparseOperator, rhs: &SparseOperator) {
        let residual = lhs.sub(rhs).compress(self.rep.interior()).norm_bound();
        self.out.push(Residual { relation, residual });
    }
}

/// Residuals of every relation instance of `C^*(F_d)` itself, of the
/// mapped family, and of the embedding identities, measured on the
/// interior. Relation names match the symbolic report, with an `F ` prefix
/// for the generators of `F_d`.
pub fn relation_residuals(
    rep: &TruncatedRep,
    spec: &AugmentedGraphSpec,
    map: &GeneratorMap,
) -> Result<ResidualReport, NumericError> {
    let mut c = Collector {
        rep,
        out: Vec::new(),
    };
    let f = rep.graph();
    let dim = rep.dim();
    let zero = SparseOperator::zero(dim);

    for v in f.vertices() {
        let p = rep.p(v.as_str()).expect("own vertex");
        c.push(format!("F ck1 idempotent v={v}"), &p.mul(p), p);
        c.push(format!("F ck1 self-adjoint v={v}"), &p.adjoint(), p);
    }
    for a in f.edges() {
        let sa = rep.s_adjoint(a.id.as_str()).expect("own edge");
        for b in f.edges() {
            let lhs = sa.mul(rep.s(b.id.as_str()).expect("own edge"));
            let rhs = if a.id == b.id {
                rep.p(a.source.as_str()).expect("own vertex")
            } else {
                &zero
            };
            c.push(format!("F ck2 e={} f={}", a.id, b.id), &lhs, rhs);
        }
    }
    let mut boundary = Vec::new();
    for (w, v) in f.vertices().iter().enumerate() {
        let receivers = f.in_edge_indices(w);
        if receivers.is_empty() {
            continue;
        }
        let mut sum = SparseOperator::zero(dim);
        for &e in receivers {
            let id = f.edges()[e].id.as_str();
            sum = sum.add(
                &rep.s(id)
                    .expect("own edge")
                    .mul(rep.s_adjoint(id).expect("own edge")),
            );
        }
        let p = rep.p(v.as_str()).expect("own vertex");
        let defect = p.sub(&sum);
        c.push(format!("F ck3 v={v}"), p, &sum);
        let at = rep
            .basis()
            .index_of(&crate::graph::Path::vertex(v.clone()))
            .expect("vertex paths are in the basis");
        let column = defect
            .column(at)
            .iter()
            .map(|(_, x)| x.norm_sqr())
            .sum::<f64>();
        boundary.push(Residual {
            relation: format!("F ck3 boundary v={v}"),
            residual: libm::sqrt(column),
        });
    }
    for r in spec.replacements() {
        let ns = r.tail().namespace().as_str();
        let t = rep.t(ns).expect("tail unitary");
        let ts = rep.t_adjoint(ns).expect("tail unitary");
        let pv = rep.p(r.tail().sink().as_str()).expect("sink");
        c.push(format!("F unitary t t* tail={ns}"), &t.mul(ts), pv);
        c.push(format!("F unitary t* t tail={ns}"), &ts.mul(t), pv);
        c.push(format!("F corner p t tail={ns}"), &pv.mul(t), t);
        c.push(format!("F corner t p tail={ns}"), &t.mul(pv), t);
    }

    let e = map.domain();
    let image = |t: &CkTerm| op_of_term(t, rep);
    let p_img: Vec<SparseOperator> = map
        .vertex_images()
        .map(|(_, t)| image(t))
        .collect::<Result<_, _>>()?;
    let s_img: Vec<SparseOperator> = map
        .edge_images()
        .map(|(_, t)| image(t))
        .collect::<Result<_, _>>()?;
    let s_img_adj: Vec<SparseOperator> = s_img.iter().map(SparseOperator::adjoint).collect();
    for (i, v) in e.vertices().iter().enumerate() {
        let p = &p_img[i];
        c.push(format!("ck1 idempotent v={v}"), &p.mul(p), p);
        c.push(format!("ck1 self-adjoint v={v}"), &p.adjoint(), p);
    }
    for (i, a) in e.edges().iter().enumerate() {
        for (j, b) in e.edges().iter().enumerate() {
            let lhs = s_img_adj[i].mul(&s_img[j]);
            let rhs = if i == j {
                &p_img[e.vertex_index(a.source.as_str()).expect("domain vertex")]
            } else {
                &zero
            };
            c.push(format!("ck2 e={} f={}", a.id, b.id), &lhs, rhs);
        }
    }
    for (w, v) in e.vertices().iter().enumerate() {
        let receivers = e.in_edge_indices(w);
        if receivers.is_empty() {
            continue;
        }
        let mut sum = SparseOperator::zero(dim);
        for &g in receivers {
            sum = sum.add(&s_img[g].mul(&s_img_adj[g]));
        }
        c.push(format!("ck3 v={v}"), &p_img[w], &sum);
    }
    for r in spec.replacements() {
        let l = r.simple_loop();
        let n = l.len();
        let s_of = |i: usize| e.edge_index(l.edge(i).as_str()).expect("loop edge");
        for i in 1..=n {
            let k = s_of(i);
            let u_i = rep.p(l.vertex(i).as_str()).expect("loop vertex");
            let u_next = rep.p(l.vertex(i % n + 1).as_str()).expect("loop vertex");
            c.push(
                format!("isometry e={}", l.edge(i)),
                &s_img_adj[k].mul(&s_img[k]),
                u_i,
            );
            c.push(
                format!("range e={}", l.edge(i)),
                &s_img[k].mul(&s_img_adj[k]),
                u_next,
            );
        }
        let product = mapped_loop(&s_img, e, r)?;
        let f1 = r.f(1);
        let f1_path = crate::graph::Path::from_parts(
            f1.range.clone(),
            f1.source.clone(),
            alloc::vec![f1.id.clone()],
        );
        let expected = NormalMonomial::simple(
            spec,
            f1_path.clone(),
            Some((r.tail().namespace().as_str(), n as i64)),
            f1_path,
        )
        .map_err(|e| NumericError::UnknownGenerator(e.to_string()))?;
        let expected = op_of_term(&CkTerm::from_monomial(expected), rep)?;
        c.push(
            format!("loop tail={}", r.tail().namespace()),
            &product,
            &expected,
        );
    }

    Ok(ResidualReport {
        interior: c.out,
        boundary,
    })
}

fn mapped_loop(
    s_img: &[SparseOperator],
    e: &crate::graph::Graph,
    r: &crate::embed::LoopReplacement,
) -> Result<SparseOperator, NumericError> {
    let l = r.simple_loop();
    let at = |i: usize| e.edge_index(l.edge(i).as_str()).expect("loop edge");
    let mut product = s_img[at(1)].clone();
    for i in 2..=l.len() {
        product = s_img[at(i)].mul(&product);
    }
    Ok(product)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub tail: TailId,
    /// Length `n` of the replaced loop.
    pub loop_len: usize,
    pub depth: usize,
    /// `N_d` for the tail.
    pub stage_size: u64,
    /// Eigenvalues of the mapped loop on the span of basis vectors it
    /// touches, with multiplicity.
    pub eigenvalues: Vec<Complex64>,
    /// Dimension of the remaining part of the path space, where the
    /// operator vanishes identically.
    pub untouched: usize,
    /// `max ||λ| - 1|` over the nonzero eigenvalues.
    pub max_modulus_defect: f64,
    /// Upper bound on the Hausdorff distance from the nonzero eigenvalues
    /// to the unit circle; infinite if there are none.
    pub hausdorff: f64,
    /// `π · gcd(n, N_d) / N_d`.
    pub bound: f64,
}

impl SpectrumReport {
    pub fn nonzero(&self) -> impl Iterator<Item = &Complex64> {
        self.eigenvalues
            .iter()
            .filter(|z| z.norm() > ZERO_EIGENVALUE)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.nonzero().next().is_some()
            && self.max_modulus_defect <= tol
            && self.hausdorff <= self.bound + tol
    }
}

/// An upper bound for the Hausdorff distance between a finite set of
/// nonzero points and the unit circle.
///
/// Each point is first pushed radially onto the circle. If the largest
/// angular gap between neighbours is `g`, every point of the circle lies
/// within chord `2 sin(g/4)` of a pushed point, and each pushed point lies
/// within its radial defect of the original. Equal to the true distance
/// when the points already lie on the circle.
pub fn hausdorff_to_circle(points: &[Complex64]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    let radial = points
        .iter()
        .map(|z| libm::fabs(z.norm() - 1.0))
        .fold(0.0, f64::max);
    let mut angles: Vec<f64> = points.iter().map(|z| libm::atan2(z.im, z.re)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let mut gap = 2.0 * PI - (angles[angles.len() - 1] - angles[0]);
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    2.0 * libm::sin(gap / 4.0) + radial
}

/// `π · gcd(n, N_d) / N_d`: half the angular spacing of the `n`-th powers
/// of the `N_d`-th roots of unity, which bounds their chordal distance to
/// any point of the circle.
pub fn spectral_bound(loop_len: usize, stage_size: u64) -> f64 {
    let g = (loop_len as u64).gcd(&stage_size);
    PI * g as f64 / stage_size as f64
}

/// Eigenvalues of `s̃_{e_n} ⋯ s̃_{e_1}` for the loop replaced by `tail`.
pub fn loop_spectrum(
    rep: &TruncatedRep,
    spec: &AugmentedGraphSpec,
    map: &GeneratorMap,
    tail: &str,
) -> Result<SpectrumReport, NumericError> {
    let r = spec
        .replacement_for_tail(tail)
        .ok_or_else(|| NumericError::UnknownTail(tail.into()))?;
    let e = map.domain();
    let s_img: Vec<SparseOperator> = map
        .edge_images()
        .map(|(_, t)| op_of_term(t, rep))
        .collect::<Result<_, _>>()?;
    let x = mapped_loop(&s_img, e, r)?;

    let mut touched = alloc::vec![false; rep.dim()];
    for (row, col, _) in x.triplets() {
        touched[row] = true;
        touched[col] = true;
    }
    let support: Vec<usize> = (0..rep.dim()).filter(|&i| touched[i]).collect();
    let eigenvalues = eigenvalues_sparse(&x.compress(&support))?;

    let nonzero: Vec<Complex64> = eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() > ZERO_EIGENVALUE)
        .collect();
    let max_modulus_defect = nonzero
        .iter()
        .map(|z| libm::fabs(z.norm() - 1.0))
        .fold(0.0, f64::max);
    let stage_size = *r
        .tail()
        .corner_dimensions(rep.depth())?
        .last()
        .expect("depth >= 1");
    let n = r.simple_loop().len();
    Ok(SpectrumReport {
        tail: r.tail().namespace().clone(),
        loop_len: n,
        depth: rep.depth(),
        stage_size,
        untouched: rep.dim() - support.len(),
        max_modulus_defect,
        hausdorff: hausdorff_to_circle(&nonzero),
        bound: spectral_bound(n, stage_size),
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embed;
    use crate::graph::fixtures::square;
    use crate::graph::Graph;
    use crate::numeric::build_rep;
    use crate::symbolic::parse_term;

    #[test]
    fn square_residuals_vanish_on_the_interior() {
        let (spec, map) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 4).unwrap();
        let report = relation_residuals(&rep, &spec, &map).unwrap();
        assert_eq!(
            report.failures(1e-12).count(),
            0,
            "{:?}",
            report.failures(1e-12).next()
        );
        assert!(report.boundary.iter().all(|r| r.residual == 1.0));
        // u1..u4, the sink and levels 1..3 receive edges; level 4 does not
        assert_eq!(report.boundary.len(), 8);
    }

    #[test]
    fn hausdorff_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert!((hausdorff_to_circle(&[one]) - 2.0).abs() < 1e-15);
        let roots: Vec<Complex64> = (0..8)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0))
            .collect();
        // the midpoint between neighbours is π/8 away in angle
        let h = hausdorff_to_circle(&roots);
        assert!((h - 2.0 * libm::sin(PI / 16.0)).abs() < 1e-12);
        assert!(h <= PI / 4.0);
        assert_eq!(hausdorff_to_circle(&[]), f64::INFINITY);
        let shrunk = [Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)];
        assert!((hausdorff_to_circle(&shrunk) - (2.0 * libm::sin(PI / 4.0) + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn spectral_bound_values() {
        assert!((spectral_bound(4, 256) - PI / 64.0).abs() < 1e-15);
        assert!((spectral_bound(1, 16) - PI / 16.0).abs() < 1e-15);
        assert!((spectral_bound(4, 2) - PI).abs() < 1e-15);
    }

    #[test]
    fn square_spectrum_at_depth_five() {
        let (spec, map) = embed(&square()).unwrap();
        let rep = build_rep(&spec, 5).unwrap();
        let report = loop_spectrum(&rep, &spec, &map, "T1").unwrap();
        assert!(report.passes(1e-10));
        // N_5 = 32 and n = 4: the 8th roots of unity
        assert!((report.hausdorff - 2.0 * libm::sin(PI / 16.0)).abs() < 1e-10);
        assert_eq!(report.nonzero().count(), 63);
        assert!(matches!(
            loop_spectrum(&rep, &spec, &map, "T9"),
            Err(NumericError::UnknownTail(_))
        ));
    }

    #[test]
    fn self_loop_without_unitary_fails_the_spectrum() {
        let g = Graph::builder()
            .vertex("u")
            .edge("e", "u", "u")
            .build()
            .unwrap();
        let (spec, map) = embed(&g).unwrap();
        let bare = parse_term("s(T1.f1) s*(T1.f1)", &spec).unwrap();
        let map = map.with_edge_image("e", bare).unwrap();
        let rep = build_rep(&spec, 4).unwrap();
        let report = loop_spectrum(&rep, &spec, &map, "T1").unwrap();
        assert!((report.hausdorff - 2.0).abs() < 1e-12);
        assert!(!report.passes(1e-10));
    }
}
