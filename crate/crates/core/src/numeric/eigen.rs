//! Eigenvalues of small complex matrices.
//!
//! A dense block is reduced to upper Hessenberg form with Householder
//! reflections and then driven to triangular form by the shifted QR
//! iteration (Wilkinson shifts, complex Givens rotations, deflation at
//! negligible subdiagonal entries). Sparse operators are first split into
//! diagonal blocks of a block-triangular permutation, found as the strongly
//! connected components of their sparsity pattern.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use super::sparse::SparseOperator;
use crate::scc::strongly_connected_components;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("QR iteration did not converge on a block of size {0}")]
    NoConvergence(usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, x: Complex64) {
        self.a[r * self.n + c] = x;
    }
}

fn reduce_to_hessenberg(m: &mut Dense) {
    let n = m.n;
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|r| m.at(r, k)).collect();
        let norm = libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let phase = if v[0] == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * norm;
        let vnorm = libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v {
            *x /= vnorm;
        }
        // A <- (I - 2vv*) A
        for c in 0..n {
            let dot: Complex64 = (k + 1..n).map(|r| v[r - k - 1].conj() * m.at(r, c)).sum();
            for r in k + 1..n {
                let x = m.at(r, c) - v[r - k - 1] * dot * 2.0;
                m.set(r, c, x);
            }
        }
        // A <- A (I - 2vv*)
        for r in 0..n {
            let dot: Complex64 = (k + 1..n).map(|c| m.at(r, c) * v[c - k - 1]).sum();
            for c in k + 1..n {
                let x = m.at(r, c) - dot * v[c - k - 1].conj() * 2.0;
                m.set(r, c, x);
            }
        }
        for r in k + 2..n {
            m.set(r, k, ZERO);
        }
    }
}

/// `(c, s)` with `[[c, s], [-conj(s), c]] (x, y)^T = (ρ, 0)^T`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let r = libm::hypot(x.norm(), y.norm());
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let c = x.norm() / r;
    let s = (x / x.norm()) * y.conj() / r;
    (c, s)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(m: &mut Dense) -> Result<Vec<Complex64>, EigenError> {
    let n = m.n;
    let scale = m.a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iterations = 0usize;
    let budget = 60 * n.max(1);
    while hi > 0 {
        if hi == 1 {
            eig.push(m.at(0, 0));
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = m.at(lo, lo - 1).norm();
            let mut local = m.at(lo, lo).norm() + m.at(lo - 1, lo - 1).norm();
            if local == 0.0 {
                local = scale;
            }
            if sub <= f64::EPSILON * local {
                m.set(lo, lo - 1, ZERO);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(m.at(hi - 1, hi - 1));
            hi -= 1;
            iterations = 0;
            continue;
        }
        iterations += 1;
        if iterations > budget {
            return Err(EigenError::NoConvergence(n));
        }
        let mu = if iterations % 11 == 0 {
            // exceptional shift to break cycles of the plain iteration
            m.at(hi - 1, hi - 1) + Complex64::new(0.75, 0.5) * m.at(hi - 1, hi - 2).norm()
        } else {
            wilkinson_shift(
                m.at(hi - 2, hi - 2),
                m.at(hi - 2, hi - 1),
                m.at(hi - 1, hi - 2),
                m.at(hi - 1, hi - 1),
            )
        };
        for k in lo..hi {
            let x = m.at(k, k) - mu;
            m.set(k, k, x);
        }
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (c, s) = givens(m.at(k, k), m.at(k + 1, k));
            for j in k..hi {
                let x = m.at(k, j);
                let y = m.at(k + 1, j);
                m.set(k, j, x * c + s * y);
                m.set(k + 1, j, -s.conj() * x + y * c);
            }
            m.set(k + 1, k, ZERO);
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..(k + 2).min(hi) {
                let x = m.at(i, k);
                let y = m.at(i, k + 1);
                m.set(i, k, x * c + s.conj() * y);
                m.set(i, k + 1, -s * x + y * c);
            }
        }
        for k in lo..hi {
            let x = m.at(k, k) + mu;
            m.set(k, k, x);
        }
    }
    eig.reverse();
    Ok(eig)
}

/// Eigenvalues of a dense row-major `n × n` matrix, with multiplicity.
pub fn eigenvalues_dense(a: &[Complex64], n: usize) -> Result<Vec<Complex64>, EigenError> {
    assert_eq!(a.len(), n * n, "expected an {n}x{n} matrix");
    let mut m = Dense { n, a: a.to_vec() };
    reduce_to_hessenberg(&mut m);
    hessenberg_qr(&mut m)
}

/// Eigenvalues of a sparse operator, with multiplicity, computed block by
/// block over the strongly connected components of its sparsity pattern.
/// A singleton block contributes its diagonal entry exactly.
pub fn eigenvalues_sparse(op: &SparseOperator) -> Result<Vec<Complex64>, EigenError> {
    let n = op.dim();
    let mut succ = vec![Vec::new(); n];
    for (r, c, _) in op.triplets() {
        if r != c {
            succ[c].push(r);
        }
    }
    let mut out = Vec::with_capacity(n);
    for block in strongly_connected_components(&succ) {
        if let [i] = block[..] {
            out.push(op.get(i, i));
            continue;
        }
        let dense = op.compress(&block).to_dense();
        out.extend(eigenvalues_dense(&dense, block.len())?);
    }
    Ok(out)
}
