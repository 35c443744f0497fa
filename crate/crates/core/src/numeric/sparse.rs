use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// A square complex matrix stored by columns; each column keeps its
/// nonzero entries sorted by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    /// Builds from `(row, col, value)` triples; repeated positions add up
    /// and exact zeros are dropped.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut op = SparseOperator::zero(dim);
        for (r, c, x) in triplets {
            assert!(
                r < dim && c < dim,
                "entry ({r}, {c}) outside a {dim}-dimensional operator"
            );
            op.cols[c].push((r, x));
        }
        for col in &mut op.cols {
            normalize_column(col);
        }
        op
    }

    /// The diagonal matrix with the given entries.
    pub fn diagonal(entries: impl IntoIterator<Item = (usize, Complex64)>, dim: usize) -> Self {
        Self::from_triplets(dim, entries.into_iter().map(|(i, x)| (i, i, x)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, Complex64)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match self.cols[c].binary_search_by_key(&r, |&(i, _)| i) {
            Ok(k) => self.cols[c][k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, x)| (r, c, x)))
    }

    pub fn mul(&self, rhs: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let mut out = SparseOperator::zero(self.dim);
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut touched = Vec::new();
        for (c, col) in rhs.cols.iter().enumerate() {
            for &(k, b) in col {
                for &(r, a) in &self.cols[k] {
                    if acc[r] == Complex64::new(0.0, 0.0) {
                        touched.push(r);
                    }
                    acc[r] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &r in &touched {
                if acc[r] != Complex64::new(0.0, 0.0) {
                    out.cols[c].push((r, acc[r]));
                }
                acc[r] = Complex64::new(0.0, 0.0);
            }
            touched.clear();
        }
        out
    }

    pub fn adjoint(&self) -> SparseOperator {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, x)| (c, r, x.conj())))
    }

    pub fn add(&self, rhs: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        Self::from_triplets(self.dim, self.triplets().chain(rhs.triplets()))
    }

    pub fn sub(&self, rhs: &SparseOperator) -> SparseOperator {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: Complex64) -> SparseOperator {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, x)| (r, c, x * k)))
    }

    /// The block on the given (increasing) indices.
    pub fn compress(&self, indices: &[usize]) -> SparseOperator {
        let mut position = vec![usize::MAX; self.dim];
        for (new, &old) in indices.iter().enumerate() {
            position[old] = new;
        }
        let mut out = SparseOperator::zero(indices.len());
        for (new_c, &old_c) in indices.iter().enumerate() {
            out.cols[new_c] = self.cols[old_c]
                .iter()
                .filter(|&&(r, _)| position[r] != usize::MAX)
                .map(|&(r, x)| (position[r], x))
                .collect();
            normalize_column(&mut out.cols[new_c]);
        }
        out
    }

    /// Largest absolute column sum.
    pub fn norm_1(&self) -> f64 {
        self.cols
            .iter()
            // an empty f64 sum is -0.0; start the fold at +0.0 instead
            .map(|col| col.iter().fold(0.0, |acc, (_, x)| acc + x.norm()))
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for (r, _, x) in self.triplets() {
            rows[r] += x.norm();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `sqrt(‖A‖_1 ‖A‖_∞)`, an upper bound for the operator norm. It is
    /// exact when every row and column has at most one nonzero entry.
    pub fn norm_bound(&self) -> f64 {
        libm::sqrt(self.norm_1() * self.norm_inf())
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets()
            .map(|(_, _, x)| x.norm())
            .fold(0.0, f64::max)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for (r, c, x) in self.triplets() {
            out[r * self.dim + c] = x;
        }
        out
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, a) in col {
                y[r] += a * x[c];
            }
        }
        y
    }
}

fn normalize_column(col: &mut Vec<(usize, Complex64)>) {
    col.sort_by_key(|&(r, _)| r);
    let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(col.len());
    for &(r, x) in col.iter() {
        match merged.last_mut() {
            Some((last, sum)) if *last == r => *sum += x,
            _ => merged.push((r, x)),
        }
    }
    merged.retain(|(_, x)| *x != Complex64::new(0.0, 0.0));
    *col = merged;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        // shift on C^3 and its adjoint
        let s = SparseOperator::from_triplets(3, [(1, 0, c(1.0, 0.0)), (2, 1, c(1.0, 0.0))]);
        let ss = s.adjoint().mul(&s);
        assert_eq!(
            ss,
            SparseOperator::diagonal([(0, c(1.0, 0.0)), (1, c(1.0, 0.0))], 3)
        );
        assert_eq!(s.mul(&s).get(2, 0), c(1.0, 0.0));
        assert_eq!(s.mul(&s).nnz(), 1);
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = SparseOperator::diagonal([(0, c(2.0, 1.0))], 2);
        assert_eq!(a.sub(&a).nnz(), 0);
        let b = SparseOperator::from_triplets(2, [(0, 0, c(1.0, 0.0)), (0, 0, c(-1.0, 0.0))]);
        assert_eq!(b.nnz(), 0);
    }

    #[test]
    fn norms_and_compression() {
        let a = SparseOperator::from_triplets(
            3,
            [
                (0, 0, c(3.0, 4.0)),
                (1, 2, c(0.0, -2.0)),
                (2, 1, c(1.0, 0.0)),
            ],
        );
        assert_eq!(a.max_abs(), 5.0);
        assert_eq!(a.norm_bound(), 5.0);
        let zero = SparseOperator::zero(2).norm_bound();
        assert!(zero == 0.0 && zero.is_sign_positive());
        let b = a.compress(&[1, 2]);
        assert_eq!(b.dim(), 2);
        assert_eq!(b.get(0, 1), c(0.0, -2.0));
        assert_eq!(b.get(1, 0), c(1.0, 0.0));
        assert_eq!(
            a.apply(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])[1],
            c(0.0, -2.0)
        );
        assert_eq!(a.to_dense()[5], c(0.0, -2.0));
    }
}
