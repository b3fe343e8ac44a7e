//! Compressed sparse row matrices for chain Hamiltonians.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{CMat, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl SparseMatrix {
    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0usize; dim + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        let mut out = SparseMatrix { dim, indptr, indices, data };
        out.prune();
        out
    }

    fn prune(&mut self) {
        let mut indptr = vec![0usize; self.dim + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.data[k] != ZERO {
                    indices.push(self.indices[k]);
                    data.push(self.data[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.data = data;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// `y += coeff · A x` for every column of `x`.
    pub fn apply_add(&self, coeff: f64, x: &CMat, y: &mut CMat) {
        debug_assert_eq!(x.nrows(), self.dim);
        let n = self.dim;
        let xs = x.as_slice();
        let ys = y.as_mut_slice();
        for (xc, yc) in xs.chunks_exact(n).zip(ys.chunks_exact_mut(n)) {
            for (r, yr) in yc.iter_mut().enumerate() {
                let (a, b) = (self.indptr[r], self.indptr[r + 1]);
                let mut acc = ZERO;
                for (v, &c) in self.data[a..b].iter().zip(&self.indices[a..b]) {
                    acc += v * xc[c];
                }
                *yr += acc * coeff;
            }
        }
    }

    /// `m += coeff · A` on a dense accumulator.
    pub fn add_to_dense(&self, coeff: f64, m: &mut CMat) {
        for r in 0..self.dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                m[(r, self.indices[k])] += self.data[k] * coeff;
            }
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        self.add_to_dense(1.0, &mut m);
        m
    }

    pub fn from_dense(m: &CMat) -> Self {
        let mut t = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != ZERO {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), t)
    }
}
