// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::linalg::{CMatrix, C64, ZERO};

/// Compressed-row copy of a dense operator, used for the right-hand side of
/// the master equation where model operators have only a few bands.
#[derive(Clone, Debug)]
pub(crate) struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Csr {
    pub fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..n {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                if v != ZERO {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    #[cfg(test)]
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out += c * self * m`.
    pub fn mul_add(&self, c: C64, m: &CMatrix, out: &mut CMatrix) {
        let ncols = m.ncols();
        let src = m.as_slice();
        let dst = out.as_mut_slice();
        for j in 0..ncols {
            let col = &src[j * self.n..(j + 1) * self.n];
            let out_col = &mut dst[j * self.n..(j + 1) * self.n];
            for r in 0..self.n {
                let mut acc = ZERO;
                for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                    acc += self.vals[idx] * col[self.cols[idx]];
                }
                out_col[r] += c * acc;
            }
        }
    }

    /// `self * m` into `out` (overwrites).
    pub fn mul_into(&self, m: &CMatrix, out: &mut CMatrix) {
        out.fill(ZERO);
        self.mul_add(C64::new(1.0, 0.0), m, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Operator;

    #[test]
    fn matches_dense_product() {
        let a = Operator::annihilation(6).unwrap();
        let h = (&(&a.adjoint() * &a.adjoint()) + &(&a * &a)).into_matrix();
        let m = CMatrix::from_fn(6, 6, |r, c| C64::new(r as f64 - 0.5 * c as f64, (r * c) as f64 * 0.1));
        let csr = Csr::from_dense(&h);
        assert_eq!(csr.nnz(), 8);
        let mut out = CMatrix::zeros(6, 6);
        csr.mul_into(&m, &mut out);
        assert!((out - &h * &m).norm() < 1e-12);
    }
}
