use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{dim_err, Result};

/// Compressed-row sparse matrix. Used for the Jordan–Wigner generators,
/// whose dimension outgrows dense storage long before their nonzero count
/// does.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(dim_err(format!("triplet ({i},{j}) outside {rows}x{cols}")));
            }
            per_row[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut entries in per_row {
            entries.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < entries.len() {
                let j = entries[k].0;
                let mut v = ZERO;
                while k < entries.len() && entries[k].0 == j {
                    v += entries[k].1;
                    k += 1;
                }
                if v != ZERO {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row_entries(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(i, j, v)| (j, i, v.conj())),
        )
        .expect("adjoint preserves bounds")
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dim_err("sparse add shape mismatch"));
        }
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets()),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(dim_err("sparse matmul shape mismatch"));
        }
        let mut triplets = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row_entries(i) {
                for (j, b) in other.row_entries(k) {
                    triplets.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "sparse matvec length mismatch");
        (0..self.rows)
            .map(|i| self.row_entries(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn matvec_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows, "sparse adjoint matvec length mismatch");
        let mut out = vec![ZERO; self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (j, v) in self.row_entries(i) {
                out[j] += v.conj() * xi;
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        Self::from_triplets(
            rows,
            cols,
            (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j, m[(i, j)]))),
        )
        .expect("dense bounds")
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True when no row and no column holds more than one nonzero. The
    /// operator norm of such a matrix is its largest entry modulus.
    pub fn is_monomial(&self) -> bool {
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            if self.row_ptr[i + 1] - self.row_ptr[i] > 1 {
                return false;
            }
            for (j, _) in self.row_entries(i) {
                if std::mem::replace(&mut col_seen[j], true) {
                    return false;
                }
            }
        }
        true
    }
}
