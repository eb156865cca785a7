use std::fmt;

use num_complex::Complex64;

use crate::error::{dim_err, LabError, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
///
/// Every truncated operator in the crate (shifts, Hankel sections, CAR
/// blocks, Foguel blocks) is carried by this type.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            for i in 0..self.rows {
                let row: Vec<String> = (0..self.cols)
                    .map(|j| {
                        let z = self[(i, j)];
                        if z.im == 0.0 {
                            format!("{}", z.re)
                        } else {
                            format!("{}{:+}i", z.re, z.im)
                        }
                    })
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| dim_err(format!("{rows}x{cols} overflows")))?;
        if data.len() != expected {
            return Err(dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LabError::InvalidArgument(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    /// Real matrix from nested rows; all rows must share a length.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(dim_err("ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(dim_err("ragged rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise transpose, without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(dim_err(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Entrywise combination of two matrices of identical shape.
    pub(crate) fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_same_shape(other, "add")?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    /// Matrix product. Zero entries of the left factor are skipped and a
    /// sparse right factor is walked by its nonzeros, so products with
    /// shifts and other sparse truncations cost O(nnz) per row.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(dim_err(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        let n = rhs.cols;
        let sparse_rhs = rhs.nnz() * 4 < rhs.data.len();
        if sparse_rhs {
            let nz: Vec<Vec<(usize, Complex64)>> = (0..rhs.rows)
                .map(|k| {
                    rhs.row(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, z)| **z != ZERO)
                        .map(|(j, z)| (j, *z))
                        .collect()
                })
                .collect();
            for i in 0..self.rows {
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a == ZERO {
                        continue;
                    }
                    for &(j, b) in &nz[k] {
                        out_row[j] += a * b;
                    }
                }
            }
        } else {
            for i in 0..self.rows {
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a == ZERO {
                        continue;
                    }
                    for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^p` for square matrices; `p = 0` gives the identity.
    pub fn pow(&self, p: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(dim_err("pow of a non-square matrix"));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..p {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A* x` without forming the adjoint.
    pub fn matvec_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows, "adjoint matvec length mismatch");
        let mut out = vec![ZERO; self.cols];
        for (i, xi) in x.iter().enumerate() {
            if *xi == ZERO {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    /// Kronecker product, shape `(rA*rB) x (cA*cB)`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or_else(|| dim_err("kron row count overflows"))?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or_else(|| dim_err("kron column count overflows"))?;
        rows.checked_mul(cols)
            .ok_or_else(|| dim_err("kron entry count overflows"))?;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// The block matrix `[[a, b], [c, d]]`.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(dim_err(format!(
                "block2x2: blocks {:?} {:?} / {:?} {:?} are not conformable",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        let mut out = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols, b);
        out.set_block(a.rows, 0, c);
        out.set_block(a.rows, a.cols, d);
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(dim_err(format!(
                "submatrix {rows}x{cols} at ({r0},{c0}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)]))
    }

    /// Compression to the leading `rows x cols` corner (clamped to the shape).
    pub fn leading(&self, rows: usize, cols: usize) -> Self {
        let rows = rows.min(self.rows);
        let cols = cols.min(self.cols);
        Self::from_fn(rows, cols, |i, j| self[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Drops every identically zero row and column. Singular values other
    /// than zero are unchanged.
    pub fn trim_zero_lines(&self) -> Self {
        let keep_rows: Vec<usize> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|z| *z != ZERO))
            .collect();
        let keep_cols: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| self[(i, j)] != ZERO))
            .collect();
        if keep_rows.len() == self.rows && keep_cols.len() == self.cols {
            return self.clone();
        }
        Self::from_fn(keep_rows.len(), keep_cols.len(), |i, j| {
            self[(keep_rows[i], keep_cols[j])]
        })
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Truncated unilateral shift: `S e_i = e_{i+1}`, ones on the subdiagonal.
pub fn make_shift(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(dim_err("shift of size 0"));
    }
    let mut s = ComplexMatrix::zeros(n, n);
    for i in 0..n - 1 {
        s[(i + 1, i)] = ONE;
    }
    Ok(s)
}

/// Block shift `S ⊗ I_d` acting on `n` blocks of size `d`.
pub fn make_block_shift(n: usize, d: usize) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(dim_err("block size 0"));
    }
    make_shift(n)?.kron(&ComplexMatrix::identity(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_has_ones_on_subdiagonal() {
        let s = make_shift(3).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[vec![0., 0., 0.], vec![1., 0., 0.], vec![0., 1., 0.]])
                .unwrap();
        assert_eq!(s, expected);
        assert_eq!(
            s.adjoint().matmul(&s).unwrap(),
            ComplexMatrix::diag_real(&[1., 1., 0.])
        );
        assert!(matches!(make_shift(0), Err(LabError::InvalidDimension(_))));
    }

    #[test]
    fn adjoint_conjugates_and_transpose_does_not() {
        let m = ComplexMatrix::from_rows(&[vec![c(0., 1.)]]).unwrap();
        assert_eq!(m.adjoint()[(0, 0)], c(0., -1.));
        assert_eq!(m.transpose()[(0, 0)], c(0., 1.));
    }

    #[test]
    fn identity_is_neutral() {
        let a =
            ComplexMatrix::from_rows(&[vec![c(1., 2.), c(3., -1.)], vec![c(0., 0.5), c(-2., 0.)]])
                .unwrap();
        assert_eq!(ComplexMatrix::identity(2).matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&ComplexMatrix::identity(2)).unwrap(), a);
    }

    #[test]
    fn matmul_sparse_and_dense_paths_agree() {
        let a = ComplexMatrix::from_fn(5, 4, |i, j| {
            c((i * 3 + j) as f64 - 4.0, (i as f64) * 0.5 - j as f64)
        });
        let dense = ComplexMatrix::from_fn(4, 6, |i, j| c(1.0 + i as f64 * j as f64, 0.25));
        let mut sparse = ComplexMatrix::zeros(4, 6);
        sparse[(1, 2)] = c(2.0, -1.0);
        sparse[(3, 5)] = c(0.5, 0.0);
        for rhs in [&dense, &sparse] {
            let got = a.matmul(rhs).unwrap();
            for i in 0..5 {
                for j in 0..6 {
                    let want: Complex64 = (0..4).map(|k| a[(i, k)] * rhs[(k, j)]).sum();
                    assert!((got[(i, j)] - want).norm() < 1e-12);
                }
            }
        }
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn kron_matches_direct_expansion() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));

        let z = ComplexMatrix::diag_real(&[1., -1.]);
        let lower = ComplexMatrix::from_real_rows(&[vec![0., 1.], vec![0., 0.]]).unwrap();
        let k = z.kron(&lower).unwrap();
        assert_eq!(k.shape(), (4, 4));
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    (0, 1) => 1.0,
                    (2, 3) => -1.0,
                    _ => 0.0,
                };
                assert_eq!(k[(i, j)], c(want, 0.));
            }
        }

        let a = ComplexMatrix::zeros(3, 2);
        let b = ComplexMatrix::zeros(4, 5);
        assert_eq!(a.kron(&b).unwrap().shape(), (12, 10));
    }

    #[test]
    fn kron_rejects_overflowing_shapes() {
        let wide = ComplexMatrix::zeros(1, 0);
        // 0 columns keeps the allocation empty while the row product overflows.
        let tall = ComplexMatrix {
            rows: usize::MAX / 2,
            cols: 0,
            data: Vec::new(),
        };
        assert!(matches!(
            tall.kron(&ComplexMatrix {
                rows: 3,
                cols: 0,
                data: vec![]
            }),
            Err(LabError::InvalidDimension(_))
        ));
        assert!(wide.kron(&wide).is_ok());
    }

    #[test]
    fn block2x2_assembles_and_extracts() {
        let n = 4;
        let s = make_shift(n).unwrap();
        let zero = ComplexMatrix::zeros(n, n);
        let eye = ComplexMatrix::identity(n);
        assert_eq!(
            ComplexMatrix::block2x2(&eye, &zero, &zero, &eye).unwrap(),
            ComplexMatrix::identity(2 * n)
        );

        let r = ComplexMatrix::block2x2(&s.adjoint(), &zero, &zero, &s).unwrap();
        let r2 = r.matmul(&r).unwrap();
        let s2 = s.matmul(&s).unwrap();
        let sstar2 = s.adjoint().matmul(&s.adjoint()).unwrap();
        let expected = ComplexMatrix::block2x2(&sstar2, &zero, &zero, &s2).unwrap();
        assert_eq!(r2, expected);

        let x = ComplexMatrix::from_real_fn(n, n, |i, j| (i + 2 * j) as f64);
        let r = ComplexMatrix::block2x2(&s.adjoint(), &x, &zero, &s).unwrap();
        assert_eq!(r.submatrix(0, n, n, n).unwrap(), x);

        let bad = ComplexMatrix::zeros(3, 4);
        assert!(ComplexMatrix::block2x2(&eye, &bad, &zero, &eye).is_err());
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.)]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(0., f64::INFINITY)]).is_err());
    }

    #[test]
    fn trim_zero_lines_keeps_the_support() {
        let mut m = ComplexMatrix::zeros(5, 6);
        m[(1, 2)] = ONE;
        m[(3, 4)] = c(2.0, 0.0);
        let t = m.trim_zero_lines();
        assert_eq!(t.shape(), (2, 2));
        assert_eq!(t[(1, 1)], c(2.0, 0.0));
    }
}
