//! Jordan–Wigner realization of the canonical anticommutation relations on
//! `(C^2)^{⊗m}`, and block matrices whose `(i,j)` block is a scalar multiple
//! of one generator chosen by `i + j`.
//!
//! Generators are stored sparse: each has `2^{m-1}` nonzeros of modulus 1.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{dim_err, LabError, Result};
use crate::linalg::{op_norm_sparse, ComplexMatrix, SparseMatrix, DEFAULT_DENSE_CAP};
use crate::sequences::WeightSequence;

pub const MAX_MODES: usize = 14;

/// Bound on the dimension of sparse pattern operators.
pub const MATVEC_CAP: usize = 1 << 22;

const NORM_TOL: f64 = 1e-12;
const NORM_MAX_ITER: usize = 10_000;

/// `C_k` on `m` modes: `k` parity factors `diag(1,-1)`, the lowering matrix
/// `[[0,1],[0,0]]`, then identities. Factor 0 is the most significant bit of
/// the basis index.
pub fn jordan_wigner(k: usize, modes: usize) -> Result<SparseMatrix> {
    if modes == 0 || modes > MAX_MODES {
        return Err(LabError::InvalidModes(modes));
    }
    if k >= modes {
        return Err(LabError::InvalidArgument(format!(
            "generator {k} needs more than {modes} modes"
        )));
    }
    let dim = 1usize << modes;
    let bit = 1usize << (modes - 1 - k);
    // Bits of the parity factors sit above `bit`.
    let parity_mask = !(2 * bit - 1) & (dim - 1);
    let triplets = (0..dim).filter(|x| x & bit != 0).map(|x| {
        let sign = if (x & parity_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        (x & !bit, x, Complex64::new(sign, 0.0))
    });
    SparseMatrix::from_triplets(dim, dim, triplets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarAlgebra {
    modes: usize,
    generators: Vec<SparseMatrix>,
}

impl CarAlgebra {
    /// Wraps arbitrary square generators of a common size. Used to feed
    /// deliberately broken families to [`car_check`].
    pub fn from_generators(generators: Vec<SparseMatrix>) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.rows())
            .ok_or_else(|| dim_err("no generators"))?;
        if generators
            .iter()
            .any(|g| g.rows() != dim || g.cols() != dim)
        {
            return Err(dim_err("generators must be square of a common size"));
        }
        Ok(Self {
            modes: generators.len(),
            generators,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.generators[0].rows()
    }

    pub fn generator(&self, k: usize) -> &SparseMatrix {
        &self.generators[k]
    }

    pub fn generators(&self) -> &[SparseMatrix] {
        &self.generators
    }
}

pub fn build_car(modes: usize) -> Result<CarAlgebra> {
    if modes == 0 || modes > MAX_MODES {
        return Err(LabError::InvalidModes(modes));
    }
    let generators = (0..modes)
        .map(|k| jordan_wigner(k, modes))
        .collect::<Result<Vec<_>>>()?;
    Ok(CarAlgebra { modes, generators })
}

/// Largest deviations from the two anticommutation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarDeviation {
    /// `max ‖C_i C_j + C_j C_i‖`
    pub anti: f64,
    /// `max ‖C_i C_j* + C_j* C_i - δ_ij I‖`
    pub mixed: f64,
}

impl CarDeviation {
    pub fn max(&self) -> f64 {
        self.anti.max(self.mixed)
    }
}

/// Exhaustive check over all ordered pairs `(i, j)`.
pub fn car_check(alg: &CarAlgebra) -> Result<CarDeviation> {
    let gens = alg.generators();
    let adjoints: Vec<SparseMatrix> = gens.iter().map(SparseMatrix::adjoint).collect();
    let identity = SparseMatrix::identity(alg.dim());
    let norm = |m: &SparseMatrix| -> Result<f64> {
        if m.nnz() == 0 {
            return Ok(0.0);
        }
        Ok(op_norm_sparse(m, NORM_TOL, NORM_MAX_ITER, 0)?.value)
    };
    let mut dev = CarDeviation {
        anti: 0.0,
        mixed: 0.0,
    };
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if j >= i {
                let anti = gens[i].matmul(&gens[j])?.add(&gens[j].matmul(&gens[i])?)?;
                dev.anti = dev.anti.max(norm(&anti)?);
            }
            let mut mixed = gens[i]
                .matmul(&adjoints[j])?
                .add(&adjoints[j].matmul(&gens[i])?)?;
            if i == j {
                mixed = mixed.sub(&identity)?;
            }
            dev.mixed = dev.mixed.max(norm(&mixed)?);
        }
    }
    Ok(dev)
}

/// Largest `i + j` on an `n x n` grid.
fn max_index_sum(n: usize) -> usize {
    2 * n - 2
}

/// Generators addressed by `phi` on the achieved index sums, after checking
/// injectivity; returns the number of modes needed.
fn pattern_modes(phi: &impl Fn(usize) -> Option<usize>, n: usize) -> Result<usize> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut needed = 1;
    for t in 0..=max_index_sum(n) {
        if let Some(g) = phi(t) {
            if let Some(prev) = seen.insert(g, t) {
                return Err(LabError::InvalidPattern(format!(
                    "index sums {prev} and {t} both map to generator {g}"
                )));
            }
            needed = needed.max(g + 1);
        }
    }
    Ok(needed)
}

/// Sparse `[β(i,j) C_{φ(i+j)}]` on exactly `modes` modes.
pub fn car_pattern_sparse(
    beta: impl Fn(usize, usize) -> f64,
    phi: impl Fn(usize) -> Option<usize>,
    n: usize,
    modes: usize,
) -> Result<SparseMatrix> {
    if n == 0 {
        return Err(dim_err("pattern of size 0"));
    }
    let needed = pattern_modes(&phi, n)?;
    if modes < needed {
        return Err(LabError::InvalidPattern(format!(
            "pattern needs {needed} modes, only {modes} provided"
        )));
    }
    if modes > MAX_MODES {
        return Err(LabError::InvalidModes(modes));
    }
    let block = 1usize << modes;
    let dim =
        n.checked_mul(block)
            .filter(|&d| d <= MATVEC_CAP)
            .ok_or(LabError::SizeCapExceeded {
                size: n.saturating_mul(block),
                cap: MATVEC_CAP,
            })?;
    let alg = build_car(modes)?;
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let Some(g) = phi(i + j) else { continue };
            let b = beta(i, j);
            if b == 0.0 {
                continue;
            }
            triplets.extend(
                alg.generator(g)
                    .triplets()
                    .map(|(r, c, v)| (i * block + r, j * block + c, v * b)),
            );
        }
    }
    SparseMatrix::from_triplets(dim, dim, triplets)
}

/// Dense `[β(i,j) C_{φ(i+j)}]` on the fewest modes covering `φ`.
pub fn car_pattern_matrix(
    beta: impl Fn(usize, usize) -> f64,
    phi: impl Fn(usize) -> Option<usize>,
    n: usize,
) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(dim_err("pattern of size 0"));
    }
    let modes = pattern_modes(&phi, n)?;
    car_pattern_matrix_with_modes(beta, phi, n, modes)
}

pub fn car_pattern_matrix_with_modes(
    beta: impl Fn(usize, usize) -> f64,
    phi: impl Fn(usize) -> Option<usize>,
    n: usize,
    modes: usize,
) -> Result<ComplexMatrix> {
    let size = n.saturating_mul(1usize << modes.min(63));
    if size > DEFAULT_DENSE_CAP {
        return Err(LabError::SizeCapExceeded {
            size,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    Ok(car_pattern_sparse(beta, phi, n, modes)?.to_dense())
}

/// Coefficient map of the CAR-valued Hankel matrix `[w(i+j) α_{i+j} C_{i+j}]`.
pub fn hankel_coefficients<'a>(
    alpha: &'a WeightSequence,
    weight: impl Fn(usize) -> f64 + 'a,
) -> impl Fn(usize, usize) -> f64 + 'a {
    move |i, j| weight(i + j) * alpha.value(i + j)
}

/// Coefficient map of `[(j-i) α_{i+j-1} C_{i+j-1}]`.
pub fn commutator_coefficients(alpha: &WeightSequence) -> impl Fn(usize, usize) -> f64 + '_ {
    move |i, j| match (i + j).checked_sub(1) {
        Some(t) => (j as f64 - i as f64) * alpha.value(t),
        None => 0.0,
    }
}

pub fn hankel_generator(t: usize) -> Option<usize> {
    Some(t)
}

pub fn commutator_generator(t: usize) -> Option<usize> {
    t.checked_sub(1)
}

/// `[w(i+j) α_{i+j} C_{i+j}]` on `2N - 1` modes.
pub fn car_hankel(
    alpha: &WeightSequence,
    weight: impl Fn(usize) -> f64,
    n: usize,
) -> Result<ComplexMatrix> {
    alpha.validate()?;
    car_pattern_matrix(hankel_coefficients(alpha, weight), hankel_generator, n)
}

/// Row and column `ℓ²` suprema of a coefficient pattern and the interval
/// they give for the norm of the CAR-valued matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcBounds {
    pub row_sup: f64,
    pub col_sup: f64,
    /// `ℓ²` norm of column 0.
    pub first_col: f64,
    /// `max(row_sup, col_sup)`, attained on vacuum-type vectors.
    pub lower: f64,
    /// `row_sup + col_sup`.
    pub upper: f64,
}

impl RcBounds {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }
}

pub fn rc_bounds(beta: impl Fn(usize, usize) -> f64, n: usize) -> RcBounds {
    let mut rows = vec![0.0; n];
    let mut cols = vec![0.0; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, col) in cols.iter_mut().enumerate() {
            let b = beta(i, j);
            *row += b * b;
            *col += b * b;
        }
    }
    let sup = |v: &[f64]| v.iter().copied().fold(0.0, f64::max).sqrt();
    let row_sup = sup(&rows);
    let col_sup = sup(&cols);
    RcBounds {
        row_sup,
        col_sup,
        first_col: cols.first().map_or(0.0, |c| c.sqrt()),
        lower: row_sup.max(col_sup),
        upper: row_sup + col_sup,
    }
}
