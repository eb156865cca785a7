use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{ComplexMatrix, ZERO};
use super::sparse::SparseMatrix;
use crate::error::{LabError, Result};

/// Default bound on `min(rows, cols)` for the dense eigen-decomposition route.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Number of consecutive small relative changes required by the power method.
pub const POWER_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    Dense,
    Power,
}

impl NormMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMethod::Dense => "dense",
            NormMethod::Power => "power",
        }
    }
}

/// An operator-norm value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Largest singular value via the eigenvalues of the Gram matrix of the
/// smaller side. Zero rows and columns are trimmed first.
pub fn op_norm_dense(a: &ComplexMatrix) -> Result<NormEstimate> {
    op_norm_dense_capped(a, DEFAULT_DENSE_CAP)
}

pub fn op_norm_dense_capped(a: &ComplexMatrix, cap: usize) -> Result<NormEstimate> {
    let size = a.rows().min(a.cols());
    if size > cap {
        return Err(LabError::SizeCapExceeded { size, cap });
    }
    let scale = a.max_abs();
    let value = if scale == 0.0 || !scale.is_finite() {
        scale
    } else {
        // Rapidly decaying entries make the Gram matrix badly scaled enough
        // for the eigensolver to underflow into NaN. Normalizing and dropping
        // entries below ε² of the largest moves the norm by at most N·ε².
        let floor = f64::EPSILON * f64::EPSILON;
        let normalized = ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
            let z = a[(i, j)] / scale;
            if z.norm() < floor {
                ZERO
            } else {
                z
            }
        })
        .trim_zero_lines();
        if normalized.rows() == 0 || normalized.cols() == 0 {
            0.0
        } else {
            scale * largest_singular_value(&normalized)
        }
    };
    Ok(NormEstimate {
        value,
        method: NormMethod::Dense,
        iterations: 1,
        relative_residual: 0.0,
        converged: true,
    })
}

/// Shorthand for the dense norm value; panics only when the cap is exceeded.
pub fn norm2(a: &ComplexMatrix) -> f64 {
    op_norm_dense(a).expect("matrix within the dense cap").value
}

fn gram(a: &ComplexMatrix) -> ComplexMatrix {
    let adj = a.adjoint();
    if a.rows() >= a.cols() {
        adj.matmul(a).expect("conformable")
    } else {
        a.matmul(&adj).expect("conformable")
    }
}

fn largest_gram_eigenvalue(a: &ComplexMatrix) -> f64 {
    let g = gram(a);
    let n = g.rows();
    let eig = if g.is_real() {
        let m = DMatrix::<f64>::from_fn(n, n, |i, j| g[(i, j)].re);
        m.symmetric_eigenvalues()
    } else {
        let m = DMatrix::<Complex<f64>>::from_fn(n, n, |i, j| g[(i, j)]);
        m.symmetric_eigenvalues()
    };
    // `max` skips NaN silently, so check the whole spectrum.
    if eig.iter().all(|v| v.is_finite()) {
        eig.max()
    } else {
        f64::NAN
    }
}

/// `σ_max` from the Gram spectrum, with an SVD fallback should the
/// eigensolver still fail.
fn largest_singular_value(a: &ComplexMatrix) -> f64 {
    let lambda = largest_gram_eigenvalue(a);
    if lambda.is_finite() {
        return lambda.max(0.0).sqrt();
    }
    let m = DMatrix::<Complex<f64>>::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)]);
    m.singular_values().max()
}

/// Power iteration on `A*A` using only matrix-vector products.
///
/// `apply` maps a vector of length `dim` to the range of `A`; `apply_adjoint`
/// maps back. The start vector is complex Gaussian from a ChaCha8 stream
/// seeded with `seed`. Iteration stops once the Rayleigh estimate has changed
/// by less than `tol` (relative) over [`POWER_WINDOW`] consecutive steps; if
/// `max_iter` is reached first, [`LabError::NotConverged`] carries the last
/// estimate.
pub fn op_norm_power<F, G>(
    apply: F,
    apply_adjoint: G,
    dim: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<NormEstimate>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
    G: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(LabError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(LabError::InvalidArgument(
            "max_iter must be at least 1".into(),
        ));
    }
    if dim == 0 {
        return Ok(NormEstimate {
            value: 0.0,
            method: NormMethod::Power,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
        .collect();
    normalize(&mut v);

    let mut history: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        let w = apply(&v);
        let mu: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        history.push(mu);

        if mu == 0.0 {
            // A random start lands in the kernel only when A vanishes.
            return Ok(NormEstimate {
                value: 0.0,
                method: NormMethod::Power,
                iterations: iter,
                relative_residual: 0.0,
                converged: true,
            });
        }

        if history.len() > POWER_WINDOW {
            let tail = &history[history.len() - POWER_WINDOW - 1..];
            residual = tail
                .windows(2)
                .map(|p| (p[1] - p[0]).abs() / p[1])
                .fold(0.0, f64::max);
            if residual < tol {
                return Ok(NormEstimate {
                    value: mu.sqrt(),
                    method: NormMethod::Power,
                    iterations: iter,
                    relative_residual: residual,
                    converged: true,
                });
            }
        }

        let mut u = apply_adjoint(&w);
        if normalize(&mut u) == 0.0 {
            return Ok(NormEstimate {
                value: mu.sqrt(),
                method: NormMethod::Power,
                iterations: iter,
                relative_residual: 0.0,
                converged: true,
            });
        }
        v = u;
    }

    Err(LabError::NotConverged {
        estimate: NormEstimate {
            value: history.last().copied().unwrap_or(0.0).sqrt(),
            method: NormMethod::Power,
            iterations: max_iter,
            relative_residual: residual,
            converged: false,
        },
    })
}

/// Power iteration driven by a dense matrix.
pub fn op_norm_power_dense(
    a: &ComplexMatrix,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<NormEstimate> {
    op_norm_power(
        |x| a.matvec(x),
        |y| a.matvec_adjoint(y),
        a.cols(),
        tol,
        max_iter,
        seed,
    )
}

/// Norm of a sparse matrix: exact for monomial matrices, dense below the
/// cap, power iteration above it.
pub fn op_norm_sparse(
    a: &SparseMatrix,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if a.is_monomial() {
        return Ok(NormEstimate {
            value: a.max_abs(),
            method: NormMethod::Dense,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        });
    }
    if a.rows().min(a.cols()) <= DEFAULT_DENSE_CAP {
        return op_norm_dense(&a.to_dense());
    }
    op_norm_power(
        |x| a.matvec(x),
        |y| a.matvec_adjoint(y),
        a.cols(),
        tol,
        max_iter,
        seed,
    )
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    } else {
        v.iter_mut().for_each(|z| *z = ZERO);
    }
    n
}
