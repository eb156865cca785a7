//! Upper-triangular block operators `R = [[T2*, X], [0, T1]]`, their powers,
//! the sliding sums along antidiagonals of a block grid, and the similarity
//! `R ~ T2* ⊕ T1` built from the partial sums `Z_n = Σ_{j<n} T2^{j+1} X T1^j`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{dim_err, LabError, Result};
use crate::linalg::{make_block_shift, norm2, ComplexMatrix, ZERO};

/// Consecutive small increments required by [`ZPartial::stabilized_at`].
pub const STABILIZATION_STREAK: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct FoguelBlock {
    t2: ComplexMatrix,
    t1: ComplexMatrix,
    x: ComplexMatrix,
    r: ComplexMatrix,
}

impl FoguelBlock {
    pub fn t2(&self) -> &ComplexMatrix {
        &self.t2
    }

    pub fn t1(&self) -> &ComplexMatrix {
        &self.t1
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// Top-right block of an operator of the same partition.
    pub fn top_right(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        m.submatrix(0, self.t2.rows(), self.t2.rows(), self.t1.rows())
    }
}

/// `R = [[T2*, X], [0, T1]]`.
pub fn assemble_r(
    t2: &ComplexMatrix,
    t1: &ComplexMatrix,
    x: &ComplexMatrix,
) -> Result<FoguelBlock> {
    check_triple(t2, t1, x)?;
    let r = ComplexMatrix::block2x2(
        &t2.adjoint(),
        x,
        &ComplexMatrix::zeros(t1.rows(), t2.rows()),
        t1,
    )?;
    Ok(FoguelBlock {
        t2: t2.clone(),
        t1: t1.clone(),
        x: x.clone(),
        r,
    })
}

fn check_triple(t2: &ComplexMatrix, t1: &ComplexMatrix, x: &ComplexMatrix) -> Result<()> {
    if !t2.is_square() || !t1.is_square() {
        return Err(dim_err(format!(
            "diagonal blocks must be square, got {:?} and {:?}",
            t2.shape(),
            t1.shape()
        )));
    }
    if x.shape() != (t2.rows(), t1.rows()) {
        return Err(dim_err(format!(
            "X must be {}x{}, got {:?}",
            t2.rows(),
            t1.rows(),
            x.shape()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerOffdiag {
    /// `Σ_{j<n} T2*^{n-j-1} X T1^j`
    pub block: ComplexMatrix,
    /// Largest entrywise gap to the top-right block of `R^n`.
    pub defect: f64,
}

pub fn power_offdiag(block: &FoguelBlock, n: usize) -> Result<PowerOffdiag> {
    if n == 0 {
        return Err(LabError::InvalidArgument("power must be at least 1".into()));
    }
    let a = block.t2.adjoint();
    // P_{k+1} = T2* P_k + X T1^k
    let mut sum = block.x.clone();
    let mut t1_pow = ComplexMatrix::identity(block.t1.rows());
    for _ in 1..n {
        t1_pow = t1_pow.matmul(&block.t1)?;
        sum = a.matmul(&sum)?.add(&block.x.matmul(&t1_pow)?)?;
    }
    let defect = sum.max_abs_diff(&block.top_right(&block.r.pow(n)?)?)?;
    Ok(PowerOffdiag { block: sum, defect })
}

fn grid_blocks(x: &ComplexMatrix, d: usize) -> Result<usize> {
    if d == 0 || !x.is_square() || !x.rows().is_multiple_of(d) {
        return Err(dim_err(format!(
            "{:?} is not a square grid of {d}x{d} blocks",
            x.shape()
        )));
    }
    Ok(x.rows() / d)
}

/// Sliding sums: block `(i,j)` is `Σ_{k <= min(i, n-1)} X_{i-k, j+k}`, with
/// blocks outside the grid read as zero.
pub fn a_n_matrix(x: &ComplexMatrix, d: usize, n: usize) -> Result<ComplexMatrix> {
    let blocks = grid_blocks(x, d)?;
    if n == 0 {
        return Err(LabError::InvalidArgument("n must be at least 1".into()));
    }
    let mut out = ComplexMatrix::zeros(x.rows(), x.cols());
    for i in 0..blocks {
        for j in 0..blocks {
            for k in 0..=i.min(n - 1) {
                if j + k >= blocks {
                    break;
                }
                for r in 0..d {
                    for c in 0..d {
                        out[(i * d + r, j * d + c)] += x[((i - k) * d + r, (j + k) * d + c)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_{k<n} S^{k+1} X S^k` with `S` the block shift.
pub fn a_n_sum_form(x: &ComplexMatrix, d: usize, n: usize) -> Result<ComplexMatrix> {
    let blocks = grid_blocks(x, d)?;
    if n == 0 {
        return Err(LabError::InvalidArgument("n must be at least 1".into()));
    }
    let s = make_block_shift(blocks, d)?;
    let mut left = s.clone();
    let mut right = ComplexMatrix::identity(x.rows());
    let mut out = ComplexMatrix::zeros(x.rows(), x.cols());
    for _ in 0..n {
        out.add_assign(&left.matmul(x)?.matmul(&right)?)?;
        left = s.matmul(&left)?;
        right = right.matmul(&s)?;
    }
    Ok(out)
}

/// Largest gap in the relation between the two sliding-sum forms: the sum
/// form has a zero first block row and its block `(i,j)` is block `(i-1,j)`
/// of the entry formula.
pub fn sliding_sum_shift_defect(x: &ComplexMatrix, d: usize, n: usize) -> Result<f64> {
    let formula = a_n_matrix(x, d, n)?;
    let sum = a_n_sum_form(x, d, n)?;
    let dim = x.rows();
    let mut worst = sum.submatrix(0, 0, d, dim)?.max_abs();
    if dim > d {
        let lower = sum.submatrix(d, 0, dim - d, dim)?;
        let upper = formula.submatrix(0, 0, dim - d, dim)?;
        worst = worst.max(lower.max_abs_diff(&upper)?);
    }
    Ok(worst)
}

/// Partial sums `Z_n` with their increments and running supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPartial {
    pub z: ComplexMatrix,
    /// `‖Z_k - Z_{k-1}‖ = ‖T2^k X T1^{k-1}‖` for `k = 1..=n`.
    pub increments: Vec<f64>,
    /// `max_{m <= k} ‖Z_m‖` for `k = 1..=n`.
    pub running_sup: Vec<f64>,
}

impl ZPartial {
    pub fn sup(&self) -> f64 {
        self.running_sup.last().copied().unwrap_or(0.0)
    }

    /// First `k` from which [`STABILIZATION_STREAK`] consecutive increments
    /// stay below `tol`.
    pub fn stabilized_at(&self, tol: f64) -> Option<usize> {
        self.increments
            .windows(STABILIZATION_STREAK)
            .position(|w| w.iter().all(|&v| v < tol))
            .map(|p| p + 1)
    }
}

/// `Z_n = Σ_{j<n} T2^{j+1} X T1^j`, each term obtained from the previous one
/// as `T2 · term · T1`.
pub fn z_partial(
    t2: &ComplexMatrix,
    t1: &ComplexMatrix,
    x: &ComplexMatrix,
    n: usize,
) -> Result<ZPartial> {
    check_triple(t2, t1, x)?;
    if n == 0 {
        return Err(LabError::InvalidArgument("n must be at least 1".into()));
    }
    let mut term = t2.matmul(x)?;
    let mut z = ComplexMatrix::zeros(x.rows(), x.cols());
    let mut increments = Vec::with_capacity(n);
    let mut running_sup = Vec::with_capacity(n);
    let mut sup: f64 = 0.0;
    for k in 0..n {
        if k > 0 {
            term = t2.matmul(&term)?.matmul(t1)?;
        }
        z.add_assign(&term)?;
        increments.push(norm2(&term));
        sup = sup.max(norm2(&z));
        running_sup.push(sup);
    }
    Ok(ZPartial {
        z,
        increments,
        running_sup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityReport {
    /// `‖T2* Z - Z T1 - X‖` on the leading `window x window` corner.
    pub residual_interior: f64,
    pub residual_full: f64,
    /// `‖L^{-1} (T2* ⊕ T1) L - R‖` with `L = [[I, Z], [0, I]]`.
    pub conjugation_residual: f64,
    /// `‖L‖ ‖L^{-1}‖`.
    pub cond_l: f64,
}

pub fn similarity_check(
    block: &FoguelBlock,
    z: &ComplexMatrix,
    window: usize,
) -> Result<SimilarityReport> {
    let (p, q) = (block.t2.rows(), block.t1.rows());
    if z.shape() != (p, q) {
        return Err(dim_err(format!("Z must be {p}x{q}, got {:?}", z.shape())));
    }
    if window == 0 || window > p.min(q) {
        return Err(LabError::InvalidWindow {
            window,
            dim: p.min(q),
        });
    }
    let t2_adj = block.t2.adjoint();
    let defect = t2_adj
        .matmul(z)?
        .sub(&z.matmul(&block.t1)?)?
        .sub(&block.x)?;

    let l = ComplexMatrix::block2x2(
        &ComplexMatrix::identity(p),
        z,
        &ComplexMatrix::zeros(q, p),
        &ComplexMatrix::identity(q),
    )?;
    let l_inv = ComplexMatrix::block2x2(
        &ComplexMatrix::identity(p),
        &z.scale_real(-1.0),
        &ComplexMatrix::zeros(q, p),
        &ComplexMatrix::identity(q),
    )?;
    let diag = ComplexMatrix::block2x2(
        &t2_adj,
        &ComplexMatrix::zeros(p, q),
        &ComplexMatrix::zeros(q, p),
        &block.t1,
    )?;
    let conj = l_inv.matmul(&diag)?.matmul(&l)?.sub(&block.r)?;

    Ok(SimilarityReport {
        residual_interior: norm2(&defect.leading(window, window)),
        residual_full: norm2(&defect),
        conjugation_residual: norm2(&conj),
        cond_l: norm2(&l) * norm2(&l_inv),
    })
}

/// `p(z) = Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    /// Degree uniform in `0..=max_degree`, complex Gaussian coefficients.
    pub fn random(max_degree: usize, rng: &mut impl Rng) -> Self {
        let degree = rng.random_range(0..=max_degree);
        let coefficients = (0..=degree)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `p(C)` by Horner's rule.
    pub fn eval_matrix(&self, c: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !c.is_square() {
            return Err(dim_err(format!("polynomial of a {:?} matrix", c.shape())));
        }
        let id = ComplexMatrix::identity(c.rows());
        let mut acc = ComplexMatrix::zeros(c.rows(), c.cols());
        for &coef in self.coefficients.iter().rev() {
            acc = acc.matmul(c)?.add(&id.scale(coef))?;
        }
        Ok(acc)
    }

    /// Largest `|p|` over `grid` equally spaced points of the unit circle.
    pub fn circle_grid_sup(&self, grid: usize) -> (f64, f64) {
        (0..grid)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / grid as f64;
                (self.eval(Complex64::from_polar(1.0, theta)).norm(), theta)
            })
            .fold(
                (0.0, 0.0),
                |best, cur| if cur.0 > best.0 { cur } else { best },
            )
    }

    /// Grid maximum followed by golden-section refinement in the
    /// neighbouring cells. Never below the grid value.
    pub fn circle_sup(&self, grid: usize) -> f64 {
        let (grid_max, theta) = self.circle_grid_sup(grid);
        let h = std::f64::consts::TAU / grid as f64;
        let f = |t: f64| self.eval(Complex64::from_polar(1.0, t)).norm();
        let (mut a, mut b) = (theta - h, theta + h);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        for _ in 0..80 {
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        grid_max.max(f(0.5 * (a + b)))
    }
}

pub fn random_polynomials(count: usize, max_degree: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Polynomial::random(max_degree, &mut rng))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialCheck {
    pub degree: usize,
    /// `‖p(C)‖`
    pub operator_norm: f64,
    pub grid_sup: f64,
    /// Refined supremum of `|p|` on the circle.
    pub circle_sup: f64,
}

impl PolynomialCheck {
    pub fn ratio(&self) -> f64 {
        if self.circle_sup == 0.0 {
            if self.operator_norm == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.operator_norm / self.circle_sup
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VonNeumannReport {
    pub norm_c: f64,
    /// `‖C‖ <= 1 + 1e-12`; otherwise only `k_estimate` is meaningful.
    pub contraction: bool,
    pub checks: Vec<PolynomialCheck>,
    /// Checks with `‖p(C)‖ > sup|p| + 1e-9`.
    pub violations: usize,
    /// `max ‖p(C)‖ / sup|p|`.
    pub k_estimate: f64,
}

pub const VON_NEUMANN_TOL: f64 = 1e-9;
const CONTRACTION_TOL: f64 = 1e-12;

pub fn von_neumann_probe(
    c: &ComplexMatrix,
    polys: &[Polynomial],
    grid: usize,
) -> Result<VonNeumannReport> {
    let max_degree = polys.iter().map(Polynomial::degree).max().unwrap_or(0);
    if grid < 8 * max_degree.max(1) {
        return Err(LabError::InvalidArgument(format!(
            "grid {grid} is below 8 x degree {max_degree}"
        )));
    }
    let norm_c = norm2(c);
    let contraction = norm_c <= 1.0 + CONTRACTION_TOL;
    let checks = polys
        .iter()
        .map(|p| {
            Ok(PolynomialCheck {
                degree: p.degree(),
                operator_norm: norm2(&p.eval_matrix(c)?),
                grid_sup: p.circle_grid_sup(grid).0,
                circle_sup: p.circle_sup(grid),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = if contraction {
        checks
            .iter()
            .filter(|k| k.operator_norm > k.circle_sup + VON_NEUMANN_TOL)
            .count()
    } else {
        0
    };
    let k_estimate = checks
        .iter()
        .map(PolynomialCheck::ratio)
        .fold(0.0, f64::max);
    Ok(VonNeumannReport {
        norm_c,
        contraction,
        checks,
        violations,
        k_estimate,
    })
}

/// `‖T^j‖` for `j = 1..=count`.
pub fn power_norm_sequence(t: &ComplexMatrix, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(LabError::InvalidArgument("need at least one power".into()));
    }
    if !t.is_square() {
        return Err(dim_err(format!("powers of a {:?} matrix", t.shape())));
    }
    let mut p = t.clone();
    let mut out = Vec::with_capacity(count);
    for j in 1..=count {
        if j > 1 {
            p = p.matmul(t)?;
        }
        out.push(norm2(&p));
    }
    Ok(out)
}
