//! Scalar and block Hankel sections, the differentiation matrix, the
//! commutator family `ΓD`, `D*Γ`, `ΓD - D*Γ`, and residuals of the
//! Sylvester equation `S*Y - YS = Γ`.
//!
//! Sections are indexed from 0. The commutator family is assembled from its
//! entry formulas; multiplying truncated factors would corrupt the last row
//! and column.

use crate::error::{dim_err, LabError, Result};
use crate::linalg::{norm2, ComplexMatrix};
use crate::sequences::WeightSequence;

/// Coefficients `Γ_k` of a Hankel matrix `[Γ_{i+j}]`.
#[derive(Debug, Clone, PartialEq)]
pub enum HankelCoefficients {
    Scalar(WeightSequence),
    /// `d x d` blocks; indices past the end are zero.
    Blocks(Vec<ComplexMatrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HankelSpec {
    pub coefficients: HankelCoefficients,
    /// Number of block rows (and columns).
    pub n: usize,
    pub block_dim: usize,
}

impl HankelSpec {
    pub fn scalar(seq: WeightSequence, n: usize) -> Self {
        Self {
            coefficients: HankelCoefficients::Scalar(seq),
            n,
            block_dim: 1,
        }
    }

    pub fn blocks(blocks: Vec<ComplexMatrix>, n: usize) -> Result<Self> {
        let d = blocks.first().map_or(1, |b| b.rows());
        if let Some(bad) = blocks.iter().find(|b| b.shape() != (d, d)) {
            return Err(dim_err(format!(
                "block coefficients must all be {d}x{d}, found {:?}",
                bad.shape()
            )));
        }
        if d == 0 {
            return Err(dim_err("empty block coefficients"));
        }
        Ok(Self {
            coefficients: HankelCoefficients::Blocks(blocks),
            n,
            block_dim: d,
        })
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(dim_err("hankel section of size 0"));
        }
        if let HankelCoefficients::Scalar(seq) = &self.coefficients {
            seq.validate()?;
        }
        Ok(())
    }

    /// `Γ_k` scaled by `w`; `k = None` stands for the vanishing `Γ_{-1}`.
    fn write_block(&self, out: &mut ComplexMatrix, bi: usize, bj: usize, k: Option<usize>, w: f64) {
        let Some(k) = k else { return };
        if w == 0.0 {
            return;
        }
        let d = self.block_dim;
        match &self.coefficients {
            HankelCoefficients::Scalar(seq) => {
                out[(bi, bj)] = (w * seq.value(k)).into();
            }
            HankelCoefficients::Blocks(blocks) => {
                if let Some(b) = blocks.get(k) {
                    out.set_block(bi * d, bj * d, &b.scale_real(w));
                }
            }
        }
    }

    fn dim(&self) -> usize {
        self.n * self.block_dim
    }
}

/// `[Γ_{i+j}]`.
pub fn make_hankel(spec: &HankelSpec) -> Result<ComplexMatrix> {
    make_weighted_hankel(spec, |_| 1.0)
}

/// `[w(i+j) Γ_{i+j}]`; `w(k) = k + 1` gives the Hankel matrix of the derivative.
pub fn make_weighted_hankel(
    spec: &HankelSpec,
    weight: impl Fn(usize) -> f64,
) -> Result<ComplexMatrix> {
    spec.check()?;
    let mut out = ComplexMatrix::zeros(spec.dim(), spec.dim());
    for i in 0..spec.n {
        for j in 0..spec.n {
            spec.write_block(&mut out, i, j, Some(i + j), weight(i + j));
        }
    }
    debug_assert!(is_hankel(&out, spec.block_dim));
    Ok(out)
}

/// True when every `d x d` block depends only on the sum of its block indices.
pub fn is_hankel(m: &ComplexMatrix, d: usize) -> bool {
    if d == 0 || !m.is_square() || !m.rows().is_multiple_of(d) {
        return false;
    }
    let n = m.rows() / d;
    for i in 0..n {
        for j in 0..n {
            let (si, sj) = if i + j < n {
                (0, i + j)
            } else {
                (i + j - (n - 1), n - 1)
            };
            for r in 0..d {
                for c in 0..d {
                    if m[(i * d + r, j * d + c)] != m[(si * d + r, sj * d + c)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The differentiation matrix with `(i, i+1)` entry `i + 1`.
pub fn make_derivation(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(dim_err("derivation of size 0"));
    }
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        if j == i + 1 {
            (i + 1) as f64
        } else {
            0.0
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationProduct {
    /// `ΓD - D*Γ = [(j-i) Γ_{i+j-1}]`.
    Commutator,
    /// `ΓD = [j Γ_{i+j-1}]`.
    HankelTimesDerivation,
    /// `D*Γ = [i Γ_{i+j-1}]`.
    AdjointDerivationTimesHankel,
}

impl DerivationProduct {
    fn weight(self, i: usize, j: usize) -> f64 {
        match self {
            DerivationProduct::Commutator => j as f64 - i as f64,
            DerivationProduct::HankelTimesDerivation => j as f64,
            DerivationProduct::AdjointDerivationTimesHankel => i as f64,
        }
    }
}

pub fn derivation_product(spec: &HankelSpec, kind: DerivationProduct) -> Result<ComplexMatrix> {
    spec.check()?;
    let mut out = ComplexMatrix::zeros(spec.dim(), spec.dim());
    for i in 0..spec.n {
        for j in 0..spec.n {
            spec.write_block(&mut out, i, j, (i + j).checked_sub(1), kind.weight(i, j));
        }
    }
    Ok(out)
}

/// Solutions of `S*Y - YS = Γ` in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormalSolution {
    /// `-ΓD`
    NegHankelTimesDerivation,
    /// `D*Γ`
    AdjointDerivationTimesHankel,
    /// `(D*Γ - ΓD) / 2`
    Average,
}

impl FormalSolution {
    pub const ALL: [FormalSolution; 3] = [
        FormalSolution::NegHankelTimesDerivation,
        FormalSolution::AdjointDerivationTimesHankel,
        FormalSolution::Average,
    ];
}

pub fn formal_solution(spec: &HankelSpec, which: FormalSolution) -> Result<ComplexMatrix> {
    let gd = || derivation_product(spec, DerivationProduct::HankelTimesDerivation);
    let dg = || derivation_product(spec, DerivationProduct::AdjointDerivationTimesHankel);
    match which {
        FormalSolution::NegHankelTimesDerivation => Ok(gd()?.scale_real(-1.0)),
        FormalSolution::AdjointDerivationTimesHankel => dg(),
        FormalSolution::Average => Ok(dg()?.sub(&gd()?)?.scale_real(0.5)),
    }
}

/// `S*Y - YS - Γ` with `S` the block shift, computed entrywise.
fn sylvester_defect(y: &ComplexMatrix, gamma: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    if !y.is_square() || y.shape() != gamma.shape() {
        return Err(dim_err(format!(
            "sylvester residual needs equal square shapes, got {:?} and {:?}",
            y.shape(),
            gamma.shape()
        )));
    }
    if d == 0 || !y.rows().is_multiple_of(d) {
        return Err(dim_err(format!(
            "dimension {} is not a multiple of block size {d}",
            y.rows()
        )));
    }
    let dim = y.rows();
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        let below = if r + d < dim {
            y[(r + d, c)]
        } else {
            0.0.into()
        };
        let right = if c + d < dim {
            y[(r, c + d)]
        } else {
            0.0.into()
        };
        below - right - gamma[(r, c)]
    }))
}

/// Norm of `S*Y - YS - Γ` on the leading `window x window` corner.
pub fn sylvester_residual(y: &ComplexMatrix, gamma: &ComplexMatrix, window: usize) -> Result<f64> {
    sylvester_residual_block(y, gamma, 1, window)
}

/// Block version; `window` counts blocks and must stay below the block count.
pub fn sylvester_residual_block(
    y: &ComplexMatrix,
    gamma: &ComplexMatrix,
    d: usize,
    window: usize,
) -> Result<f64> {
    let defect = sylvester_defect(y, gamma, d)?;
    let blocks = y.rows() / d;
    if window == 0 || window + 1 > blocks {
        return Err(LabError::InvalidWindow {
            window,
            dim: blocks,
        });
    }
    Ok(norm2(&defect.leading(window * d, window * d)))
}

/// Norm of `S*Y - YS - Γ` on the full section, edges included.
pub fn sylvester_residual_full(y: &ComplexMatrix, gamma: &ComplexMatrix, d: usize) -> Result<f64> {
    Ok(norm2(&sylvester_defect(y, gamma, d)?))
}

/// `(Y - Yᵗ) / 2` with the plain transpose.
pub fn antisym_part(y: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !y.is_square() {
        return Err(dim_err(format!("antisymmetric part of {:?}", y.shape())));
    }
    Ok(y.sub(&y.transpose())?.scale_real(0.5))
}

/// Norms of one matrix family over increasing truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStudy {
    pub sizes: Vec<usize>,
    pub norms: Vec<f64>,
}

impl GrowthStudy {
    /// `norm[k+1] / norm[k] - 1`.
    pub fn relative_increments(&self) -> Vec<f64> {
        self.norms
            .windows(2)
            .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] - 1.0 })
            .collect()
    }
}

/// `‖ΓD - D*Γ‖` for a scalar sequence over the given truncations.
pub fn commutator_growth(seq: &WeightSequence, sizes: &[usize]) -> Result<GrowthStudy> {
    let norms = sizes
        .iter()
        .map(|&n| {
            let m = derivation_product(
                &HankelSpec::scalar(seq.clone(), n),
                DerivationProduct::Commutator,
            )?;
            Ok(norm2(&m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthStudy {
        sizes: sizes.to_vec(),
        norms,
    })
}
