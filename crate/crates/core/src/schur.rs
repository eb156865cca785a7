//! Schur (entrywise) products, the multiplier matrices built from
//! difference quotients, Bennett's second-difference criterion and the
//! iterated-limit obstruction.
//!
//! Every multiplier in this module factors as `m(i,j) = p(j-i) · h(i+j)`,
//! with `p(d) = d` for the antisymmetric kernels and `p ≡ 1` otherwise.
//! The mixed second difference of such a kernel depends on `(i,j)` only
//! through `p(j-i)` and the antidiagonal `n = i+j`, so the criterion sum is
//! accumulated one antidiagonal at a time.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim_err, LabError, Result};
use crate::linalg::{norm2, ComplexMatrix, ONE};
use crate::sequences::{diff1, diff2, CompensatedSum, DecadeTrace, WeightSequence};

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierKind {
    /// `(j-i)/(i+j+1)`; not a Schur multiplier.
    DifferenceQuotient,
    /// `(j-i) / ((i+j+1) (ln(i+j+1))^{1+ε})`.
    LogDamped(f64),
    /// `(j-i) / ((i+j+1) ln(i+j+1) (ln ln(i+j+1))^{1+ε})`.
    LogLogDamped(f64),
    /// `(j-i) a_{i+j} / (i+j+1)` for a coefficient sequence `a`.
    Bennett(WeightSequence),
    Constant(f64),
    /// `(-1)^{i+j}`.
    Alternating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    /// Index of the first row and column; sections cover `offset..offset+N`.
    pub offset: usize,
}

impl MultiplierSpec {
    pub fn new(kind: MultiplierKind) -> Self {
        Self { kind, offset: 1 }
    }

    pub fn with_offset(kind: MultiplierKind, offset: usize) -> Self {
        Self { kind, offset }
    }

    /// Whether the kernel carries the `(j - i)` factor.
    pub fn is_antisymmetric(&self) -> bool {
        !matches!(
            self.kind,
            MultiplierKind::Constant(_) | MultiplierKind::Alternating
        )
    }

    /// The antidiagonal profile `h(s)`.
    pub fn profile(&self, s: usize) -> f64 {
        let x = s as f64 + 1.0;
        match &self.kind {
            MultiplierKind::DifferenceQuotient => 1.0 / x,
            MultiplierKind::LogDamped(e) => 1.0 / (x * x.ln().powf(1.0 + e)),
            MultiplierKind::LogLogDamped(e) => 1.0 / (x * x.ln() * x.ln().ln().powf(1.0 + e)),
            MultiplierKind::Bennett(a) => a.value(s) / x,
            MultiplierKind::Constant(c) => *c,
            MultiplierKind::Alternating => {
                if s.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Entry `m(i, j)` at absolute indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let h = self.profile(i + j);
        if self.is_antisymmetric() {
            (j as f64 - i as f64) * h
        } else {
            h
        }
    }

    /// Sequence `a_n` with `h(n) = a_n / (n+1)`, for antisymmetric kernels.
    fn implied_coefficient(&self, n: usize) -> f64 {
        match &self.kind {
            MultiplierKind::Bennett(a) => a.value(n),
            _ => (n as f64 + 1.0) * self.profile(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            MultiplierKind::LogDamped(_) if self.offset == 0 => Err(LabError::InvalidOffset {
                offset: 0,
                reason: "ln(i+j+1) vanishes at i = j = 0",
            }),
            MultiplierKind::LogLogDamped(_) if self.offset == 0 => Err(LabError::InvalidOffset {
                offset: 0,
                reason: "ln ln(i+j+1) must be positive, which needs i+j >= 2",
            }),
            MultiplierKind::Bennett(a) => a.validate(),
            _ => Ok(()),
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match &self.kind {
            MultiplierKind::LogDamped(e) | MultiplierKind::LogLogDamped(e) => Some(*e),
            MultiplierKind::Bennett(a) => a.epsilon(),
            _ => None,
        }
    }
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierKind::DifferenceQuotient => write!(f, "difference-quotient"),
            MultiplierKind::LogDamped(e) => write!(f, "log-damped:{e}"),
            MultiplierKind::LogLogDamped(e) => write!(f, "loglog-damped:{e}"),
            MultiplierKind::Bennett(a) => write!(f, "bennett:{a}"),
            MultiplierKind::Constant(c) => write!(f, "constant:{c}"),
            MultiplierKind::Alternating => write!(f, "alternating"),
        }
    }
}

/// Parses the [`Display`](fmt::Display) form; `E:ε` and `F:ε` are accepted
/// for the damped kernels.
impl FromStr for MultiplierKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.trim().split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| {
                LabError::InvalidArgument(format!("{what} needs a parameter, as in {what}:1"))
            })?;
            a.parse::<f64>()
                .map_err(|_| LabError::InvalidArgument(format!("bad {what} parameter {a:?}")))
        };
        let kind = match name {
            "difference-quotient" => MultiplierKind::DifferenceQuotient,
            "log-damped" | "E" => MultiplierKind::LogDamped(num(name)?),
            "loglog-damped" | "F" => MultiplierKind::LogLogDamped(num(name)?),
            "bennett" => {
                let a = arg.ok_or_else(|| {
                    LabError::InvalidArgument(
                        "bennett needs a sequence, as in bennett:harmonic".into(),
                    )
                })?;
                MultiplierKind::Bennett(a.parse()?)
            }
            "constant" => MultiplierKind::Constant(num(name)?),
            "alternating" => MultiplierKind::Alternating,
            other => {
                return Err(LabError::InvalidArgument(format!(
                    "unknown multiplier kind {other:?}"
                )))
            }
        };
        if let MultiplierKind::LogDamped(e) | MultiplierKind::LogLogDamped(e) = kind {
            if !(e.is_finite() && e >= 0.0) {
                return Err(LabError::InvalidArgument(format!(
                    "epsilon must be finite and >= 0, got {e}"
                )));
            }
        }
        Ok(kind)
    }
}

impl fmt::Display for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offset == 1 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}@{}", self.kind, self.offset)
        }
    }
}

/// Entrywise product `A ∗ B`.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.shape() != b.shape() {
        return Err(dim_err(format!(
            "schur product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.zip_with(b, |x, y| x * y))
}

/// The `N x N` section with indices `offset..offset+N`.
pub fn make_multiplier(spec: &MultiplierSpec, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(dim_err("multiplier section of size 0"));
    }
    spec.validate()?;
    let o = spec.offset;
    Ok(ComplexMatrix::from_real_fn(n, n, |i, j| {
        spec.entry(i + o, j + o)
    }))
}

/// `Σ |j - i|` over `i + j = n` with `i, j >= offset`.
fn antidiagonal_abs_gap(n: usize, offset: usize) -> f64 {
    if n < 2 * offset {
        return 0.0;
    }
    let l = (n - 2 * offset) as f64;
    if (n - 2 * offset).is_multiple_of(2) {
        l * (l + 2.0) / 2.0
    } else {
        (l + 1.0) * (l + 1.0) / 2.0
    }
}

fn antidiagonal_count(n: usize, offset: usize) -> f64 {
    if n < 2 * offset {
        0.0
    } else {
        (n - 2 * offset + 1) as f64
    }
}

/// Summary of the second-difference criterion up to antidiagonal `terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub terms: usize,
    /// `Σ_{i+j<=terms} |m_{i,j} - m_{i,j+1} - m_{i+1,j} + m_{i+1,j+1}|`.
    pub partial_sum: f64,
    pub trace: DecadeTrace,
    pub verdict: bool,
    /// Largest `|m(L, j)|` over a few small `j`, for `L = 10^4, 10^6, 10^8`.
    pub row_limit_samples: Vec<f64>,
    pub col_limit_samples: Vec<f64>,
    /// Both sample families shrink (to at most half) or vanish identically.
    pub limits_vanish: bool,
}

impl CriterionReport {
    pub fn decade_increments(&self) -> Vec<f64> {
        self.trace.increments()
    }
}

/// Per-antidiagonal contribution to the criterion sum.
pub fn antidiagonal_term(spec: &MultiplierSpec, n: usize) -> f64 {
    let o = spec.offset;
    let second = spec.profile(n) - 2.0 * spec.profile(n + 1) + spec.profile(n + 2);
    let weight = if spec.is_antisymmetric() {
        antidiagonal_abs_gap(n, o)
    } else {
        antidiagonal_count(n, o)
    };
    if weight == 0.0 {
        0.0
    } else {
        weight * second.abs()
    }
}

const LIMIT_SCALES: [usize; 3] = [10_000, 1_000_000, 100_000_000];

fn limit_samples(spec: &MultiplierSpec, rows: bool) -> Vec<f64> {
    let o = spec.offset;
    LIMIT_SCALES
        .iter()
        .map(|&l| {
            [o, o + 1, o + 10]
                .iter()
                .map(|&k| {
                    if rows {
                        spec.entry(l, k)
                    } else {
                        spec.entry(k, l)
                    }
                    .abs()
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

fn shrinks(samples: &[f64]) -> bool {
    samples.iter().all(|&v| v == 0.0) || samples[samples.len() - 1] <= 0.5 * samples[0]
}

/// Partial sums of the absolute mixed second differences over the triangle
/// `i + j <= terms`, grouped by antidiagonal, plus sampled row and column
/// limits.
pub fn bennett_criterion(spec: &MultiplierSpec, terms: usize) -> Result<CriterionReport> {
    if terms < 4 {
        return Err(LabError::InvalidArgument(format!(
            "need terms >= 4, got {terms}"
        )));
    }
    spec.validate()?;
    let mut sum = CompensatedSum::new();
    let mut trace = DecadeTrace::new();
    for n in 0..=terms {
        sum.add(antidiagonal_term(spec, n));
        trace.observe(n, sum.value());
    }
    let row_limit_samples = limit_samples(spec, true);
    let col_limit_samples = limit_samples(spec, false);
    let limits_vanish = shrinks(&row_limit_samples) && shrinks(&col_limit_samples);
    let verdict = trace.verdict();
    Ok(CriterionReport {
        terms,
        partial_sum: sum.value(),
        trace,
        verdict,
        row_limit_samples,
        col_limit_samples,
        limits_vanish,
    })
}

/// The criterion sum against the bound
/// `Σ n|c_n| + Σ|b_n| + Σ|b_{n+1}| + 2 Σ |a_{n+2}|/(n+2)`
/// built from the coefficient sequence `a` of an antisymmetric kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComparison {
    pub terms: usize,
    pub criterion_sum: f64,
    pub chain_bound: f64,
    /// Cumulative criterion sum never exceeded the cumulative bound.
    pub holds_at_every_n: bool,
    /// Smallest `bound(n) - criterion(n)` over cumulative partial sums.
    pub min_slack: f64,
}

pub fn proof_chain_comparison(spec: &MultiplierSpec, terms: usize) -> Result<ChainComparison> {
    if !spec.is_antisymmetric() {
        return Err(LabError::InvalidArgument(format!(
            "{spec} has no (j - i) factor; the coefficient bound does not apply"
        )));
    }
    if terms < 4 {
        return Err(LabError::InvalidArgument(format!(
            "need terms >= 4, got {terms}"
        )));
    }
    spec.validate()?;
    let n0 = 2 * spec.offset;
    // a_{n0} ..= a_{terms+3}
    let a: Vec<f64> = (n0..=terms + 3)
        .map(|n| spec.implied_coefficient(n))
        .collect();
    let b = diff1(&a)?;
    let c = diff2(&a)?;

    let mut lhs = CompensatedSum::new();
    let mut rhs = CompensatedSum::new();
    let mut min_slack = f64::INFINITY;
    for n in n0..=terms {
        let k = n - n0;
        let nf = n as f64;
        lhs.add(antidiagonal_term(spec, n));
        rhs.add(nf * c[k].abs() + b[k].abs() + b[k + 1].abs() + 2.0 * a[k + 2].abs() / (nf + 2.0));
        min_slack = min_slack.min(rhs.value() - lhs.value());
    }
    Ok(ChainComparison {
        terms,
        criterion_sum: lhs.value(),
        chain_bound: rhs.value(),
        holds_at_every_n: min_slack >= 0.0,
        min_slack,
    })
}

/// Sampled iterated limits of the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedLimits {
    /// `lim_j lim_i m(i,j)`, sampled at `j = J`, `i = I·J`.
    pub column_first: f64,
    /// `lim_i lim_j m(i,j)`, sampled at `i = I`, `j = I·J`.
    pub row_first: f64,
    /// `(j, m(I·J, j))` for `j = J/100, J/10, J`.
    pub column_sweep: Vec<(usize, f64)>,
    pub row_sweep: Vec<(usize, f64)>,
}

/// The inner limit is sampled at `I·J`, so the outer index stays a factor
/// `I` below it throughout the sweep.
pub fn iterated_limits(
    spec: &MultiplierSpec,
    i_scale: usize,
    j_scale: usize,
) -> Result<IteratedLimits> {
    if i_scale < 10 || j_scale < 10 {
        return Err(LabError::InvalidArgument(format!(
            "iterated limits need I, J >= 10 (got {i_scale}, {j_scale})"
        )));
    }
    spec.validate()?;
    let inner = i_scale
        .checked_mul(j_scale)
        .ok_or_else(|| LabError::InvalidArgument("I*J overflows".into()))?;
    let sweep = |outer: usize| -> Vec<usize> {
        [outer / 100, outer / 10, outer]
            .into_iter()
            .map(|k| k.max(spec.offset))
            .collect()
    };
    let column_sweep: Vec<(usize, f64)> = sweep(j_scale)
        .into_iter()
        .map(|j| (j, spec.entry(inner, j)))
        .collect();
    let row_sweep: Vec<(usize, f64)> = sweep(i_scale)
        .into_iter()
        .map(|i| (i, spec.entry(i, inner)))
        .collect();
    Ok(IteratedLimits {
        column_first: column_sweep.last().expect("nonempty").1,
        row_first: row_sweep.last().expect("nonempty").1,
        column_sweep,
        row_sweep,
    })
}

/// Test matrices used to probe the multiplier norm, in ensemble order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Identity,
    AllOnes,
    /// Ones in the first column, zeros elsewhere.
    OnesColumn,
    /// Seeded ±1 matrix; the payload is its index among the random witnesses.
    RandomSigns(usize),
}

impl Witness {
    /// The first `count` members of the fixed ensemble.
    pub fn ensemble(count: usize) -> Vec<Witness> {
        let fixed = [Witness::Identity, Witness::AllOnes, Witness::OnesColumn];
        fixed
            .into_iter()
            .chain((0..).map(Witness::RandomSigns))
            .take(count)
            .collect()
    }

    pub fn matrix(self, n: usize, seed: u64) -> ComplexMatrix {
        match self {
            Witness::Identity => ComplexMatrix::identity(n),
            Witness::AllOnes => ComplexMatrix::from_fn(n, n, |_, _| ONE),
            Witness::OnesColumn => {
                ComplexMatrix::from_real_fn(n, n, |_, j| if j == 0 { 1.0 } else { 0.0 })
            }
            Witness::RandomSigns(k) => {
                let stream = seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                let mut rng = ChaCha8Rng::seed_from_u64(stream);
                ComplexMatrix::from_fn(n, n, |_, _| {
                    Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
                })
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Identity => write!(f, "identity"),
            Witness::AllOnes => write!(f, "all-ones"),
            Witness::OnesColumn => write!(f, "ones-column"),
            Witness::RandomSigns(k) => write!(f, "random-signs#{k}"),
        }
    }
}

/// Lower evidence for `‖S_M‖` on the `N x N` section.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierProbe {
    pub spec: String,
    pub n: usize,
    pub lower_bound: f64,
    pub witness: Witness,
    /// `‖M ∗ A‖ / ‖A‖` per witness, in ensemble order.
    pub ratios: Vec<f64>,
    pub seed: u64,
}

pub fn multiplier_lower_bound(
    spec: &MultiplierSpec,
    n: usize,
    witnesses: usize,
    seed: u64,
) -> Result<MultiplierProbe> {
    if witnesses == 0 {
        return Err(LabError::InvalidArgument(
            "need at least one witness".into(),
        ));
    }
    let m = make_multiplier(spec, n)?;
    let ensemble = Witness::ensemble(witnesses);
    let mut ratios = Vec::with_capacity(ensemble.len());
    for w in &ensemble {
        let a = w.matrix(n, seed);
        let denom = norm2(&a);
        let ratio = if denom == 0.0 {
            0.0
        } else {
            norm2(&schur_product(&m, &a)?) / denom
        };
        ratios.push(ratio);
    }
    let (best, lower_bound) =
        ratios
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, &r)| if r > acc.1 { (k, r) } else { acc },
            );
    Ok(MultiplierProbe {
        spec: spec.to_string(),
        n,
        lower_bound,
        witness: ensemble[best],
        ratios,
        seed,
    })
}

/// `min(max column ℓ² norm, max row ℓ² norm)`: an upper bound on the Schur
/// multiplier norm from the trivial factorizations `m_ij = <e_i, M e_j>`.
pub fn factorization_ceiling(m: &ComplexMatrix) -> f64 {
    let (r, c) = m.shape();
    let max_row = (0..r)
        .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let max_col = (0..c)
        .map(|j| (0..r).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    max_row.min(max_col)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn schur_product_examples() {
        let a = real(&[vec![1., 2.], vec![3., 4.]]);
        let b = real(&[vec![5., 6.], vec![7., 8.]]);
        assert_eq!(
            schur_product(&a, &b).unwrap(),
            real(&[vec![5., 12.], vec![21., 32.]])
        );
        let ones = Witness::AllOnes.matrix(2, 0);
        assert_eq!(schur_product(&ones, &a).unwrap(), a);
        assert_eq!(
            schur_product(&a, &b).unwrap(),
            schur_product(&b, &a).unwrap()
        );
        assert!(schur_product(&a, &ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn multiplier_entries() {
        let dq =
            make_multiplier(&MultiplierSpec::new(MultiplierKind::DifferenceQuotient), 2).unwrap();
        assert_eq!(dq, real(&[vec![0.0, 0.25], vec![-0.25, 0.0]]));

        let thm = MultiplierSpec::new(MultiplierKind::Bennett(WeightSequence::Harmonic));
        assert!((thm.entry(1, 2) - 1.0 / 12.0).abs() < 1e-16);

        let e = make_multiplier(&MultiplierSpec::new(MultiplierKind::LogDamped(1.0)), 6).unwrap();
        for i in 0..6 {
            assert_eq!(e[(i, i)].norm(), 0.0);
        }
    }

    #[test]
    fn kinds_round_trip_through_strings() {
        for kind in [
            MultiplierKind::DifferenceQuotient,
            MultiplierKind::LogDamped(1.0),
            MultiplierKind::LogLogDamped(0.5),
            MultiplierKind::Bennett(WeightSequence::LogFamily(1.0)),
            MultiplierKind::Constant(-2.5),
            MultiplierKind::Alternating,
        ] {
            assert_eq!(kind.to_string().parse::<MultiplierKind>().unwrap(), kind);
        }
        assert_eq!(
            "E:1".parse::<MultiplierKind>().unwrap(),
            MultiplierKind::LogDamped(1.0)
        );
        assert!("E".parse::<MultiplierKind>().is_err());
        assert!("F:-1".parse::<MultiplierKind>().is_err());
        assert!("bennett".parse::<MultiplierKind>().is_err());
        assert!("nope".parse::<MultiplierKind>().is_err());
    }

    #[test]
    fn antisymmetric_kernels_are_antisymmetric() {
        for kind in [
            MultiplierKind::DifferenceQuotient,
            MultiplierKind::LogDamped(0.5),
            MultiplierKind::LogLogDamped(1.0),
            MultiplierKind::Bennett(WeightSequence::Harmonic),
        ] {
            let m = make_multiplier(&MultiplierSpec::new(kind), 12).unwrap();
            assert_eq!(m.add(&m.transpose()).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn offsets_are_validated() {
        for kind in [
            MultiplierKind::LogDamped(1.0),
            MultiplierKind::LogLogDamped(1.0),
        ] {
            assert!(matches!(
                make_multiplier(&MultiplierSpec::with_offset(kind, 0), 3),
                Err(LabError::InvalidOffset { offset: 0, .. })
            ));
        }
        assert!(make_multiplier(
            &MultiplierSpec::with_offset(MultiplierKind::DifferenceQuotient, 0),
            3
        )
        .is_ok());
    }

    #[test]
    fn antidiagonal_gap_matches_enumeration() {
        for offset in 0..3 {
            for n in 0..40 {
                let brute: f64 = (offset..=n)
                    .filter(|&i| n - i >= offset)
                    .map(|i| (n as f64 - 2.0 * i as f64).abs())
                    .sum();
                assert_eq!(
                    antidiagonal_abs_gap(n, offset),
                    brute,
                    "n={n} offset={offset}"
                );
            }
        }
    }

    #[test]
    fn criterion_on_constant_and_alternating() {
        let c =
            bennett_criterion(&MultiplierSpec::new(MultiplierKind::Constant(3.0)), 1000).unwrap();
        assert_eq!(c.partial_sum, 0.0);
        assert!(!c.limits_vanish);

        let alt = MultiplierSpec::new(MultiplierKind::Alternating);
        for n in 2..50 {
            // n - 1 entries on the antidiagonal, each second difference of modulus 4.
            assert_eq!(antidiagonal_term(&alt, n), 4.0 * (n - 1) as f64);
        }
        let r = bennett_criterion(&alt, 10_000).unwrap();
        assert!(!r.verdict);
    }

    #[test]
    fn iterated_limits_of_constant() {
        let l =
            iterated_limits(&MultiplierSpec::new(MultiplierKind::Constant(0.7)), 10, 10).unwrap();
        assert_eq!(l.column_first, 0.7);
        assert_eq!(l.row_first, 0.7);
        assert!(
            iterated_limits(&MultiplierSpec::new(MultiplierKind::Constant(0.7)), 9, 10).is_err()
        );
    }

    #[test]
    fn probe_of_all_ones_is_one() {
        let p =
            multiplier_lower_bound(&MultiplierSpec::new(MultiplierKind::Constant(1.0)), 8, 6, 3)
                .unwrap();
        assert!((p.lower_bound - 1.0).abs() < 1e-12);
        assert_eq!(p.witness, Witness::Identity);
        assert!(multiplier_lower_bound(
            &MultiplierSpec::new(MultiplierKind::Constant(1.0)),
            8,
            0,
            3
        )
        .is_err());
    }

    #[test]
    fn probes_grow_without_damping_and_level_off_with_it() {
        let probe = |kind, n| {
            multiplier_lower_bound(&MultiplierSpec::new(kind), n, 8, 2002)
                .unwrap()
                .lower_bound
        };
        let dq: Vec<f64> = [16, 32, 64, 128]
            .into_iter()
            .map(|n| probe(MultiplierKind::DifferenceQuotient, n))
            .collect();
        assert!(dq.windows(2).all(|w| w[1] > w[0]), "{dq:?}");
        let e32 = probe(MultiplierKind::LogDamped(1.0), 32);
        let e128 = probe(MultiplierKind::LogDamped(1.0), 128);
        assert!(e128 < 1.1 * e32, "{e32} -> {e128}");
    }

    #[test]
    fn probe_is_monotone_in_the_witness_set() {
        let spec = MultiplierSpec::new(MultiplierKind::DifferenceQuotient);
        let mut last = 0.0;
        for w in 1..=8 {
            let p = multiplier_lower_bound(&spec, 16, w, 11).unwrap();
            assert!(p.lower_bound >= last);
            last = p.lower_bound;
        }
    }
}
