//! Coefficient sequences and the scalar functionals attached to them.
//!
//! A [`WeightSequence`] is a lazily evaluated generator of reals. It serves
//! both as the symbol `α` of a CAR-valued Hankel matrix and as the sequence
//! `a_n` whose first and second forward differences drive Bennett's
//! criterion. Natural logarithms are used throughout.

mod summation;

use std::fmt;
use std::str::FromStr;

pub use summation::{compensated_sum, CompensatedSum, DecadeTrace};

use crate::error::{LabError, Result};

/// Named coefficient generators.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence {
    /// 1 at every index `2^k - 1`, 0 elsewhere. Not square-summable.
    PisierFlat,
    /// `2^{-k}` at index `2^k - 1`, 0 elsewhere.
    PisierGeometric,
    /// `(k+1)^{-s}`.
    Power(f64),
    /// `r^k` with `0 < r < 1`.
    Geometric(f64),
    /// `1 / (ln k)^{1+ε}` for `k >= 2`.
    LogFamily(f64),
    /// `1 / (ln k · (ln ln k)^{1+ε})` for `k >= 3`.
    LogLogFamily(f64),
    /// `1/k` for `k >= 1`.
    Harmonic,
    Constant(f64),
    /// Explicit values; zero past the end of the list.
    Custom(Vec<f64>),
}

impl WeightSequence {
    /// First index at which the generator is defined. Below it the sequence
    /// evaluates to zero.
    pub fn start_index(&self) -> usize {
        match self {
            WeightSequence::LogFamily(_) => 2,
            WeightSequence::LogLogFamily(_) => 3,
            WeightSequence::Harmonic => 1,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LabError::InvalidArgument(msg));
        match self {
            WeightSequence::Power(s) if !s.is_finite() => bad(format!("power exponent {s}")),
            WeightSequence::Geometric(r) if !(*r > 0.0 && *r < 1.0) => {
                bad(format!("geometric ratio {r} outside (0, 1)"))
            }
            WeightSequence::LogFamily(e) | WeightSequence::LogLogFamily(e)
                if !(*e >= 0.0 && e.is_finite()) =>
            {
                bad(format!("epsilon {e} must be finite and nonnegative"))
            }
            WeightSequence::Constant(c) if !c.is_finite() => bad(format!("constant {c}")),
            WeightSequence::Custom(v) if v.iter().any(|x| !x.is_finite()) => {
                bad("custom sequence has non-finite values".into())
            }
            _ => Ok(()),
        }
    }

    /// Value at index `k`; zero below [`start_index`](Self::start_index).
    pub fn value(&self, k: usize) -> f64 {
        if k < self.start_index() {
            return 0.0;
        }
        let x = k as f64;
        match self {
            WeightSequence::PisierFlat => {
                if (k + 1).is_power_of_two() {
                    1.0
                } else {
                    0.0
                }
            }
            WeightSequence::PisierGeometric => {
                if (k + 1).is_power_of_two() {
                    0.5f64.powi((k + 1).trailing_zeros() as i32)
                } else {
                    0.0
                }
            }
            WeightSequence::Power(s) => (x + 1.0).powf(-s),
            WeightSequence::Geometric(r) => r.powf(x),
            WeightSequence::LogFamily(e) => x.ln().powf(-(1.0 + e)),
            WeightSequence::LogLogFamily(e) => 1.0 / (x.ln() * x.ln().ln().powf(1.0 + e)),
            WeightSequence::Harmonic => 1.0 / x,
            WeightSequence::Constant(c) => *c,
            WeightSequence::Custom(v) => v.get(k).copied().unwrap_or(0.0),
        }
    }

    /// The ε parameter of the logarithmic families, if any.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            WeightSequence::LogFamily(e) | WeightSequence::LogLogFamily(e) => Some(*e),
            _ => None,
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSequence::PisierFlat => write!(f, "pisier-flat"),
            WeightSequence::PisierGeometric => write!(f, "pisier-geometric"),
            WeightSequence::Power(s) => write!(f, "power:{s}"),
            WeightSequence::Geometric(r) => write!(f, "geometric:{r}"),
            WeightSequence::LogFamily(e) => write!(f, "log:{e}"),
            WeightSequence::LogLogFamily(e) => write!(f, "loglog:{e}"),
            WeightSequence::Harmonic => write!(f, "harmonic"),
            WeightSequence::Constant(c) => write!(f, "constant:{c}"),
            WeightSequence::Custom(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "custom:{}", items.join(";"))
            }
        }
    }
}

impl FromStr for WeightSequence {
    type Err = LabError;

    /// Parses `name` or `name:param`, e.g. `geometric:0.5`, `loglog:1`,
    /// `custom:1;0.5;0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| {
                LabError::InvalidArgument(format!("{what} needs a parameter, e.g. {what}:1"))
            })?;
            a.parse::<f64>()
                .map_err(|_| LabError::InvalidArgument(format!("bad parameter {a:?} for {what}")))
        };
        let seq = match name {
            "pisier-flat" | "pisier_flat" => WeightSequence::PisierFlat,
            "pisier-geometric" | "pisier_geometric" => WeightSequence::PisierGeometric,
            "power" => WeightSequence::Power(num("power")?),
            "geometric" => WeightSequence::Geometric(num("geometric")?),
            "log" | "log_family" => WeightSequence::LogFamily(num("log")?),
            "loglog" | "loglog_family" => WeightSequence::LogLogFamily(num("loglog")?),
            "harmonic" => WeightSequence::Harmonic,
            "constant" => WeightSequence::Constant(num("constant")?),
            "custom" => {
                let a = arg.unwrap_or("");
                let values = a
                    .split([';', ','])
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        t.trim().parse::<f64>().map_err(|_| {
                            LabError::InvalidArgument(format!("bad custom value {t:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                WeightSequence::Custom(values)
            }
            other => {
                return Err(LabError::InvalidArgument(format!(
                    "unknown sequence {other:?}"
                )))
            }
        };
        seq.validate()?;
        Ok(seq)
    }
}

/// First `k_max` values (indices `0..k_max`). Empty when `k_max` is below
/// the start index of the generator.
pub fn gen_weights(seq: &WeightSequence, k_max: usize) -> Vec<f64> {
    if k_max < seq.start_index() {
        return Vec::new();
    }
    (0..k_max).map(|k| seq.value(k)).collect()
}

/// Truncated value of `sup_k (k+1)^2 Σ_{i>=k} |α_i|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSup {
    pub value: f64,
    pub argmax: usize,
    pub terms: usize,
}

/// Polynomial-boundedness functional, tails cut at index `k_max`.
pub fn a_functional(seq: &WeightSequence, k_max: usize) -> TruncatedSup {
    let mut best = TruncatedSup {
        value: 0.0,
        argmax: 0,
        terms: k_max,
    };
    let mut tail = CompensatedSum::new();
    for k in (0..k_max).rev() {
        tail.add(seq.value(k).powi(2));
        let v = ((k + 1) as f64).powi(2) * tail.value();
        if v >= best.value {
            best.value = v;
            best.argmax = k;
        }
    }
    best
}

/// Weights of the summability conditions on `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// `(k+1)^2`
    B2,
    /// `(k+1)^{2+ε}`
    Bp(f64),
    /// `(k+1)^2 (ln(k+1))^{2+ε}`
    Log(f64),
    /// `(k+1)^2 (ln(k+1))^2 (ln ln(k+1))^{2+ε}`, from `k = 2` on.
    LogLog(f64),
}

impl WeightMode {
    pub fn weight(self, k: usize) -> f64 {
        let x = (k + 1) as f64;
        match self {
            WeightMode::B2 => x * x,
            WeightMode::Bp(e) => x.powf(2.0 + e),
            WeightMode::Log(e) => x * x * x.ln().powf(2.0 + e),
            WeightMode::LogLog(e) => {
                if k < 2 {
                    0.0
                } else {
                    x * x * x.ln().powi(2) * x.ln().ln().powf(2.0 + e)
                }
            }
        }
    }
}

/// Compensated partial sum `Σ_{k<k_max} weight(k) |α_k|^2`.
pub fn weighted_sum(seq: &WeightSequence, mode: WeightMode, k_max: usize) -> f64 {
    compensated_sum((0..k_max).map(|k| mode.weight(k) * seq.value(k).powi(2)))
}

/// First forward differences `a_n - a_{n+1}`.
pub fn diff1(a: &[f64]) -> Result<Vec<f64>> {
    if a.len() < 2 {
        return Err(LabError::InvalidLength {
            needed: 2,
            got: a.len(),
        });
    }
    Ok(a.windows(2).map(|w| w[0] - w[1]).collect())
}

/// Second forward differences `a_n - 2a_{n+1} + a_{n+2}`.
pub fn diff2(a: &[f64]) -> Result<Vec<f64>> {
    if a.len() < 3 {
        return Err(LabError::InvalidLength {
            needed: 3,
            got: a.len(),
        });
    }
    Ok(a.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect())
}

/// The three series whose absolute summability the multiplier criterion needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BennettSeries {
    /// `Σ |a_n| / n`
    ScaledValues,
    /// `Σ |b_n|`
    FirstDifferences,
    /// `Σ n |c_n|`
    WeightedSecondDifferences,
}

impl BennettSeries {
    pub const ALL: [BennettSeries; 3] = [
        BennettSeries::ScaledValues,
        BennettSeries::FirstDifferences,
        BennettSeries::WeightedSecondDifferences,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct BennettReport {
    pub terms: usize,
    /// First index summed (`max(1, start_index)`).
    pub first_index: usize,
    /// Indexed like [`BennettSeries::ALL`].
    pub partial_sums: [f64; 3],
    pub traces: [DecadeTrace; 3],
    pub verdicts: [bool; 3],
}

impl BennettReport {
    pub fn sum(&self, series: BennettSeries) -> f64 {
        self.partial_sums[series as usize]
    }

    pub fn decade_increments(&self, series: BennettSeries) -> Vec<f64> {
        self.traces[series as usize].increments()
    }

    pub fn verdict(&self, series: BennettSeries) -> bool {
        self.verdicts[series as usize]
    }

    pub fn all_convergent(&self) -> bool {
        self.verdicts.iter().all(|&v| v)
    }
}

/// Partial sums up to `terms` of `|a_n|/n`, `|b_n|` and `n|c_n|` with
/// compensated summation and per-decade increments.
pub fn bennett_sums(seq: &WeightSequence, terms: usize) -> Result<BennettReport> {
    if terms < 10 {
        return Err(LabError::InvalidArgument(format!(
            "need at least 10 terms, got {terms}"
        )));
    }
    let first = seq.start_index().max(1);
    let mut sums = [CompensatedSum::new(); 3];
    let mut traces: [DecadeTrace; 3] = Default::default();

    let (mut a0, mut a1) = (seq.value(first), seq.value(first + 1));
    for n in first..=terms {
        let a2 = seq.value(n + 2);
        let nf = n as f64;
        sums[0].add(a0.abs() / nf);
        sums[1].add((a0 - a1).abs());
        sums[2].add(nf * (a0 - 2.0 * a1 + a2).abs());
        for (s, t) in sums.iter().zip(traces.iter_mut()) {
            t.observe(n, s.value());
        }
        a0 = a1;
        a1 = a2;
    }
    let verdicts = [
        traces[0].verdict(),
        traces[1].verdict(),
        traces[2].verdict(),
    ];
    Ok(BennettReport {
        terms,
        first_index: first,
        partial_sums: [sums[0].value(), sums[1].value(), sums[2].value()],
        traces,
        verdicts,
    })
}

/// Smallest `n0 >= 3` such that `|b_n| <= (1+r) / (n ln n (ln ln n)^r)`,
/// `r = 1 + ε`, holds for every `n` in `n0..=terms` for the log-log family.
/// `None` if the bound fails at `terms` itself.
pub fn loglog_difference_bound_onset(epsilon: f64, terms: usize) -> Option<usize> {
    let seq = WeightSequence::LogLogFamily(epsilon);
    let r = 1.0 + epsilon;
    let mut onset = None;
    for n in (3..=terms).rev() {
        let x = n as f64;
        let b = (seq.value(n) - seq.value(n + 1)).abs();
        let bound = (1.0 + r) / (x * x.ln() * x.ln().ln().powf(r));
        if b <= bound {
            onset = Some(n);
        } else {
            break;
        }
    }
    onset
}
