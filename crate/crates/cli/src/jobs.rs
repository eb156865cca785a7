//! Parameters and execution of the individual experiment commands. The same
//! parameter structs back the command-line flags and the `params` objects of
//! a sweep file, so both routes share defaults and validation.

use clap::{Args, ValueEnum};
use foguel_core::car::{
    build_car, car_check, car_pattern_matrix, car_pattern_sparse, commutator_coefficients,
    commutator_generator, hankel_coefficients, hankel_generator, rc_bounds,
};
use foguel_core::foguel::{assemble_r, similarity_check, z_partial};
use foguel_core::hankel::{
    derivation_product, make_hankel, make_weighted_hankel, DerivationProduct, HankelSpec,
};
use foguel_core::linalg::{make_shift, norm2, op_norm_dense, op_norm_power, op_norm_power_dense};
use foguel_core::schur::{
    bennett_criterion, multiplier_lower_bound, proof_chain_comparison, MultiplierKind,
    MultiplierSpec,
};
use foguel_core::sequences::{bennett_sums, BennettSeries};
use foguel_core::{ComplexMatrix, LabError, NormEstimate, WeightSequence};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult, Exit};
use crate::output::{opt_real, real, Family};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CarCheckParams {
    /// Number of fermionic modes (1..=14).
    #[arg(long, default_value_t = 8)]
    pub modes: usize,
}

impl Default for CarCheckParams {
    fn default() -> Self {
        Self { modes: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormTarget {
    /// `[α_{i+j}]`
    Hankel,
    /// `[(i+j+1) α_{i+j}]`
    HankelDerivative,
    /// `[(j-i) α_{i+j-1}]`
    Commutator,
    /// `[j α_{i+j-1}]`
    HankelTimesDerivation,
    /// `[i α_{i+j-1}]`
    DerivationAdjointTimesHankel,
    /// `[α_{i+j} C_{i+j}]`
    CarHankel,
    /// `[(i+j+1) α_{i+j} C_{i+j}]`
    CarHankelDerivative,
    /// `[(j-i) α_{i+j-1} C_{i+j-1}]`
    CarCommutator,
}

impl NormTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            NormTarget::Hankel => "hankel",
            NormTarget::HankelDerivative => "hankel-derivative",
            NormTarget::Commutator => "commutator",
            NormTarget::HankelTimesDerivation => "hankel-times-derivation",
            NormTarget::DerivationAdjointTimesHankel => "derivation-adjoint-times-hankel",
            NormTarget::CarHankel => "car-hankel",
            NormTarget::CarHankelDerivative => "car-hankel-derivative",
            NormTarget::CarCommutator => "car-commutator",
        }
    }

    fn is_car(self) -> bool {
        matches!(
            self,
            NormTarget::CarHankel | NormTarget::CarHankelDerivative | NormTarget::CarCommutator
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Dense,
    Power,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct NormParams {
    #[arg(long, value_enum, default_value_t = NormTarget::Hankel)]
    pub target: NormTarget,
    /// Coefficient sequence, e.g. `geometric:0.5`, `power:1.5`, `pisier-flat`.
    #[arg(long, default_value = "geometric:0.5")]
    pub alpha: String,
    /// Truncation size.
    #[arg(long = "N", default_value_t = 16)]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Dense)]
    pub method: MethodArg,
    /// Relative tolerance of the power method.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Iteration cap of the power method.
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
}

impl Default for NormParams {
    fn default() -> Self {
        Self {
            target: NormTarget::Hankel,
            alpha: "geometric:0.5".into(),
            n: 16,
            method: MethodArg::Dense,
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct BennettParams {
    /// Coefficient sequence `a_n`, e.g. `harmonic`, `log:1`, `loglog:1`.
    #[arg(long, default_value = "harmonic")]
    pub sequence: String,
    /// Last index of the partial sums (at least 10).
    #[arg(long, default_value_t = 1_000_000)]
    pub terms: usize,
}

impl Default for BennettParams {
    fn default() -> Self {
        Self {
            sequence: "harmonic".into(),
            terms: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct MultiplierParams {
    /// `difference-quotient`, `log-damped:ε`, `loglog-damped:ε`,
    /// `bennett:<sequence>`, `constant:c` or `alternating`.
    #[arg(long, default_value = "difference-quotient")]
    pub kind: String,
    /// Section size.
    #[arg(long = "N", default_value_t = 64)]
    #[serde(rename = "N")]
    pub n: usize,
    /// Number of witnesses: identity, all-ones, ones-column, then random signs.
    #[arg(long, default_value_t = 8)]
    pub witnesses: usize,
}

impl Default for MultiplierParams {
    fn default() -> Self {
        Self {
            kind: "difference-quotient".into(),
            n: 64,
            witnesses: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimilarityParams {
    /// Size of the truncated shifts.
    #[arg(long = "N", default_value_t = 256)]
    #[serde(rename = "N")]
    pub n: usize,
    /// `T1 = rho · S`.
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    /// Number of terms of the partial sum `Z_n`.
    #[arg(long, default_value_t = 200)]
    pub n_terms: usize,
    /// Leading window of the interior residual.
    #[arg(long, default_value_t = 128)]
    pub window: usize,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        Self {
            n: 256,
            rho: 0.9,
            n_terms: 200,
            window: 128,
        }
    }
}

/// One runnable experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum JobCommand {
    CarCheck(CarCheckParams),
    Norm(NormParams),
    Bennett(BennettParams),
    Multiplier(MultiplierParams),
    Similarity(SimilarityParams),
}

impl JobCommand {
    pub fn name(&self) -> &'static str {
        match self {
            JobCommand::CarCheck(_) => "car-check",
            JobCommand::Norm(_) => "norm",
            JobCommand::Bennett(_) => "bennett",
            JobCommand::Multiplier(_) => "multiplier",
            JobCommand::Similarity(_) => "similarity",
        }
    }

    pub fn family(&self) -> Family {
        match self {
            JobCommand::CarCheck(_) => Family::Car,
            JobCommand::Norm(_) => Family::Norms,
            JobCommand::Bennett(_) => Family::Bennett,
            JobCommand::Multiplier(_) => Family::Multiplier,
            JobCommand::Similarity(_) => Family::Similarity,
        }
    }

    pub fn params_json(&self) -> Value {
        let v = match self {
            JobCommand::CarCheck(p) => serde_json::to_value(p),
            JobCommand::Norm(p) => serde_json::to_value(p),
            JobCommand::Bennett(p) => serde_json::to_value(p),
            JobCommand::Multiplier(p) => serde_json::to_value(p),
            JobCommand::Similarity(p) => serde_json::to_value(p),
        };
        v.unwrap_or(Value::Null)
    }

    /// Builds a command from its name and a JSON parameter object.
    pub fn from_json(name: &str, params: Value) -> CliResult<Self> {
        fn parse<T: for<'de> Deserialize<'de>>(name: &str, params: Value) -> CliResult<T> {
            let params = if params.is_null() { json!({}) } else { params };
            serde_json::from_value(params)
                .map_err(|e| CliError::Invalid(format!("bad params for {name}: {e}")))
        }
        Ok(match name {
            "car-check" => JobCommand::CarCheck(parse(name, params)?),
            "norm" => JobCommand::Norm(parse(name, params)?),
            "bennett" => JobCommand::Bennett(parse(name, params)?),
            "multiplier" => JobCommand::Multiplier(parse(name, params)?),
            "similarity" => JobCommand::Similarity(parse(name, params)?),
            other => return Err(CliError::Invalid(format!("unknown command {other:?}"))),
        })
    }
}

/// Result of one job: CSV rows for its family, a JSON payload and a status.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutcome {
    pub family: Family,
    pub rows: Vec<Vec<String>>,
    pub result: Value,
    pub exit: Exit,
    pub message: Option<String>,
}

pub fn run_job(cmd: &JobCommand, seed: u64) -> JobOutcome {
    let done = match cmd {
        JobCommand::CarCheck(p) => car_job(p),
        JobCommand::Norm(p) => norm_job(p, seed),
        JobCommand::Bennett(p) => bennett_job(p),
        JobCommand::Multiplier(p) => multiplier_job(p, seed),
        JobCommand::Similarity(p) => similarity_job(p),
    };
    match done {
        Ok(o) => o,
        Err(e) => JobOutcome {
            family: cmd.family(),
            rows: Vec::new(),
            result: json!({ "error": e.to_string() }),
            exit: e.exit(),
            message: Some(e.to_string()),
        },
    }
}

fn ok(family: Family, row: Vec<String>, result: Value) -> CliResult<JobOutcome> {
    Ok(JobOutcome {
        family,
        rows: vec![row],
        result,
        exit: Exit::Success,
        message: None,
    })
}

fn sequence(s: &str) -> CliResult<WeightSequence> {
    let seq: WeightSequence = s.parse()?;
    seq.validate()?;
    Ok(seq)
}

fn car_job(p: &CarCheckParams) -> CliResult<JobOutcome> {
    let alg = build_car(p.modes)?;
    let dev = car_check(&alg)?;
    ok(
        Family::Car,
        vec![p.modes.to_string(), real(dev.anti), real(dev.mixed)],
        json!({ "modes": p.modes, "dim": alg.dim(), "dev_anti": dev.anti, "dev_mixed": dev.mixed }),
    )
}

fn scalar_target(target: NormTarget, alpha: &WeightSequence, n: usize) -> CliResult<ComplexMatrix> {
    let spec = HankelSpec::scalar(alpha.clone(), n);
    let m = match target {
        NormTarget::Hankel => make_hankel(&spec)?,
        NormTarget::HankelDerivative => make_weighted_hankel(&spec, |k| (k + 1) as f64)?,
        NormTarget::Commutator => derivation_product(&spec, DerivationProduct::Commutator)?,
        NormTarget::HankelTimesDerivation => {
            derivation_product(&spec, DerivationProduct::HankelTimesDerivation)?
        }
        NormTarget::DerivationAdjointTimesHankel => {
            derivation_product(&spec, DerivationProduct::AdjointDerivationTimesHankel)?
        }
        _ => {
            return Err(CliError::Internal(format!(
                "{} is not a scalar target",
                target.as_str()
            )))
        }
    };
    Ok(m)
}

type Coefficients<'a> = Box<dyn Fn(usize, usize) -> f64 + 'a>;

fn car_norm(
    p: &NormParams,
    alpha: &WeightSequence,
    seed: u64,
) -> Result<(NormEstimate, Value), LabError> {
    let n = p.n;
    let unit = |_: usize| 1.0;
    let derivative = |k: usize| (k + 1) as f64;
    let (beta, phi, modes): (Coefficients<'_>, fn(usize) -> Option<usize>, usize) = match p.target {
        NormTarget::CarHankel => (
            Box::new(hankel_coefficients(alpha, unit)),
            hankel_generator,
            2 * n - 1,
        ),
        NormTarget::CarHankelDerivative => (
            Box::new(hankel_coefficients(alpha, derivative)),
            hankel_generator,
            2 * n - 1,
        ),
        _ => (
            Box::new(commutator_coefficients(alpha)),
            commutator_generator,
            (2 * n).saturating_sub(2).max(1),
        ),
    };
    let bounds = rc_bounds(&beta, n);
    let extra = json!({
        "modes": modes,
        "row_sup": bounds.row_sup,
        "col_sup": bounds.col_sup,
        "lower": bounds.lower,
        "upper": bounds.upper,
    });
    let est = match p.method {
        MethodArg::Dense => op_norm_dense(&car_pattern_matrix(&beta, phi, n)?)?,
        MethodArg::Power => {
            let s = car_pattern_sparse(&beta, phi, n, modes)?;
            op_norm_power(
                |x| s.matvec(x),
                |y| s.matvec_adjoint(y),
                s.cols(),
                p.tol,
                p.max_iter,
                seed,
            )?
        }
    };
    Ok((est, extra))
}

fn norm_job(p: &NormParams, seed: u64) -> CliResult<JobOutcome> {
    if p.n == 0 {
        return Err(CliError::Invalid("--N must be at least 1".into()));
    }
    let alpha = sequence(&p.alpha)?;
    let computed = if p.target.is_car() {
        car_norm(p, &alpha, seed)
    } else {
        let m = scalar_target(p.target, &alpha, p.n)?;
        let est = match p.method {
            MethodArg::Dense => op_norm_dense(&m),
            MethodArg::Power => op_norm_power_dense(&m, p.tol, p.max_iter, seed),
        };
        est.map(|e| (e, json!({})))
    };
    let (est, extra, exit, message) = match computed {
        Ok((e, x)) => (e, x, Exit::Success, None),
        Err(LabError::NotConverged { estimate }) => (
            estimate,
            json!({}),
            Exit::NotConverged,
            Some(if estimate.relative_residual.is_finite() {
                format!(
                    "power iteration hit --max-iter {} (last relative change {:e})",
                    p.max_iter, estimate.relative_residual
                )
            } else {
                format!(
                    "power iteration hit --max-iter {} before its convergence window filled",
                    p.max_iter
                )
            }),
        ),
        Err(e) => return Err(e.into()),
    };
    let row = vec![
        p.target.as_str().to_string(),
        p.n.to_string(),
        alpha.to_string(),
        est.method.as_str().to_string(),
        real(est.value),
        est.iterations.to_string(),
        est.converged.to_string(),
    ];
    let result = json!({
        "target": p.target.as_str(),
        "N": p.n,
        "param": alpha.to_string(),
        "method": est.method.as_str(),
        "value": est.value,
        "iters": est.iterations,
        "converged": est.converged,
        "relative_residual": est.relative_residual,
        "seed": seed,
        "car": extra,
    });
    Ok(JobOutcome {
        family: Family::Norms,
        rows: vec![row],
        result,
        exit,
        message,
    })
}

fn verdict_word(v: bool) -> &'static str {
    if v {
        "convergent"
    } else {
        "divergent"
    }
}

fn bennett_job(p: &BennettParams) -> CliResult<JobOutcome> {
    let seq = sequence(&p.sequence)?;
    let sums = bennett_sums(&seq, p.terms)?;
    let spec = MultiplierSpec::new(MultiplierKind::Bennett(seq.clone()));
    let crit = bennett_criterion(&spec, p.terms)?;
    let chain = proof_chain_comparison(&spec, p.terms)?;
    let verdict = sums.all_convergent() && crit.verdict;

    let series = |s: BennettSeries, name: &str| {
        json!({
            "name": name,
            "partial_sum": sums.sum(s),
            "checkpoints": sums.traces[s as usize].checkpoints(),
            "decade_increments": sums.decade_increments(s),
            "verdict": verdict_word(sums.verdict(s)),
        })
    };
    let row = vec![
        seq.to_string(),
        opt_real(seq.epsilon()),
        p.terms.to_string(),
        real(sums.sum(BennettSeries::ScaledValues)),
        real(sums.sum(BennettSeries::FirstDifferences)),
        real(sums.sum(BennettSeries::WeightedSecondDifferences)),
        real(crit.partial_sum),
        verdict_word(verdict).to_string(),
    ];
    let result = json!({
        "sequence": seq.to_string(),
        "epsilon": seq.epsilon(),
        "terms": p.terms,
        "first_index": sums.first_index,
        "series": [
            series(BennettSeries::ScaledValues, "sum |a_n|/n"),
            series(BennettSeries::FirstDifferences, "sum |b_n|"),
            series(BennettSeries::WeightedSecondDifferences, "sum n|c_n|"),
        ],
        "second_differences": {
            "partial_sum": crit.partial_sum,
            "checkpoints": crit.trace.checkpoints(),
            "decade_increments": crit.decade_increments(),
            "verdict": verdict_word(crit.verdict),
            "row_limit_samples": crit.row_limit_samples,
            "col_limit_samples": crit.col_limit_samples,
            "limits_vanish": crit.limits_vanish,
        },
        "chain_bound": {
            "value": chain.chain_bound,
            "holds_at_every_n": chain.holds_at_every_n,
            "min_slack": chain.min_slack,
        },
        "verdict": verdict_word(verdict),
    });
    ok(Family::Bennett, row, result)
}

fn multiplier_job(p: &MultiplierParams, seed: u64) -> CliResult<JobOutcome> {
    let kind: MultiplierKind = p.kind.parse()?;
    let spec = MultiplierSpec::new(kind);
    if p.n == 0 {
        return Err(CliError::Invalid("--N must be at least 1".into()));
    }
    let probe = multiplier_lower_bound(&spec, p.n, p.witnesses, seed)?;
    let row = vec![
        spec.kind.to_string(),
        opt_real(spec.epsilon()),
        p.n.to_string(),
        p.witnesses.to_string(),
        real(probe.lower_bound),
        seed.to_string(),
    ];
    let result = json!({
        "kind": spec.kind.to_string(),
        "epsilon": spec.epsilon(),
        "N": p.n,
        "witnesses": p.witnesses,
        "lower_bound": probe.lower_bound,
        "witness": probe.witness.to_string(),
        "ratios": probe.ratios,
        "seed": seed,
    });
    ok(Family::Multiplier, row, result)
}

/// `[1/(i+j+1)]` on the leading `N/4` corner, scaled to unit norm.
pub fn similarity_payload(n: usize) -> ComplexMatrix {
    let support = (n / 4).max(1);
    let x = ComplexMatrix::from_real_fn(n, n, |i, j| {
        if i < support && j < support {
            1.0 / (i + j + 1) as f64
        } else {
            0.0
        }
    });
    x.scale_real(1.0 / norm2(&x))
}

fn similarity_job(p: &SimilarityParams) -> CliResult<JobOutcome> {
    if p.n < 2 {
        return Err(CliError::Invalid("--N must be at least 2".into()));
    }
    if !(p.rho.is_finite() && p.rho >= 0.0) {
        return Err(CliError::Invalid(format!(
            "--rho must be finite and >= 0, got {}",
            p.rho
        )));
    }
    let s = make_shift(p.n)?;
    let t1 = s.scale_real(p.rho);
    let x = similarity_payload(p.n);
    let zp = z_partial(&s, &t1, &x, p.n_terms)?;
    let block = assemble_r(&s, &t1, &x)?;
    let rep = similarity_check(&block, &zp.z, p.window)?;
    let row = vec![
        p.n.to_string(),
        real(p.rho),
        p.n_terms.to_string(),
        p.window.to_string(),
        real(rep.residual_interior),
        real(rep.residual_full),
        real(rep.cond_l),
    ];
    let result = json!({
        "N": p.n,
        "rho": p.rho,
        "n_terms": p.n_terms,
        "window": p.window,
        "support": (p.n / 4).max(1),
        "residual_interior": rep.residual_interior,
        "residual_full": rep.residual_full,
        "conjugation_residual": rep.conjugation_residual,
        "cond_L": rep.cond_l,
        "z_sup": zp.sup(),
        "stabilized_at": zp.stabilized_at(1e-10),
        "increments": zp.increments,
    });
    ok(Family::Similarity, row, result)
}
