//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p foguel-cli --test acceptance`.

use std::fs;
use std::time::{Duration, Instant};

use foguel_cli::jobs::similarity_payload;
use foguel_core::car::{
    build_car, car_check, car_pattern_matrix, commutator_coefficients, commutator_generator,
    hankel_coefficients, hankel_generator, rc_bounds,
};
use foguel_core::foguel::{
    assemble_r, power_offdiag, random_polynomials, similarity_check, sliding_sum_shift_defect,
    von_neumann_probe, z_partial,
};
use foguel_core::hankel::{
    commutator_growth, formal_solution, make_hankel, sylvester_residual, FormalSolution, HankelSpec,
};
use foguel_core::linalg::{make_shift, norm2};
use foguel_core::schur::{
    bennett_criterion, iterated_limits, multiplier_lower_bound, proof_chain_comparison,
    MultiplierKind, MultiplierSpec,
};
use foguel_core::sequences::{bennett_sums, BennettSeries};
use foguel_core::{Complex64, ComplexMatrix, WeightSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn lab<T>(r: foguel_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn unit_norm(m: ComplexMatrix) -> ComplexMatrix {
    let s = norm2(&m);
    m.scale_real(1.0 / s)
}

fn alphas() -> [WeightSequence; 3] {
    [
        WeightSequence::PisierFlat,
        WeightSequence::PisierGeometric,
        WeightSequence::Geometric(0.5),
    ]
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn ac1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut last = Duration::ZERO;
    for m in 1..=10 {
        let start = Instant::now();
        let dev = lab(car_check(&lab(build_car(m))?))?;
        last = start.elapsed();
        ensure!(
            dev.max() < 1e-12,
            "m={m}: deviations {:e}, {:e}",
            dev.anti,
            dev.mixed
        );
        worst = worst.max(dev.max());
    }
    ensure!(last < Duration::from_secs(30), "m=10 took {last:?}");
    Ok(format!("max deviation {worst:e}; m=10 sweep {last:.2?}"))
}

/// Norm and lower bound of `[w(i+j) α_{i+j} C_{i+j}]` for unit and derivative weights.
fn hankel_pattern_gaps(alpha: &WeightSequence, n: usize) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for derivative in [false, true] {
        let weight = move |k: usize| if derivative { (k + 1) as f64 } else { 1.0 };
        let beta = hankel_coefficients(alpha, weight);
        let norm = norm2(&lab(car_pattern_matrix(&beta, hankel_generator, n))?);
        out.push((norm, rc_bounds(&beta, n).lower));
    }
    Ok(out)
}

fn ac2() -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for alpha in alphas() {
        for n in 2..=4 {
            for (k, (norm, lower)) in hankel_pattern_gaps(&alpha, n)?.into_iter().enumerate() {
                let gap = (norm - lower).abs();
                worst = worst.max(gap);
                if gap > 1e-8 {
                    let w = if k == 0 { "unit" } else { "derivative" };
                    failures.push(format!("{alpha} {w} N={n}: {norm:.6} vs {lower:.6}"));
                }
            }
        }
    }
    ensure!(
        failures.is_empty(),
        "{} of 18 sections off: {}",
        failures.len(),
        failures.join("; ")
    );
    Ok(format!("largest gap {worst:e}"))
}

/// The same comparison with `α` cut to the indices `< N` a section can see.
fn ac2_finite_support() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in alphas() {
        for n in 2..=4 {
            let cut = WeightSequence::Custom((0..n).map(|k| alpha.value(k)).collect());
            for (norm, lower) in hankel_pattern_gaps(&cut, n)? {
                let gap = (norm - lower).abs();
                ensure!(gap <= 1e-8, "{alpha} N={n}: {norm} vs {lower}");
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!("largest gap {worst:e}"))
}

fn ac3() -> Outcome {
    let mut ratios = Vec::new();
    for alpha in alphas() {
        for n in 2..=4 {
            let beta = commutator_coefficients(&alpha);
            let norm = norm2(&lab(car_pattern_matrix(&beta, commutator_generator, n))?);
            let b = rc_bounds(&beta, n);
            ensure!(
                b.lower - 1e-8 <= norm && norm <= b.upper + 1e-8,
                "{alpha} N={n}: {norm} outside [{}, {}]",
                b.lower,
                b.upper
            );
            ratios.push(format!("{alpha}/{n}:{:.4}", norm / b.lower));
        }
    }
    Ok(format!("norm/lower {}", ratios.join(" ")))
}

fn ac4() -> Outcome {
    let terms = 1_000_000;
    let start = Instant::now();
    let r = lab(bennett_sums(&WeightSequence::Harmonic, terms))?;
    let took = start.elapsed();
    let t = terms as f64;
    let (a, b, c) = (
        r.sum(BennettSeries::ScaledValues),
        r.sum(BennettSeries::FirstDifferences),
        r.sum(BennettSeries::WeightedSecondDifferences),
    );
    ensure!((b - (1.0 - 1.0 / (t + 1.0))).abs() <= 1e-12, "Σ|b_n| = {b}");
    ensure!((c - 1.0).abs() <= 1e-5, "Σ n|c_n| = {c}");
    ensure!(
        (a - std::f64::consts::PI.powi(2) / 6.0).abs() <= 1e-5,
        "Σ|a_n|/n = {a}"
    );
    ensure!(took < Duration::from_secs(10), "took {took:?}");
    Ok(format!("sums {a:.12} {b:.12} {c:.12} in {took:.2?}"))
}

/// Increments over the decades ending at 10^3, 10^4 and 10^5.
fn last_three(increments: Vec<f64>) -> Vec<f64> {
    increments[increments.len() - 3..].to_vec()
}

fn ac5() -> Outcome {
    let terms = 100_000;
    let mut notes = Vec::new();
    for (seq, kind, name) in [
        (
            WeightSequence::LogFamily(1.0),
            MultiplierKind::LogDamped(1.0),
            "E(1)",
        ),
        (
            WeightSequence::LogLogFamily(1.0),
            MultiplierKind::LogLogDamped(1.0),
            "F(1)",
        ),
    ] {
        let sums = lab(bennett_sums(&seq, terms))?;
        for s in BennettSeries::ALL {
            let inc = last_three(sums.decade_increments(s));
            ensure!(strictly_decreasing(&inc), "{name} {s:?} increments {inc:?}");
        }
        let spec = MultiplierSpec::new(kind);
        let crit = lab(bennett_criterion(&spec, terms))?;
        let inc = last_three(crit.decade_increments());
        ensure!(
            strictly_decreasing(&inc),
            "{name} second differences increments {inc:?}"
        );
        for t in [1_000, 10_000, 100_000] {
            let chain = lab(proof_chain_comparison(&spec, t))?;
            ensure!(
                chain.holds_at_every_n && chain.criterion_sum <= chain.chain_bound,
                "{name} T={t}: {} vs bound {}",
                chain.criterion_sum,
                chain.chain_bound
            );
            if t == terms {
                notes.push(format!(
                    "{name} sum {:.6} <= bound {:.6}",
                    chain.criterion_sum, chain.chain_bound
                ));
            }
        }
    }
    Ok(notes.join("; "))
}

fn ac6() -> Outcome {
    let spec = MultiplierSpec::new(MultiplierKind::DifferenceQuotient);
    let lim = lab(iterated_limits(&spec, 10_000, 10_000))?;
    ensure!(
        (lim.column_first + 1.0).abs() < 0.01,
        "C = {}",
        lim.column_first
    );
    ensure!((lim.row_first - 1.0).abs() < 0.01, "R = {}", lim.row_first);
    let bounds = [16, 32, 64, 128]
        .into_iter()
        .map(|n| lab(multiplier_lower_bound(&spec, n, 8, 2002)).map(|p| p.lower_bound))
        .collect::<Result<Vec<_>, _>>()?;
    ensure!(
        bounds.windows(2).all(|w| w[1] > w[0]),
        "lower bounds {bounds:?}"
    );
    Ok(format!(
        "C {:.6}, R {:.6}, lower bounds {:.4?}",
        lim.column_first, lim.row_first, bounds
    ))
}

fn ac7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in 1..=2 {
            for blocks in 1..=16 {
                let x = random_matrix(blocks * d, &mut rng);
                for n in 1..=8 {
                    let defect = lab(sliding_sum_shift_defect(&x, d, n))?;
                    ensure!(
                        defect <= 1e-13,
                        "seed {seed} d={d} N={blocks} n={n}: {defect:e}"
                    );
                    worst = worst.max(defect);
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases, worst {worst:e}"))
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let n = 256;
    let s = lab(make_shift(n))?;
    let t1 = s.scale_real(0.9);
    let x = similarity_payload(n);
    let zp = lab(z_partial(&s, &t1, &x, 250))?;
    let settled = zp.stabilized_at(1e-10);
    ensure!(settled.is_some(), "no stabilization within 250 terms");
    let block = lab(assemble_r(&s, &t1, &x))?;
    let rep = lab(similarity_check(&block, &zp.z, 128))?;
    let took = start.elapsed();
    ensure!(
        rep.residual_interior < 1e-8,
        "interior residual {:e}",
        rep.residual_interior
    );
    ensure!(
        (rep.conjugation_residual - rep.residual_full).abs() <= 1e-12,
        "conjugation {:e} vs full {:e}",
        rep.conjugation_residual,
        rep.residual_full
    );
    ensure!(rep.cond_l.is_finite(), "cond_L = {}", rep.cond_l);
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!(
        "stable by n={}, interior {:e}, cond_L {:.4}, {took:.2?}",
        settled.unwrap_or(0),
        rep.residual_interior,
        rep.cond_l
    ))
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut notes = Vec::new();
    for n in [64, 256, 512] {
        let spec = HankelSpec::scalar(WeightSequence::Geometric(0.5), n);
        let gamma = lab(make_hankel(&spec))?;
        let y = lab(formal_solution(
            &spec,
            FormalSolution::NegHankelTimesDerivation,
        ))?;
        let res = lab(sylvester_residual(&y, &gamma, n - 1))?;
        ensure!(res < 1e-12, "N={n}: residual {res:e}");

        let h_coeffs: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let h = lab(make_hankel(&HankelSpec::scalar(
            WeightSequence::Custom(h_coeffs),
            n,
        )))?;
        let perturbed = lab(sylvester_residual(&lab(y.add(&h))?, &gamma, n - 1))?;
        ensure!(
            (perturbed - res).abs() <= 1e-12,
            "N={n}: perturbed residual {perturbed:e} vs {res:e}"
        );
        notes.push(format!("N={n}: {res:.1e}/{perturbed:.1e}"));
    }
    Ok(notes.join(", "))
}

fn ac10() -> Outcome {
    let sizes = [64, 128, 256, 512];
    let geo =
        lab(commutator_growth(&WeightSequence::Geometric(0.5), &sizes))?.relative_increments();
    let pow = lab(commutator_growth(&WeightSequence::Power(1.5), &sizes))?.relative_increments();
    ensure!(
        geo.windows(2).all(|w| w[1] <= w[0]) && geo.iter().all(|&g| g.abs() < 1e-12),
        "geometric increments {geo:?}"
    );
    ensure!(pow.iter().all(|&g| g > 0.05), "power increments {pow:?}");
    Ok(format!("geometric {geo:?}, power {pow:.3?}"))
}

fn ac11() -> Outcome {
    let c = lab(make_shift(64))?;
    let polys = random_polynomials(100, 12, 2002);
    let rep = lab(von_neumann_probe(&c, &polys, 4096))?;
    ensure!(rep.contraction, "‖C‖ = {}", rep.norm_c);
    ensure!(
        rep.violations == 0,
        "{} violations, K ≈ {}",
        rep.violations,
        rep.k_estimate
    );
    Ok(format!(
        "0 violations in {} polynomials, max ratio {:.6}",
        rep.checks.len(),
        rep.k_estimate
    ))
}

fn ac12() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let t2 = unit_norm(random_matrix(8, &mut rng));
        let t1 = unit_norm(random_matrix(8, &mut rng));
        let x = unit_norm(random_matrix(8, &mut rng));
        let block = lab(assemble_r(&t2, &t1, &x))?;
        for n in 1..=10 {
            let d = lab(power_offdiag(&block, n))?.defect;
            ensure!(d <= 1e-10, "seed {seed} n={n}: {d:e}");
            worst = worst.max(d);
        }
    }
    Ok(format!("worst {worst:e}"))
}

fn ac13(suite_start: Instant) -> Outcome {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/sweeps/full.json");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = ["first", "second"].map(|name| dir.path().join(name));
    for out in &runs {
        let code = foguel_cli::run([
            "foguel-lab",
            "--seed",
            "2002",
            "sweep",
            spec,
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        ensure!(code == 0, "sweep exited with {code}");
    }
    for stem in ["car", "norms", "bennett", "multiplier", "similarity"] {
        let name = format!("{stem}.csv");
        let a = fs::read(runs[0].join(&name)).map_err(|e| e.to_string())?;
        let b = fs::read(runs[1].join(&name)).map_err(|e| e.to_string())?;
        ensure!(a == b, "{name} differs between runs");
    }
    let total = suite_start.elapsed();
    ensure!(total < Duration::from_secs(300), "suite took {total:?}");
    Ok(format!("byte-identical CSVs; suite {total:.1?}"))
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; listing
    // requests get an empty answer so tooling keeps working.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let suite_start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("AC1", Box::new(ac1)),
        ("AC2", Box::new(ac2)),
        (
            "AC2 finite support (informational)",
            Box::new(ac2_finite_support),
        ),
        ("AC3", Box::new(ac3)),
        ("AC4", Box::new(ac4)),
        ("AC5", Box::new(ac5)),
        ("AC6", Box::new(ac6)),
        ("AC7", Box::new(ac7)),
        ("AC8", Box::new(ac8)),
        ("AC9", Box::new(ac9)),
        ("AC10", Box::new(ac10)),
        ("AC11", Box::new(ac11)),
        ("AC12", Box::new(ac12)),
        ("AC13", Box::new(move || ac13(suite_start))),
    ];
    let mut failed = Vec::new();
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("{name}: PASS ({took:.2?}) {detail}"),
            Err(detail) => {
                println!("{name}: FAIL ({took:.2?}) {detail}");
                failed.push(*name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
