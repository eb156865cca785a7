//! Independent oracles for the closed forms and shortcuts used by the library.

use foguel_core::car::{car_hankel, hankel_coefficients, rc_bounds};
use foguel_core::linalg::norm2;
use foguel_core::schur::{
    bennett_criterion, factorization_ceiling, iterated_limits, make_multiplier,
    multiplier_lower_bound, proof_chain_comparison, schur_product, MultiplierKind, MultiplierSpec,
};
use foguel_core::sequences::{weighted_sum, WeightMode};
use foguel_core::{Complex64, ComplexMatrix, WeightSequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Σ over the triangle i + j <= t of the absolute mixed second difference,
/// by direct double loop.
fn brute_second_difference_sum(spec: &MultiplierSpec, t: usize) -> f64 {
    let o = spec.offset;
    let mut sum = 0.0;
    for i in o..=t {
        for j in o..=t {
            if i + j > t {
                continue;
            }
            let d = spec.entry(i, j) - spec.entry(i, j + 1) - spec.entry(i + 1, j)
                + spec.entry(i + 1, j + 1);
            sum += d.abs();
        }
    }
    sum
}

fn specs() -> Vec<MultiplierSpec> {
    let mut out = Vec::new();
    for offset in [1, 2] {
        for kind in [
            MultiplierKind::DifferenceQuotient,
            MultiplierKind::LogDamped(1.0),
            MultiplierKind::LogLogDamped(0.5),
            MultiplierKind::Bennett(WeightSequence::Harmonic),
            MultiplierKind::Bennett(WeightSequence::LogLogFamily(1.0)),
            MultiplierKind::Constant(2.0),
            MultiplierKind::Alternating,
        ] {
            out.push(MultiplierSpec::with_offset(kind, offset));
        }
    }
    out
}

#[test]
fn antidiagonal_grouping_matches_double_loop() {
    for spec in specs() {
        for t in [4, 5, 17, 60, 200] {
            let fast = bennett_criterion(&spec, t).unwrap().partial_sum;
            let brute = brute_second_difference_sum(&spec, t);
            assert!(
                (fast - brute).abs() <= 1e-12 * brute.max(1.0),
                "{spec} T={t}: {fast} vs {brute}"
            );
        }
    }
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        for u in &cols {
            let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// The multiplier norm is a supremum of a convex function over the unit
/// ball, so it is attained on unitaries; sample them.
fn sampled_multiplier_norm(m: &ComplexMatrix, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| norm2(&schur_product(m, &random_unitary(m.rows(), &mut rng)).unwrap()))
        .fold(0.0, f64::max)
}

#[test]
fn probe_never_exceeds_tiny_exact_norms() {
    for spec in specs() {
        for n in 1..=3 {
            let m = make_multiplier(&spec, n).unwrap();
            let ceiling = factorization_ceiling(&m);
            let sampled = sampled_multiplier_norm(&m, 4000, 17);
            let probe = multiplier_lower_bound(&spec, n, 12, 5).unwrap();
            assert!(sampled <= ceiling + 1e-12, "{spec} N={n}");
            assert!(probe.lower_bound <= ceiling + 1e-12, "{spec} N={n}");
            assert!(
                probe.lower_bound <= sampled + 1e-2,
                "{spec} N={n}: {} vs {sampled}",
                probe.lower_bound
            );
        }
    }
}

#[test]
fn chain_bound_for_harmonic_coefficients() {
    let spec = MultiplierSpec::new(MultiplierKind::Bennett(WeightSequence::Harmonic));
    let c = proof_chain_comparison(&spec, 10_000).unwrap();
    assert!(c.holds_at_every_n, "slack {}", c.min_slack);
    assert!(c.criterion_sum <= c.chain_bound);
    assert!(
        proof_chain_comparison(&MultiplierSpec::new(MultiplierKind::Alternating), 100).is_err()
    );
}

#[test]
fn iterated_limit_examples() {
    let dq = iterated_limits(
        &MultiplierSpec::new(MultiplierKind::DifferenceQuotient),
        10_000,
        10_000,
    )
    .unwrap();
    assert!((dq.column_first + 1.0).abs() < 0.01);
    assert!((dq.row_first - 1.0).abs() < 0.01);

    let e = iterated_limits(
        &MultiplierSpec::new(MultiplierKind::LogDamped(1.0)),
        10_000,
        10_000,
    )
    .unwrap();
    assert!(e.column_first.abs() < 0.01 && e.row_first.abs() < 0.01);
}

#[test]
fn b2_sum_is_the_squared_first_column() {
    for alpha in [
        WeightSequence::PisierFlat,
        WeightSequence::PisierGeometric,
        WeightSequence::Geometric(0.5),
    ] {
        for n in 1..=6 {
            let b = rc_bounds(hankel_coefficients(&alpha, |k| (k + 1) as f64), n);
            let b2 = weighted_sum(&alpha, WeightMode::B2, n);
            assert!(
                (b.first_col * b.first_col - b2).abs() <= 1e-12 * b2.max(1.0),
                "{alpha} n={n}"
            );
            assert!(b.lower >= b.first_col);
        }
    }
}

#[test]
fn car_hankel_norm_matches_window_formula_at_two() {
    // Row windows {0,1} and {1,2}.
    let alpha = WeightSequence::PisierFlat;
    let m = car_hankel(&alpha, |_| 1.0, 2).unwrap();
    let window = (alpha.value(0).powi(2) + alpha.value(1).powi(2))
        .max(alpha.value(1).powi(2) + alpha.value(2).powi(2));
    assert!((norm2(&m) - window.sqrt()).abs() < 1e-12);
}
