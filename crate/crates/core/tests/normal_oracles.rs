//! Independent references for the normal distribution functions.
//!
//! The library evaluates Phi through a from-scratch complementary error
//! function. These tests rebuild the same quantities two entirely
//! different ways -- composite Simpson quadrature of the density, and a
//! Mills-ratio asymptotic series for the log of the deep tail -- and
//! demand agreement. Neither reference shares code or constants with the
//! implementation beyond the density formula itself.

use cycleprobe_core::probit::normal::{log_cdf, log_cdf_pair, std_normal_cdf, std_normal_pdf};

// Quoted past f64 precision on purpose; rounds to the nearest double.
#[allow(clippy::excessive_precision)]
const SQRT_2PI: f64 = 2.5066282746310005024;

fn phi(t: f64) -> f64 {
    (-0.5 * t * t).exp() / SQRT_2PI
}

/// Composite Simpson rule with `n` panels (`n` even).
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Quadrature reference for Phi(x).
///
/// Positive arguments integrate the density out from zero. Negative
/// arguments integrate the upper tail from |x| outward instead, which
/// avoids the catastrophic cancellation of `0.5 - 0.4999...` and keeps the
/// reference accurate in relative terms all the way down to Phi(-8).
fn cdf_quadrature(x: f64) -> f64 {
    if x >= 0.0 {
        0.5 + simpson(phi, 0.0, x, 1 << 15)
    } else {
        // phi(|x| + 40) underflows to zero, so the truncated integral
        // carries the entire mass of the tail.
        simpson(phi, -x, -x + 40.0, 1 << 17)
    }
}

/// Mills-ratio asymptotic reference for ln Phi(x) at deeply negative x.
///
/// Phi(-a) = phi(a)/a * [1 - 1/a^2 + 3/a^4 - 15/a^6 + 105/a^8 - 945/a^10 + ...];
/// the series is alternating, so truncation error is bounded by the
/// first omitted term, 10395/a^12.
fn log_cdf_tail_oracle(x: f64) -> f64 {
    assert!(x <= -10.0);
    let a = -x;
    let inv2 = 1.0 / (a * a);
    let series = inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * (105.0 - inv2 * 945.0))));
    -0.5 * a * a - SQRT_2PI.ln() - a.ln() + series.ln_1p()
}

#[test]
fn simpson_reference_integrates_the_density_to_one() {
    // Sanity check on the oracle itself before trusting it elsewhere.
    let total = simpson(phi, -40.0, 40.0, 1 << 18);
    assert!(
        (total - 1.0).abs() <= 1e-13,
        "density should integrate to 1, got {total}"
    );
}

#[test]
fn cdf_matches_quadrature_on_a_dense_grid() {
    let mut points: Vec<f64> = Vec::new();
    let mut x = -8.0;
    while x <= 8.0 + 1e-12 {
        points.push(x);
        x += 0.25;
    }
    // Extra points that do not fall on neat binary fractions, plus a
    // cluster around the internal series/continued-fraction switchover.
    points.extend([
        -7.123456789,
        -3.99,
        -2.85,
        -2.83,
        -2.8,
        -0.123456789,
        0.123456789,
        2.8,
        2.83,
        2.85,
        3.99,
        7.123456789,
    ]);
    for &x in &points {
        let got = std_normal_cdf(x);
        let reference = cdf_quadrature(x);
        let rel = (got - reference).abs() / reference;
        assert!(
            rel <= 1e-10,
            "Phi({x}): implementation {got:e} vs quadrature {reference:e} (rel {rel:.3e})"
        );
    }
}

#[test]
fn log_cdf_matches_quadrature_at_moderate_arguments() {
    for i in 0..=32 {
        let x = -8.0 + 0.25 * i as f64;
        let got = log_cdf(x);
        let reference = cdf_quadrature(x).ln();
        assert!(
            (got - reference).abs() <= 1e-9,
            "ln Phi({x}): implementation {got} vs quadrature {reference}"
        );
    }
}

#[test]
fn log_cdf_matches_mills_ratio_series_in_the_deep_tail() {
    // Covers both internal branches: the continued-fraction route down to
    // -37.5 and the asymptotic route beyond it.
    for &x in &[
        -12.0, -15.0, -20.0, -25.0, -30.0, -37.0, -38.0, -50.0, -100.0, -300.0,
    ] {
        let a = -x;
        let got = log_cdf(x);
        let reference = log_cdf_tail_oracle(x);
        // Oracle truncation dominates the budget at the shallow end.
        let budget = 2.0 * 10395.0 / a.powi(12) + 1e-12 * reference.abs();
        assert!(
            (got - reference).abs() <= budget,
            "ln Phi({x}): implementation {got} vs series {reference} (budget {budget:.3e})"
        );
    }
}

#[test]
fn pair_agrees_with_individual_evaluations() {
    for &x in &[-20.0, -3.5, -0.7, 0.0, 0.7, 3.5, 20.0] {
        let (lo, hi) = log_cdf_pair(x);
        assert_eq!(lo, log_cdf(x));
        assert_eq!(hi, log_cdf(-x));
    }
}

#[test]
fn density_matches_its_own_definition() {
    for &x in &[-6.0, -1.25, 0.0, 0.5, 2.0, 7.5] {
        let rel = (std_normal_pdf(x) - phi(x)).abs() / phi(x);
        assert!(rel <= 1e-15, "pdf({x}) rel {rel:.3e}");
    }
}
