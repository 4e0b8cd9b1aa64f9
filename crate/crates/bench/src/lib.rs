//! Shared fixtures for the benchmarks.
//!
//! Everything here is deterministic so run-to-run comparisons measure the
//! code, not the inputs.

use cycleprobe_core::probit::normal::std_normal_cdf;
use cycleprobe_core::probit::DesignMatrix;
use cycleprobe_core::quarterly::{Quarter, QuarterlySeries};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// A quarterly level series shaped like log real GDP: slow trend plus an
/// AR(1) deviation.
pub fn level_series(len: usize) -> QuarterlySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut deviation = 0.0_f64;
    let mut values = Vec::with_capacity(len);
    for t in 0..len {
        let shock: f64 = StandardNormal.sample(&mut rng);
        deviation = 0.7 * deviation + 0.3 * shock;
        values.push(10.0 + 0.005 * t as f64 + 0.03 * deviation);
    }
    QuarterlySeries::new(Quarter::new(1970, 1).expect("valid"), values).expect("valid series")
}

/// A probit design with `k - 1` standard-normal regressors plus the
/// intercept, response drawn from the model itself.
pub fn probit_design(n: usize, k: usize) -> DesignMatrix {
    assert!(k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let beta: Vec<f64> = (0..k)
        .map(|j| if j == 0 { -0.4 } else { 0.9 / j as f64 })
        .collect();
    let mut columns: Vec<(String, Vec<f64>)> = (1..k)
        .map(|j| (format!("x{j}"), Vec::with_capacity(n)))
        .collect();
    let mut response = Vec::with_capacity(n);
    for _ in 0..n {
        let mut eta = beta[0];
        for (j, column) in columns.iter_mut().enumerate() {
            let x: f64 = StandardNormal.sample(&mut rng);
            eta += beta[j + 1] * x;
            column.1.push(x);
        }
        let u: f64 = rng.random();
        response.push(u8::from(u < std_normal_cdf(eta)));
    }
    DesignMatrix::with_intercept(columns, response).expect("simulated design is valid")
}
