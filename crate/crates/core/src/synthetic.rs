//! Deterministic synthetic country panels.
//!
//! Each panel is generated from an explicit seed through a fixed draw
//! order, so the same configuration always yields byte-identical series.
//! The data-generating process plants a recession signal in the yield
//! spread: the spread at quarter `t` loads on the (standardized) output
//! cycle at `t + signal_lag`, so a probit of the below-trend dummy on the
//! spread lagged by `signal_lag` quarters should find it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::quarterly::{CountryPanel, Quarter, QuarterlySeries};

/// Everything that shapes one synthetic panel.
#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub country: String,
    pub seed: u64,
    pub quarters: usize,
    pub start: Quarter,
    /// Horizon at which the spread anticipates the cycle.
    pub signal_lag: usize,
    /// Loading of the spread on the standardized future cycle.
    pub signal_strength: f64,
    /// Standard deviation of the spread's own noise.
    pub spread_noise: f64,
    pub mean_spread: f64,
    pub mean_unemployment: f64,
    /// AR(1) coefficient of the output cycle.
    pub cycle_rho: f64,
    /// Standard deviation of the cycle innovation (log units).
    pub cycle_innovation_sd: f64,
    /// Quarterly trend growth of log real GDP.
    pub trend_growth: f64,
    pub base_log_gdp: f64,
    /// Quarterly log growth of the deflator.
    pub inflation: f64,
    /// Quarterly drift of the log stock index.
    pub stock_drift: f64,
    /// Loading of the log stock index on the (log-unit) cycle.
    pub stock_beta: f64,
    /// Loading of unemployment on the standardized cycle (entered with a
    /// negative sign: below trend means more unemployment).
    pub unemployment_beta: f64,
}

impl SyntheticConfig {
    /// A reasonable mid-sized economy; override fields as needed.
    pub fn named(country: impl Into<String>, seed: u64) -> Self {
        SyntheticConfig {
            country: country.into(),
            seed,
            quarters: 61,
            start: Quarter::new(1994, 1).expect("valid quarter"),
            signal_lag: 3,
            signal_strength: 0.9,
            spread_noise: 0.35,
            mean_spread: 0.8,
            mean_unemployment: 7.5,
            cycle_rho: 0.8,
            cycle_innovation_sd: 0.006,
            trend_growth: 0.005,
            base_log_gdp: 6.0,
            inflation: 0.005,
            stock_drift: 0.012,
            stock_beta: 4.0,
            unemployment_beta: 1.1,
        }
    }
}

/// Generates the panel for `config`. Draw order is fixed (cycle, spread
/// noise, short-rate noise, unemployment noise, stock noise), so output
/// depends only on the configuration.
pub fn synthetic_panel(config: &SyntheticConfig) -> CountryPanel {
    let t_len = config.quarters;
    let lead = config.signal_lag;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let std_normal = Normal::new(0.0, 1.0).expect("valid normal");
    let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| std_normal.sample(&mut rng)).collect() };

    // Output cycle, extended `lead` quarters past the sample so the
    // spread can anticipate it.
    let eps_c = draw(t_len + lead);
    let sd_stat = config.cycle_innovation_sd / (1.0 - config.cycle_rho.powi(2)).sqrt();
    let mut cycle = Vec::with_capacity(t_len + lead);
    cycle.push(sd_stat * eps_c[0]);
    for t in 1..t_len + lead {
        cycle.push(config.cycle_rho * cycle[t - 1] + config.cycle_innovation_sd * eps_c[t]);
    }
    let z: Vec<f64> = cycle.iter().map(|c| c / sd_stat).collect();

    let eps_spread = draw(t_len);
    let eps_short = draw(t_len);
    let eps_u = draw(t_len);
    let eps_stock = draw(t_len);

    let mut log_real = Vec::with_capacity(t_len);
    let mut deflator = Vec::with_capacity(t_len);
    let mut nominal = Vec::with_capacity(t_len);
    let mut spread = Vec::with_capacity(t_len);
    let mut short = Vec::with_capacity(t_len);
    let mut long = Vec::with_capacity(t_len);
    let mut unemployment = Vec::with_capacity(t_len);
    let mut stock = Vec::with_capacity(t_len);

    // Deflator base: 100 at 2000:Q1 when the sample covers it.
    let base_idx = Quarter::new(2000, 1)
        .expect("valid quarter")
        .quarters_since(config.start)
        .clamp(0, t_len as i64 - 1) as f64;

    let mut short_ar = 0.0;
    for t in 0..t_len {
        let tf = t as f64;
        log_real.push(config.base_log_gdp + config.trend_growth * tf + cycle[t]);
        deflator.push(100.0 * (config.inflation * (tf - base_idx)).exp());
        nominal.push(log_real[t].exp() * deflator[t] / 100.0);

        spread.push(
            config.mean_spread
                + config.signal_strength * z[t + lead]
                + config.spread_noise * eps_spread[t],
        );
        short_ar = 0.9 * short_ar + 0.25 * eps_short[t];
        short.push((4.0 + short_ar).max(0.3));
        long.push(short[t] + spread[t]);

        unemployment.push(
            (config.mean_unemployment - config.unemployment_beta * z[t] + 0.25 * eps_u[t])
                .clamp(1.5, 15.0),
        );
        stock.push(
            (8.0 + config.stock_drift * tf + config.stock_beta * cycle[t] + 0.02 * eps_stock[t])
                .exp(),
        );
    }

    let series = |values: Vec<f64>| {
        QuarterlySeries::new(config.start, values).expect("generated values are finite")
    };
    CountryPanel::new(
        config.country.clone(),
        series(nominal),
        series(deflator),
        series(long),
        series(short),
        series(unemployment),
        series(stock),
    )
    .expect("generated panel is valid")
}

/// Five bundled demonstration economies with different signal horizons
/// and strengths. `echo` is tuned weak so its spread clears only the
/// relaxed significance threshold.
pub fn demo_configs() -> Vec<SyntheticConfig> {
    let mut alpha = SyntheticConfig::named("alpha", 101);
    alpha.signal_lag = 2;
    alpha.signal_strength = 1.0;
    alpha.spread_noise = 0.30;
    alpha.mean_spread = 0.9;
    alpha.mean_unemployment = 6.0;

    let mut bravo = SyntheticConfig::named("bravo", 202);
    bravo.signal_lag = 3;
    bravo.mean_spread = 0.7;
    bravo.mean_unemployment = 8.5;

    let mut charlie = SyntheticConfig::named("charlie", 303);
    charlie.signal_lag = 4;
    charlie.signal_strength = 0.85;
    charlie.spread_noise = 0.40;
    charlie.start = Quarter::new(1991, 1).expect("valid quarter");
    charlie.quarters = 73;
    charlie.mean_unemployment = 9.5;

    let mut delta = SyntheticConfig::named("delta", 404);
    delta.signal_lag = 3;
    delta.signal_strength = 0.8;
    delta.mean_spread = 1.1;
    delta.mean_unemployment = 5.0;

    let mut echo = SyntheticConfig::named("echo", 515);
    echo.signal_lag = 2;
    echo.signal_strength = 0.35;
    echo.spread_noise = 0.70;
    echo.mean_spread = 0.6;
    echo.mean_unemployment = 7.0;

    vec![alpha, bravo, charlie, delta, echo]
}

/// Panels for [`demo_configs`].
pub fn demo_panels() -> Vec<CountryPanel> {
    demo_configs().iter().map(synthetic_panel).collect()
}

/// A panel whose spread carries the future cycle with no noise at all at
/// a known lag; selection should recover that lag, and the planted lag is
/// returned alongside the panel.
pub fn planted_signal_panel() -> (CountryPanel, usize) {
    let mut config = SyntheticConfig::named("planted", 777);
    config.signal_lag = 2;
    config.signal_strength = 1.4;
    config.spread_noise = 0.0;
    (synthetic_panel(&config), config.signal_lag)
}

/// Seed for randomized tests: `CYCLEPROBE_SEED` when set (decimal u64),
/// otherwise `default`.
pub fn env_seed(default: u64) -> u64 {
    match std::env::var("CYCLEPROBE_SEED") {
        Ok(s) => s.trim().parse().unwrap_or(default),
        Err(_) => default,
    }
}
