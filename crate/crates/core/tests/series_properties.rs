//! Randomized invariants for the calendar and series layers.

use cycleprobe_core::eval::{mae, rmse};
use cycleprobe_core::hp::hp_decompose;
use cycleprobe_core::quarterly::{common_range, Quarter, QuarterlySeries};
use proptest::prelude::*;

fn quarter_strategy() -> impl Strategy<Value = Quarter> {
    (1800i32..2200, 1u8..=4).prop_map(|(y, q)| Quarter::new(y, q).unwrap())
}

fn series_strategy(max_len: usize) -> impl Strategy<Value = QuarterlySeries> {
    (
        quarter_strategy(),
        prop::collection::vec(-50.0f64..50.0, 4..=max_len),
    )
        .prop_map(|(start, values)| QuarterlySeries::new(start, values).unwrap())
}

proptest! {
    #[test]
    fn quarter_display_then_parse_round_trips(q in quarter_strategy()) {
        let token = q.to_string();
        let parsed: Quarter = token.parse().unwrap();
        prop_assert_eq!(parsed, q);
    }

    #[test]
    fn offset_and_quarters_since_are_inverse(q in quarter_strategy(), step in -400i64..400) {
        let moved = q.offset(step);
        prop_assert_eq!(moved.quarters_since(q), step);
        prop_assert_eq!(moved.offset(-step), q);
    }

    #[test]
    fn quarter_order_agrees_with_offset_sign(q in quarter_strategy(), step in 1i64..400) {
        prop_assert!(q.offset(step) > q);
        prop_assert!(q.offset(-step) < q);
    }

    #[test]
    fn lags_compose(series in series_strategy(40), a in 0usize..3, b in 0usize..3) {
        prop_assume!(a + b < series.len());
        let two_steps = series.lag(a).unwrap().lag(b).unwrap();
        let one_step = series.lag(a + b).unwrap();
        prop_assert_eq!(two_steps, one_step);
    }

    #[test]
    fn lag_shifts_the_calendar_without_touching_values(
        series in series_strategy(40),
        lag in 1usize..4,
    ) {
        prop_assume!(lag < series.len());
        let lagged = series.lag(lag).unwrap();
        prop_assert_eq!(lagged.values(), series.values());
        prop_assert_eq!(lagged.start().quarters_since(series.start()), lag as i64);
        // A value observed at t is reported at t + lag.
        let probe = series.start();
        prop_assert_eq!(lagged.get(probe.offset(lag as i64)), series.get(probe));
    }

    #[test]
    fn common_range_is_within_every_input(
        a in series_strategy(60),
        b in series_strategy(60),
    ) {
        match common_range(&[&a, &b]) {
            Ok((first, last)) => {
                prop_assert!(first <= last);
                for s in [&a, &b] {
                    prop_assert!(s.start() <= first);
                    prop_assert!(last <= s.end());
                    // Every quarter of the common range is observed.
                    prop_assert!(s.get(first).is_some() && s.get(last).is_some());
                }
                // Maximality: one quarter earlier or later escapes some input.
                prop_assert!(a.get(first.offset(-1)).is_none() || b.get(first.offset(-1)).is_none());
                prop_assert!(a.get(last.offset(1)).is_none() || b.get(last.offset(1)).is_none());
            }
            Err(_) => {
                // No overlap: one series must end before the other begins.
                prop_assert!(a.end() < b.start() || b.end() < a.start());
            }
        }
    }

    #[test]
    fn rmse_dominates_mae_and_both_are_nonnegative(
        pairs in prop::collection::vec((-10.0f64..10.0, 0.0f64..1.0), 1..50),
    ) {
        let actual: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let forecast: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let r = rmse(&actual, &forecast).unwrap();
        let m = mae(&actual, &forecast).unwrap();
        // Quadratic mean >= arithmetic mean of the same absolute errors.
        prop_assert!(m >= 0.0);
        prop_assert!(r >= m - 1e-12);
    }

    #[test]
    fn hp_trend_and_cycle_reassemble_the_series(series in series_strategy(80)) {
        let decomposition = hp_decompose(&series, 1600.0).unwrap();
        let scale = series.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for ((y, tau), c) in series
            .values()
            .iter()
            .zip(decomposition.trend().values())
            .zip(decomposition.cycle().values())
        {
            prop_assert!((tau + c - y).abs() <= 1e-12 * scale);
        }
        // The penalized trend never needs more total variation than the data.
        prop_assert_eq!(decomposition.trend().len(), series.len());
        prop_assert_eq!(decomposition.trend().start(), series.start());
    }

    #[test]
    fn hp_cycle_sums_to_zero(series in series_strategy(60)) {
        let decomposition = hp_decompose(&series, 1600.0).unwrap();
        let scale = series.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let sum: f64 = decomposition.cycle().values().iter().sum();
        let len = series.len() as f64;
        prop_assert!(sum.abs() <= 1e-10 * scale * len, "cycle sum {sum}");
    }

    #[test]
    fn slice_then_get_agrees_with_parent(series in series_strategy(40)) {
        let first = series.start().offset(1);
        let last = series.end().offset(-1);
        prop_assume!(first <= last);
        let sliced = series.slice(first, last).unwrap();
        prop_assert_eq!(sliced.start(), first);
        prop_assert_eq!(sliced.end(), last);
        let mid = first.offset(last.quarters_since(first) / 2);
        prop_assert_eq!(sliced.get(mid), series.get(mid));
    }
}
