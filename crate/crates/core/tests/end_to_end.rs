use std::f64::consts::TAU;

use phaselock::analysis::{
    analyze_map, desync_events, desync_histogram, estimate_histogram_from_rates, laminar_run_count,
    mean_laminar_empirical, transition_rates, AnalysisConfig, HistogramFlavor, Region, ReturnMap, DEFAULT_MAX_DURATION,
};
use phaselock::experiments::{run_point, simulate, tent_orbit, SystemSpec};
use phaselock::models::Trajectory;
use proptest::prelude::*;

fn tent(eps: f64) -> SystemSpec {
    SystemSpec::Tent { a: 0.3, eps, n_iter: 60_000, discard: 10_000, center: 0.0 }
}

#[test]
fn same_seed_same_report() {
    let cfg = AnalysisConfig::default();
    let a = run_point(&tent(0.12), 9, &cfg).unwrap();
    let b = run_point(&tent(0.12), 9, &cfg).unwrap();
    assert_eq!(a, b);
    let c = run_point(&tent(0.12), 10, &cfg).unwrap();
    assert_ne!(a.map, c.map);
}

#[test]
fn simulated_tent_columns_reproduce_the_point() {
    let cfg = AnalysisConfig::default();
    let t = simulate(&tent(0.12), 4, 0.0).unwrap();
    assert_eq!(t.names(), ["x", "y"]);
    let direct = run_point(&tent(0.12), 4, &cfg).unwrap();
    let again = analyze_map(t.column(0), t.column(1), 0.0, &cfg).unwrap();
    assert_eq!(direct, again);
    let (x, _) = tent_orbit(0.3, 0.12, 60_000, 10_000, 4).unwrap();
    assert_eq!(x, t.column(0));
}

#[test]
fn trajectory_files_round_trip_bit_for_bit() {
    let t = simulate(&tent(0.2), 1, 0.0).unwrap();
    let mut csv = Vec::new();
    t.write_csv(&mut csv).unwrap();
    assert_eq!(Trajectory::read_csv(&csv[..]).unwrap(), t);
    let mut bin = Vec::new();
    t.write_binary(&mut bin).unwrap();
    assert_eq!(Trajectory::read_binary(&bin[..]).unwrap(), t);
}

#[test]
fn strong_coupling_never_leaves_sync() {
    let r = run_point(&tent(0.24), 2, &AnalysisConfig::default()).unwrap();
    assert_eq!(r.rates.r1(), Some(0.0));
    assert!(r.events.is_empty());
    assert_eq!(r.laminar_runs, 1);
}

fn map_from(chi: Vec<f64>) -> ReturnMap {
    ReturnMap::from_recentered(&chi).unwrap()
}

/// Recentered phases that hop between the sync half and the other half
/// with a persistence controlled by `stay`.
fn chi_series() -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec((0.0f64..1.0, 0.0f64..TAU / 2.0), 10..400), 0.0f64..1.0).prop_map(|(draws, stay)| {
        let mut in_sync = true;
        draws
            .into_iter()
            .map(|(u, off)| {
                if u > stay {
                    in_sync = !in_sync;
                }
                if in_sync {
                    off
                } else {
                    TAU / 2.0 + off
                }
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn rates_are_probabilities(chi in chi_series()) {
        let map = map_from(chi);
        let r = transition_rates(&map).unwrap();
        r.check_invariants().unwrap();
        for v in r.r.iter().flatten() {
            prop_assert!((0.0..=1.0).contains(v));
        }
        let s = r.sub_rates;
        if let (Some(a), Some(b), Some(t)) = (s.ii_to_iii, s.ii_to_iv, r.leave_rates[1]) {
            prop_assert!((a + b - t).abs() < 1e-12);
        }
        if let (Some(a), Some(b), Some(t)) = (s.iv_to_i, s.iv_to_ii, r.leave_rates[3]) {
            prop_assert!((a + b - t).abs() < 1e-12);
        }
    }

    #[test]
    fn excursions_open_in_region_two(chi in chi_series()) {
        let map = map_from(chi);
        let events = desync_events(&map).unwrap();
        let opens = map.labels.windows(2).filter(|w| w[0] == Region::I && w[1] != Region::I).count();
        prop_assert!(events.len() <= opens);
        for w in map.labels.windows(2) {
            if w[0] == Region::I && w[1] != Region::I {
                prop_assert_eq!(w[1], Region::II);
            }
        }
        let h = desync_histogram(&events);
        if h.event_count > 0 {
            prop_assert!((h.bins.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn laminar_mean_is_total_over_runs(chi in chi_series()) {
        let map = map_from(chi);
        let in_i = map.labels.iter().filter(|&&l| l == Region::I).count();
        let runs = laminar_run_count(&map);
        match mean_laminar_empirical(&map) {
            Ok(l) => {
                if let Some(v) = l.finite() {
                    prop_assert!((v - in_i as f64 / runs as f64).abs() < 1e-12);
                }
            }
            Err(_) => prop_assert_eq!(runs, 0),
        }
    }

    #[test]
    fn rate_histograms_are_distributions(chi in chi_series()) {
        let r = transition_rates(&map_from(chi)).unwrap();
        for flavor in [HistogramFlavor::RateMarkov, HistogramFlavor::RateSimple] {
            if let Ok(h) = estimate_histogram_from_rates(&r, DEFAULT_MAX_DURATION, flavor) {
                prop_assert!((h.bins.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!(h.bins.iter().all(|b| *b >= 0.0));
            }
        }
    }
}
