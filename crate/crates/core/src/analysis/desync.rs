use serde::{Deserialize, Serialize};

use super::partition::{Region, ReturnMap};
use super::rates::TransitionRates;
use crate::error::{Error, Result};

pub const N_BINS: usize = 6;
pub const DEFAULT_MAX_DURATION: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistogramFlavor {
    Empirical,
    /// Markov chain on II, III, IV with destination-resolved exits.
    RateMarkov,
    /// Single clockwise pass: II -> IV -> I, or II -> III ... III -> IV -> I.
    RateSimple,
}

/// Relative frequencies of event durations 1, 2, 3, 4, 5 and more than 5
/// cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesyncHistogram {
    pub bins: [f64; N_BINS],
    pub event_count: usize,
    pub flavor: HistogramFlavor,
}

impl DesyncHistogram {
    pub fn gt5(&self) -> f64 {
        self.bins[5]
    }

    fn from_mass(mass: &[f64], flavor: HistogramFlavor) -> Result<Self> {
        let total: f64 = mass.iter().sum();
        if !(total > 0.0) {
            return Err(Error::UndefinedRate("estimated duration distribution has no mass".into()));
        }
        let mut bins = [0.0; N_BINS];
        for (d, m) in (1..).zip(mass) {
            bins[(d - 1).min(N_BINS - 1)] += m / total;
        }
        Ok(Self { bins, event_count: 0, flavor })
    }
}

/// Durations of excursions out of region I that start and end inside the
/// record; duration is the number of non-I labels minus one.
pub fn desync_events(map: &ReturnMap) -> Result<Vec<usize>> {
    let labels = &map.labels;
    let mut out = Vec::new();
    let mut k = 0;
    // skip an excursion already in progress at the start
    while k < labels.len() && labels[k] != Region::I {
        k += 1;
    }
    while k < labels.len() {
        if labels[k] == Region::I {
            k += 1;
            continue;
        }
        let start = k;
        while k < labels.len() && labels[k] != Region::I {
            k += 1;
        }
        if k == labels.len() {
            break;
        }
        if labels[start] != Region::II {
            return Err(Error::Internal(format!("excursion at {start} starts in {}", labels[start])));
        }
        out.push(k - start - 1);
    }
    Ok(out)
}

pub fn desync_histogram(durations: &[usize]) -> DesyncHistogram {
    let mut bins = [0.0; N_BINS];
    let counted: Vec<usize> = durations.iter().copied().filter(|&d| d >= 1).collect();
    for &d in &counted {
        bins[(d - 1).min(N_BINS - 1)] += 1.0;
    }
    let n = counted.len();
    if n > 0 {
        for b in &mut bins {
            *b /= n as f64;
        }
    }
    DesyncHistogram { bins, event_count: n, flavor: HistogramFlavor::Empirical }
}

fn required(rates: &TransitionRates) -> Result<(f64, f64, f64)> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::UndefinedRate(format!("{name} undefined")));
    Ok((need(rates.r2(), "r2")?, need(rates.r3(), "r3")?, need(rates.r4(), "r4")?))
}

/// Unnormalized probability of each duration `1..=max_duration` under the
/// Markov chain `II -> {III: 1-r2, IV: r2}`, `III -> {III: 1-r3, IV: r3}`,
/// `IV -> {II: 1-r4, I: r4}`.
pub fn markov_duration_mass(r2: f64, r3: f64, r4: f64, max_duration: usize) -> Vec<f64> {
    let mut mass = Vec::with_capacity(max_duration);
    let (mut ii, mut iii, mut iv) = (1.0, 0.0, 0.0);
    for _ in 0..max_duration {
        let next_ii = iv * (1.0 - r4);
        let next_iii = ii * (1.0 - r2) + iii * (1.0 - r3);
        let next_iv = ii * r2 + iii * r3;
        ii = next_ii;
        iii = next_iii;
        iv = next_iv;
        mass.push(iv * r4);
    }
    mass
}

/// Unnormalized mass of a single clockwise pass: `r2 r4` for duration 1,
/// `(1-r2)(1-r3)^(d-2) r3 r4` for longer ones.
pub fn simple_duration_mass(r2: f64, r3: f64, r4: f64, max_duration: usize) -> Vec<f64> {
    (1..=max_duration)
        .map(|d| if d == 1 { r2 * r4 } else { (1.0 - r2) * (1.0 - r3).powi(d as i32 - 2) * r3 * r4 })
        .collect()
}

pub fn estimate_histogram_from_rates(
    rates: &TransitionRates,
    max_duration: usize,
    flavor: HistogramFlavor,
) -> Result<DesyncHistogram> {
    if max_duration < N_BINS {
        return Err(Error::InvalidInput(format!("max duration {max_duration} below {N_BINS}")));
    }
    let (r2, r3, r4) = required(rates)?;
    let mass = match flavor {
        HistogramFlavor::RateMarkov => markov_duration_mass(r2, r3, r4, max_duration),
        HistogramFlavor::RateSimple => simple_duration_mass(r2, r3, r4, max_duration),
        HistogramFlavor::Empirical => {
            return Err(Error::InvalidInput("empirical histograms come from event durations".into()))
        }
    };
    DesyncHistogram::from_mass(&mass, flavor)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Laminar {
    Finite(f64),
    /// The record never leaves region I.
    Infinite,
}

impl Laminar {
    pub fn finite(self) -> Option<f64> {
        match self {
            Laminar::Finite(v) => Some(v),
            Laminar::Infinite => None,
        }
    }
}

/// `1 / r1`.
pub fn mean_laminar_from_rates(rates: &TransitionRates) -> Result<Laminar> {
    match rates.r1() {
        None => Err(Error::UndefinedRate("r1 undefined: no points in region I".into())),
        Some(0.0) => Ok(Laminar::Infinite),
        Some(r) => Ok(Laminar::Finite(1.0 / r)),
    }
}

/// Mean length of the maximal runs of region I, runs at both ends included.
pub fn mean_laminar_empirical(map: &ReturnMap) -> Result<Laminar> {
    let (mut runs, mut total, mut prev_i) = (0usize, 0usize, false);
    for &l in &map.labels {
        let is_i = l == Region::I;
        if is_i {
            total += 1;
            if !prev_i {
                runs += 1;
            }
        }
        prev_i = is_i;
    }
    if runs == 0 {
        return Err(Error::InsufficientData("no laminar run in the record".into()));
    }
    if map.labels.iter().all(|&l| l == Region::I) {
        return Ok(Laminar::Infinite);
    }
    Ok(Laminar::Finite(total as f64 / runs as f64))
}

/// Number of maximal region-I runs.
pub fn laminar_run_count(map: &ReturnMap) -> usize {
    let mut prev_i = false;
    let mut runs = 0;
    for &l in &map.labels {
        let is_i = l == Region::I;
        if is_i && !prev_i {
            runs += 1;
        }
        prev_i = is_i;
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::rates::transition_rates;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;
    use Region::*;

    fn map(labels: Vec<Region>) -> ReturnMap {
        ReturnMap::from_labels_unchecked(labels)
    }

    #[test]
    fn event_examples() {
        assert_eq!(desync_events(&map(vec![I, II, IV, I])).unwrap(), vec![1]);
        assert_eq!(desync_events(&map(vec![I, II, III, IV, I])).unwrap(), vec![2]);
        assert!(desync_events(&map(vec![I, I, I])).unwrap().is_empty());
    }

    #[test]
    fn unterminated_events_are_dropped() {
        let labels = vec![III, IV, I, II, IV, II, III, IV, I, I, II, III];
        assert_eq!(desync_events(&map(labels)).unwrap(), vec![4]);
    }

    #[test]
    fn event_not_starting_in_ii_is_internal_error() {
        assert!(matches!(desync_events(&map(vec![I, III, IV, I])), Err(Error::Internal(_))));
    }

    #[test]
    fn histogram_examples() {
        let h = desync_histogram(&[1, 1, 2]);
        assert!((h.bins[0] - 2.0 / 3.0).abs() < 1e-15 && (h.bins[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(h.event_count, 3);
        assert_eq!(desync_histogram(&[7, 9]).bins, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let e = desync_histogram(&[]);
        assert_eq!((e.bins, e.event_count), ([0.0; 6], 0));
    }

    fn rates(r2: f64, r3: f64, r4: f64) -> TransitionRates {
        let mut r = transition_rates(&map(vec![I, II, III, IV, I])).unwrap();
        r.r[1] = Some(r2);
        r.r[2] = Some(r3);
        r.r[3] = Some(r4);
        r
    }

    #[test]
    fn deterministic_shortest_path() {
        let h = estimate_histogram_from_rates(&rates(1.0, 0.3, 1.0), 50, HistogramFlavor::RateMarkov).unwrap();
        assert_eq!(h.bins, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn simple_variant_duration_one() {
        let m = simple_duration_mass(0.6, 0.5, 0.4, 10);
        assert!((m[0] - 0.24).abs() < 1e-15);
    }

    #[test]
    fn undefined_rate_is_reported() {
        let r = transition_rates(&map(vec![I; 5])).unwrap();
        assert!(matches!(
            estimate_histogram_from_rates(&r, 50, HistogramFlavor::RateMarkov),
            Err(Error::UndefinedRate(_))
        ));
    }

    /// Sum over every label path `II, x_2, ..., x_{d+1} = IV` of the product
    /// of step probabilities, times the final `IV -> I` step.
    fn enumerate_paths(r2: f64, r3: f64, r4: f64, d: usize) -> f64 {
        fn step(from: Region, to: Region, r2: f64, r3: f64, r4: f64) -> f64 {
            match (from, to) {
                (II, III) => 1.0 - r2,
                (II, IV) => r2,
                (III, III) => 1.0 - r3,
                (III, IV) => r3,
                (IV, II) => 1.0 - r4,
                _ => 0.0,
            }
        }
        fn walk(at: Region, left: usize, p: f64, r: (f64, f64, f64)) -> f64 {
            if left == 0 {
                return if at == IV { p * r.2 } else { 0.0 };
            }
            [II, III, IV].iter().map(|&to| walk(to, left - 1, p * step(at, to, r.0, r.1, r.2), r)).sum()
        }
        walk(II, d, 1.0, (r2, r3, r4))
    }

    #[test]
    fn markov_matches_path_enumeration_on_grid() {
        let grid = [0.0, 0.1, 0.35, 0.5, 0.8, 1.0];
        for &r2 in &grid {
            for &r3 in &grid {
                for &r4 in &grid {
                    let m = markov_duration_mass(r2, r3, r4, 8);
                    for d in 1..=8 {
                        let e = enumerate_paths(r2, r3, r4, d);
                        assert!((m[d - 1] - e).abs() < 1e-12, "({r2},{r3},{r4}) d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn markov_matches_simulated_chain() {
        let (r2, r3, r4) = (0.55, 0.3, 0.45);
        let mut rng = rng_from_seed(21);
        let mut labels = vec![I];
        let mut events = 0;
        while events < 40_000 {
            let next = match *labels.last().unwrap() {
                I => {
                    events += 1;
                    II
                }
                II => {
                    if rng.random::<f64>() < r2 {
                        IV
                    } else {
                        III
                    }
                }
                III => {
                    if rng.random::<f64>() < r3 {
                        IV
                    } else {
                        III
                    }
                }
                IV => {
                    if rng.random::<f64>() < r4 {
                        I
                    } else {
                        II
                    }
                }
            };
            labels.push(next);
        }
        labels.push(I);
        let m = map(labels);
        let h = desync_histogram(&desync_events(&m).unwrap());
        let est = estimate_histogram_from_rates(&rates(r2, r3, r4), 1000, HistogramFlavor::RateMarkov).unwrap();
        for k in 0..N_BINS {
            assert!((h.bins[k] - est.bins[k]).abs() < 0.01, "bin {k}: {} vs {}", h.bins[k], est.bins[k]);
        }
    }

    #[test]
    fn laminar_examples() {
        let m = map(vec![I, I, II, IV, I, I, I]);
        assert_eq!(mean_laminar_empirical(&m).unwrap(), Laminar::Finite(2.5));
        assert_eq!(laminar_run_count(&m), 2);
        let mut r = rates(0.5, 0.5, 0.5);
        r.r[0] = Some(0.4);
        assert_eq!(mean_laminar_from_rates(&r).unwrap(), Laminar::Finite(2.5));
        r.r[0] = Some(1.0);
        assert_eq!(mean_laminar_from_rates(&r).unwrap(), Laminar::Finite(1.0));
        r.r[0] = Some(0.0);
        assert_eq!(mean_laminar_from_rates(&r).unwrap(), Laminar::Infinite);
        assert_eq!(mean_laminar_empirical(&map(vec![I; 4])).unwrap(), Laminar::Infinite);
    }

    fn valid_labels() -> impl Strategy<Value = Vec<Region>> {
        prop::collection::vec(any::<bool>(), 3..300)
            .prop_map(|flags| flags.windows(2).map(|w| Region::from_flags(w[0], w[1])).collect())
    }

    proptest! {
        #[test]
        fn events_start_in_ii_and_histogram_normalized(labels in valid_labels()) {
            let m = map(labels);
            let d = desync_events(&m).unwrap();
            let h = desync_histogram(&d);
            if h.event_count > 0 {
                prop_assert!((h.bins.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn empirical_laminar_is_inverse_r1(mut labels in valid_labels()) {
            // close the record outside region I so every run ends in an exit
            if matches!(labels.last(), Some(I | IV)) {
                labels.push(II);
            }
            let m = map(labels);
            let r = transition_rates(&m).unwrap();
            match (mean_laminar_empirical(&m), mean_laminar_from_rates(&r)) {
                (Ok(Laminar::Finite(a)), Ok(Laminar::Finite(b))) => prop_assert!((a - b).abs() < 1e-9 * a),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }

        #[test]
        fn estimated_histograms_normalized(r2 in 0.01f64..1.0, r3 in 0.01f64..1.0, r4 in 0.01f64..1.0) {
            for flavor in [HistogramFlavor::RateMarkov, HistogramFlavor::RateSimple] {
                let h = estimate_histogram_from_rates(&rates(r2, r3, r4), 200, flavor).unwrap();
                prop_assert!((h.bins.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(h.bins.iter().all(|&b| b >= 0.0));
            }
        }
    }
}
