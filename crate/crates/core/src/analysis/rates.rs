use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::partition::{Region, ReturnMap};
use crate::error::{Error, Result};

/// Region III counts below this are flagged as unreliable.
pub const R3_LOW_CONFIDENCE: usize = 20;

/// Destination-resolved exit probabilities out of II and IV.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SubRates {
    pub ii_to_iii: Option<f64>,
    pub ii_to_iv: Option<f64>,
    pub iv_to_i: Option<f64>,
    pub iv_to_ii: Option<f64>,
}

/// Per-strobe transition probabilities of the four-region return map.
///
/// Each `r_k` is the fraction of points in region `k` whose successor
/// lies in the next region along the clockwise cycle
/// `I -> II -> IV -> I`, `III -> IV`:
///
/// * `r1`: I to II
/// * `r2`: II to IV
/// * `r3`: III to IV
/// * `r4`: IV to I
///
/// Points are counted only when they have a successor. `leave_rates`
/// holds the total probability of moving to any other region; for II it is
/// always 1 since consecutive points share a coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRates {
    pub r: [Option<f64>; 4],
    pub region_counts: [usize; 4],
    pub exit_counts: [usize; 4],
    pub leave_counts: [usize; 4],
    pub leave_rates: [Option<f64>; 4],
    pub sub_rates: SubRates,
    /// `[from][to]` transition counts.
    pub transitions: [[usize; 4]; 4],
    pub r3_low_confidence: bool,
}

const TARGET: [Region; 4] = [Region::II, Region::IV, Region::IV, Region::I];

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl TransitionRates {
    pub fn r1(&self) -> Option<f64> {
        self.r[0]
    }

    pub fn r2(&self) -> Option<f64> {
        self.r[1]
    }

    pub fn r3(&self) -> Option<f64> {
        self.r[2]
    }

    pub fn r4(&self) -> Option<f64> {
        self.r[3]
    }

    /// `r_k` as an exact fraction of counts, `k` in `1..=4`.
    pub fn exact(&self, k: usize) -> Option<Ratio<i64>> {
        let i = k.checked_sub(1).filter(|&i| i < 4)?;
        (self.region_counts[i] > 0).then(|| Ratio::new(self.exit_counts[i] as i64, self.region_counts[i] as i64))
    }

    /// Check count consistency and the shared-coordinate structure.
    pub fn check_invariants(&self) -> Result<()> {
        for k in 0..4 {
            if self.exit_counts[k] > self.leave_counts[k] || self.leave_counts[k] > self.region_counts[k] {
                return Err(Error::Internal(format!("inconsistent counts for region {}", Region::ALL[k])));
            }
        }
        for from in Region::ALL {
            for to in Region::ALL {
                let n = self.transitions[from.index()][to.index()];
                if n > 0 && !from.can_precede(to) {
                    return Err(Error::Internal(format!("{n} structurally impossible transitions {from} -> {to}")));
                }
            }
        }
        let t = &self.transitions;
        let (ii, iv) = (Region::II.index(), Region::IV.index());
        if t[ii][Region::III.index()] + t[ii][Region::IV.index()] != self.leave_counts[ii]
            || t[iv][Region::I.index()] + t[iv][Region::II.index()] != self.leave_counts[iv]
        {
            return Err(Error::Internal("sub-rate counts do not sum to leave counts".into()));
        }
        Ok(())
    }
}

pub fn transition_rates(map: &ReturnMap) -> Result<TransitionRates> {
    if map.len() < 2 {
        return Err(Error::InsufficientData(format!("{} labeled points, need at least 2", map.len())));
    }
    let mut transitions = [[0usize; 4]; 4];
    for w in map.labels.windows(2) {
        transitions[w[0].index()][w[1].index()] += 1;
    }
    let mut region_counts = [0; 4];
    let mut exit_counts = [0; 4];
    let mut leave_counts = [0; 4];
    for k in 0..4 {
        region_counts[k] = transitions[k].iter().sum();
        exit_counts[k] = transitions[k][TARGET[k].index()];
        leave_counts[k] = region_counts[k] - transitions[k][k];
    }
    let r = std::array::from_fn(|k| ratio(exit_counts[k], region_counts[k]));
    let leave_rates = std::array::from_fn(|k| ratio(leave_counts[k], region_counts[k]));
    let (ii, iv) = (Region::II.index(), Region::IV.index());
    let sub_rates = SubRates {
        ii_to_iii: ratio(transitions[ii][Region::III.index()], region_counts[ii]),
        ii_to_iv: ratio(transitions[ii][Region::IV.index()], region_counts[ii]),
        iv_to_i: ratio(transitions[iv][Region::I.index()], region_counts[iv]),
        iv_to_ii: ratio(transitions[iv][Region::II.index()], region_counts[iv]),
    };
    let rates = TransitionRates {
        r,
        region_counts,
        exit_counts,
        leave_counts,
        leave_rates,
        sub_rates,
        transitions,
        r3_low_confidence: region_counts[Region::III.index()] < R3_LOW_CONFIDENCE,
    };
    rates.check_invariants()?;
    Ok(rates)
}
