use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::strobe::StrobedPhases;
use crate::circular::{circular_mean, wrap, Angle};
use crate::error::{Error, Result};

/// Quadrant of the recentered return map, numbered clockwise from the
/// synchronized region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// Both coordinates in sync.
    I,
    /// In sync, then out.
    II,
    /// Out, then out.
    III,
    /// Out, then back in.
    IV,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::I, Region::II, Region::III, Region::IV];

    pub fn from_flags(first_in: bool, second_in: bool) -> Self {
        match (first_in, second_in) {
            (true, true) => Region::I,
            (true, false) => Region::II,
            (false, false) => Region::III,
            (false, true) => Region::IV,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Whether `self -> next` can occur between consecutive points, which
    /// share a coordinate.
    pub fn can_precede(self, next: Region) -> bool {
        let second_in = matches!(self, Region::I | Region::IV);
        let next_first_in = matches!(next, Region::I | Region::II);
        second_in == next_first_in
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPartition {
    pub psi_star: Angle,
}

impl RegionPartition {
    pub fn new(psi_star: Angle) -> Self {
        Self { psi_star }
    }

    /// Shift so the preferred angle sits at `pi/2`.
    pub fn recenter(&self, phi: f64) -> f64 {
        wrap(phi - self.psi_star.value() + FRAC_PI_2)
    }
}

/// In sync means the recentered angle lies in `[0, pi)`.
#[inline]
pub fn in_sync(chi: f64) -> bool {
    (0.0..PI).contains(&chi)
}

/// Preferred locking angle as the circular mean of all strobed samples.
pub fn fit_partition(samples: &StrobedPhases) -> Result<RegionPartition> {
    let stats = circular_mean(&samples.samples)?;
    Ok(RegionPartition { psi_star: stats.mean_angle })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnMap {
    /// Consecutive recentered pairs `(chi_k, chi_{k+1})`.
    pub points: Vec<(f64, f64)>,
    pub labels: Vec<Region>,
}

impl ReturnMap {
    /// Map from an already recentered sequence.
    pub fn from_recentered(chi: &[f64]) -> Result<Self> {
        if chi.len() < 2 {
            return Err(Error::InsufficientData(format!("{} samples, need at least 2", chi.len())));
        }
        if let Some(&bad) = chi.iter().find(|v| !(0.0..std::f64::consts::TAU).contains(*v)) {
            return Err(Error::Domain { value: bad, domain: "[0, 2pi)" });
        }
        let points: Vec<(f64, f64)> = chi.windows(2).map(|w| (w[0], w[1])).collect();
        let labels = points.iter().map(|&(a, b)| Region::from_flags(in_sync(a), in_sync(b))).collect();
        Ok(Self { points, labels })
    }

    pub fn from_labels_unchecked(labels: Vec<Region>) -> Self {
        Self { points: Vec::new(), labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,chi_k,chi_k1,region")?;
        for (k, ((a, b), r)) in self.points.iter().zip(&self.labels).enumerate() {
            writeln!(w, "{k},{a:?},{b:?},{r}")?;
        }
        Ok(())
    }
}

pub fn build_return_map(samples: &StrobedPhases, part: &RegionPartition) -> Result<ReturnMap> {
    let chi: Vec<f64> = samples.samples.iter().map(|&p| part.recenter(p)).collect();
    ReturnMap::from_recentered(&chi)
}

/// Recentered angle for a map phase difference `theta` in `[-1, 1)`, with
/// the in-sync half-width `1/2` around `center`. Equivalent to the affine
/// phase `pi (theta + 1)` with preferred angle `pi (center + 1)`.
pub fn tent_recentered(theta: f64, center: f64) -> f64 {
    wrap(PI * (theta - center) + FRAC_PI_2)
}

/// Return map built from every iterate of a map phase difference.
pub fn tent_return_map(theta: &[f64], center: f64) -> Result<ReturnMap> {
    let chi: Vec<f64> = theta.iter().map(|&t| tent_recentered(t, center)).collect();
    ReturnMap::from_recentered(&chi)
}
