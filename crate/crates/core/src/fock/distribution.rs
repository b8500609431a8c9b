use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Photon counts per mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockOutcome(Vec<u32>);

impl FockOutcome {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl From<Vec<u32>> for FockOutcome {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for FockOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All occupation vectors over `modes` modes with exactly `total` photons, in
/// lexicographic order.
pub fn outcomes_with_total(modes: usize, total: u32) -> Vec<FockOutcome> {
    fn fill(prefix: &mut Vec<u32>, modes: usize, left: u32, out: &mut Vec<FockOutcome>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(FockOutcome(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(prefix, modes, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes == 0 {
        return out;
    }
    fill(&mut Vec::with_capacity(modes), modes, total, &mut out);
    out
}

/// All occupation vectors with at most `cutoff` photons, in lexicographic order.
pub fn outcomes_up_to(modes: usize, cutoff: u32) -> Vec<FockOutcome> {
    let mut all: Vec<FockOutcome> = (0..=cutoff).flat_map(|t| outcomes_with_total(modes, t)).collect();
    all.sort();
    all
}

/// Probabilities of the outcomes with at most `cutoff` photons.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    modes: usize,
    cutoff: u32,
    entries: BTreeMap<FockOutcome, f64>,
    mass: f64,
}

impl OutcomeDistribution {
    pub fn new(modes: usize, cutoff: u32, entries: BTreeMap<FockOutcome, f64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::ZeroModes);
        }
        for (o, &p) in &entries {
            if o.modes() != modes {
                return Err(Error::DimensionMismatch(o.modes(), modes));
            }
            if o.total() > cutoff {
                return Err(Error::InvalidArgument(format!("outcome {o} exceeds cutoff {cutoff}")));
            }
            if !(-1e-12..=1.0 + 1e-9).contains(&p) {
                return Err(Error::InvalidArgument(format!("probability {p} of {o} outside [0, 1]")));
            }
        }
        let mass = entries.values().sum();
        Ok(Self {
            modes,
            cutoff,
            entries,
            mass,
        })
    }

    /// Empirical distribution of a sample list. The cutoff is the largest
    /// observed photon total.
    pub fn from_samples(modes: usize, samples: &[FockOutcome]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::NoSamples);
        }
        let mut counts: BTreeMap<FockOutcome, u64> = BTreeMap::new();
        for s in samples {
            *counts.entry(s.clone()).or_default() += 1;
        }
        let n = samples.len() as f64;
        let cutoff = samples.iter().map(FockOutcome::total).max().unwrap_or(0);
        let entries = counts.into_iter().map(|(o, c)| (o, c as f64 / n)).collect();
        Self::new(modes, cutoff, entries)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Total probability captured below the cutoff.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability of `outcome`; zero when absent.
    pub fn probability(&self, outcome: &FockOutcome) -> f64 {
        self.entries.get(outcome).copied().unwrap_or(0.0)
    }

    /// Entries in lexicographic outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockOutcome, f64)> {
        self.entries.iter().map(|(o, &p)| (o, p))
    }

    /// Probability mass per photon-number sector `0..=cutoff`.
    pub fn sector_masses(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cutoff as usize + 1];
        for (o, &p) in &self.entries {
            out[o.total() as usize] += p;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_and_order() {
        // C(t + m - 1, m - 1) outcomes per sector
        assert_eq!(outcomes_with_total(3, 4).len(), 15);
        assert_eq!(outcomes_up_to(3, 6).len(), 84);
        let two = outcomes_up_to(2, 2);
        let got: Vec<Vec<u32>> = two.iter().map(|o| o.occupations().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn empirical_distribution() {
        let s: Vec<FockOutcome> = [[0, 0], [1, 1], [0, 0], [2, 0]].iter().map(|v| FockOutcome::new(v.to_vec())).collect();
        let d = OutcomeDistribution::from_samples(2, &s).unwrap();
        assert_eq!(d.cutoff(), 2);
        assert_eq!(d.probability(&FockOutcome::vacuum(2)), 0.5);
        assert_eq!(d.probability(&FockOutcome::new(vec![0, 2])), 0.0);
        assert!((d.mass() - 1.0).abs() < 1e-15);
        assert_eq!(d.sector_masses(), vec![0.5, 0.0, 0.5]);
    }

    #[test]
    fn rejects_bad_entries() {
        let mut e = BTreeMap::new();
        e.insert(FockOutcome::new(vec![3, 0]), 0.1);
        assert!(OutcomeDistribution::new(2, 2, e.clone()).is_err());
        assert!(OutcomeDistribution::new(3, 5, e).is_err());
        let mut e = BTreeMap::new();
        e.insert(FockOutcome::new(vec![0, 0]), 1.5);
        assert!(OutcomeDistribution::new(2, 2, e).is_err());
    }
}
