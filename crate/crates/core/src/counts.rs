//! Shot histograms and their normalized probability view.
//!
//! Bitstrings put bit 0 in the rightmost character.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest bitstring width accepted from JSON input.
pub const MAX_KEY_BITS: usize = 128;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountsError {
    #[error("bitstring `{0}` contains characters other than 0/1")]
    BadBitstring(String),
    #[error("bitstring `{key}` has {got} bits, expected {expected}")]
    MixedWidth { key: String, expected: usize, got: usize },
    #[error("bitstring width {0} exceeds the {MAX_KEY_BITS}-bit limit")]
    TooWide(usize),
    #[error("counts sum to {sum} but shots = {shots}")]
    ShotMismatch { sum: u64, shots: u64 },
    #[error("distribution has zero shots")]
    ZeroShots,
    #[error("probability for `{key}` is {value}, expected a finite value in [0, 1]")]
    BadProbability { key: String, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid counts JSON: {0}")]
    Json(String),
}

pub fn bitstring(index: usize, n_bits: usize) -> String {
    format!("{index:0n_bits$b}")
}

fn check_key(key: &str, n_bits: Option<usize>) -> Result<usize, CountsError> {
    if key.is_empty() || !key.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(CountsError::BadBitstring(key.to_string()));
    }
    if key.len() > MAX_KEY_BITS {
        return Err(CountsError::TooWide(key.len()));
    }
    match n_bits {
        Some(expected) if expected != key.len() => {
            Err(CountsError::MixedWidth { key: key.to_string(), expected, got: key.len() })
        }
        _ => Ok(key.len()),
    }
}

/// Bitstring → shot count. Counts always sum to `shots`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsDistribution {
    n_bits: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct CountsJson {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl CountsDistribution {
    pub fn new(n_bits: usize, counts: BTreeMap<String, u64>) -> Result<Self, CountsError> {
        for key in counts.keys() {
            check_key(key, Some(n_bits))?;
        }
        let shots = counts
            .values()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(CountsError::ShotMismatch { sum: u64::MAX, shots: u64::MAX })?;
        Ok(CountsDistribution { n_bits, shots, counts })
    }

    /// Accumulate from basis-state indices.
    pub fn from_outcomes(n_bits: usize, outcomes: impl IntoIterator<Item = usize>) -> Self {
        let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
        for o in outcomes {
            *tally.entry(o).or_insert(0) += 1;
        }
        let shots = tally.values().sum();
        let counts = tally.into_iter().map(|(k, v)| (bitstring(k, n_bits), v)).collect();
        CountsDistribution { n_bits, shots, counts }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn probabilities(&self) -> Result<Distribution, CountsError> {
        Distribution::try_from(self)
    }

    pub fn to_json(&self) -> String {
        let raw = CountsJson { shots: self.shots, counts: self.counts.clone() };
        serde_json::to_string_pretty(&raw).expect("counts serialize")
    }

    pub fn from_json(src: &str) -> Result<Self, CountsError> {
        let raw: CountsJson = serde_json::from_str(src).map_err(|e| CountsError::Json(e.to_string()))?;
        let mut width = None;
        for key in raw.counts.keys() {
            width = Some(check_key(key, width)?);
        }
        let sum = raw.counts.values().try_fold(0u64, |acc, &c| acc.checked_add(c));
        match sum {
            Some(sum) if sum == raw.shots => {}
            other => return Err(CountsError::ShotMismatch { sum: other.unwrap_or(u64::MAX), shots: raw.shots }),
        }
        Ok(CountsDistribution { n_bits: width.unwrap_or(0), shots: raw.shots, counts: raw.counts })
    }
}

/// Normalized probability view of a distribution over fixed-width bitstrings.
///
/// `shots` is kept when the distribution came from sampling; analytic
/// distributions carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n_bits: usize,
    shots: Option<u64>,
    probs: BTreeMap<String, f64>,
}

impl Distribution {
    pub fn new(n_bits: usize, probs: BTreeMap<String, f64>) -> Result<Self, CountsError> {
        let mut total = 0.0;
        for (key, &p) in &probs {
            check_key(key, Some(n_bits))?;
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(CountsError::BadProbability { key: key.clone(), value: p });
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(CountsError::NotNormalized(total));
        }
        Ok(Distribution { n_bits, shots: None, probs })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn shots(&self) -> Option<u64> {
        self.shots
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn get(&self, key: &str) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }
}

impl TryFrom<&CountsDistribution> for Distribution {
    type Error = CountsError;

    fn try_from(c: &CountsDistribution) -> Result<Self, Self::Error> {
        if c.shots == 0 {
            return Err(CountsError::ZeroShots);
        }
        let total = c.shots as f64;
        let probs = c.counts.iter().map(|(k, &v)| (k.clone(), v as f64 / total)).collect();
        Ok(Distribution { n_bits: c.n_bits, shots: Some(c.shots), probs })
    }
}
