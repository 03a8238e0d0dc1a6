//! Divergences between two output distributions over the union of their
//! supports. KL and JS are in bits.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counts::{CountsDistribution, Distribution};

/// Smoothing used when neither side carries a shot count.
pub const FALLBACK_EPSILON: f64 = 1e-12;

pub const METRIC_CSV_HEADER: [&str; 9] = ["family", "n", "shots", "seed", "tvd", "kl", "js", "hellinger", "eps"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distribution has zero shots")]
    ZeroShots,
    #[error("bitstring widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("smoothing epsilon {0} must be finite and positive")]
    BadEpsilon(f64),
}

/// Anything that can be read as normalized probabilities over bitstrings.
pub trait ProbabilityView {
    fn n_bits(&self) -> usize;
    fn shots(&self) -> Option<u64>;
    fn probability_map(&self) -> Result<Cow<'_, BTreeMap<String, f64>>, MetricError>;
}

impl ProbabilityView for CountsDistribution {
    fn n_bits(&self) -> usize {
        CountsDistribution::n_bits(self)
    }

    fn shots(&self) -> Option<u64> {
        Some(CountsDistribution::shots(self))
    }

    fn probability_map(&self) -> Result<Cow<'_, BTreeMap<String, f64>>, MetricError> {
        let total = CountsDistribution::shots(self);
        if total == 0 {
            return Err(MetricError::ZeroShots);
        }
        Ok(Cow::Owned(self.counts().iter().map(|(k, &c)| (k.clone(), c as f64 / total as f64)).collect()))
    }
}

impl ProbabilityView for Distribution {
    fn n_bits(&self) -> usize {
        Distribution::n_bits(self)
    }

    fn shots(&self) -> Option<u64> {
        Distribution::shots(self)
    }

    fn probability_map(&self) -> Result<Cow<'_, BTreeMap<String, f64>>, MetricError> {
        Ok(Cow::Borrowed(self.probs()))
    }
}

/// Aligned probability vectors over the union support.
struct Aligned {
    p: Vec<f64>,
    q: Vec<f64>,
}

fn align<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(p: &P, q: &Q) -> Result<Aligned, MetricError> {
    if p.n_bits() != q.n_bits() {
        return Err(MetricError::WidthMismatch { left: p.n_bits(), right: q.n_bits() });
    }
    let (pm, qm) = (p.probability_map()?, q.probability_map()?);
    let keys: BTreeSet<&String> = pm.keys().chain(qm.keys()).collect();
    let get = |m: &BTreeMap<String, f64>, k: &String| m.get(k).copied().unwrap_or(0.0);
    Ok(Aligned { p: keys.iter().map(|k| get(&pm, k)).collect(), q: keys.iter().map(|k| get(&qm, k)).collect() })
}

/// `1 / (10 · shots)` using the larger shot count of the pair.
pub fn default_epsilon<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(p: &P, q: &Q) -> f64 {
    match p.shots().max(q.shots()) {
        Some(s) if s > 0 => 1.0 / (10.0 * s as f64),
        _ => FALLBACK_EPSILON,
    }
}

fn plogq_ratio(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * (p / q).log2()
    }
}

pub fn tvd<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(p: &P, q: &Q) -> Result<f64, MetricError> {
    let a = align(p, q)?;
    let d: f64 = a.p.iter().zip(&a.q).map(|(x, y)| (x - y).abs()).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

/// KL(P‖Q) after adding `eps` to every union cell of both and renormalizing.
/// `None` selects [`default_epsilon`].
pub fn kl_divergence<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(
    p: &P,
    q: &Q,
    eps: Option<f64>,
) -> Result<f64, MetricError> {
    let eps = eps.unwrap_or_else(|| default_epsilon(p, q));
    if !(eps.is_finite() && eps > 0.0) {
        return Err(MetricError::BadEpsilon(eps));
    }
    let a = align(p, q)?;
    let norm = 1.0 + eps * a.p.len() as f64;
    let smooth = |x: f64| (x + eps) / norm;
    let kl: f64 = a.p.iter().zip(&a.q).map(|(&x, &y)| plogq_ratio(smooth(x), smooth(y))).sum();
    Ok(kl.max(0.0))
}

pub fn js_divergence<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(
    p: &P,
    q: &Q,
) -> Result<f64, MetricError> {
    let a = align(p, q)?;
    let js: f64 =
        a.p.iter()
            .zip(&a.q)
            .map(|(&x, &y)| {
                let m = 0.5 * (x + y);
                0.5 * plogq_ratio(x, m) + 0.5 * plogq_ratio(y, m)
            })
            .sum();
    Ok(js.clamp(0.0, 1.0))
}

pub fn hellinger<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(p: &P, q: &Q) -> Result<f64, MetricError> {
    let a = align(p, q)?;
    let bc: f64 = a.p.iter().zip(&a.q).map(|(x, y)| (x * y).sqrt()).sum();
    Ok((1.0 - bc).max(0.0).sqrt().min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub tvd: f64,
    pub kl: f64,
    pub js: f64,
    pub hellinger: f64,
    pub support_union_size: usize,
    pub smoothing_epsilon: f64,
}

#[derive(Serialize)]
struct MetricCsvRow<'a> {
    family: &'a str,
    n: usize,
    shots: u64,
    seed: u64,
    tvd: f64,
    kl: f64,
    js: f64,
    hellinger: f64,
    eps: f64,
}

impl MetricReport {
    /// One CSV line (no header, trailing newline) in [`METRIC_CSV_HEADER`] order.
    pub fn to_csv_row(&self, family: &str, n: usize, shots: u64, seed: u64) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.serialize(MetricCsvRow {
            family,
            n,
            shots,
            seed,
            tvd: self.tvd,
            kl: self.kl,
            js: self.js,
            hellinger: self.hellinger,
            eps: self.smoothing_epsilon,
        })
        .expect("in-memory csv write");
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
    }
}

/// All four metrics; KL is taken as KL(P‖Q).
pub fn compare<P: ProbabilityView + ?Sized, Q: ProbabilityView + ?Sized>(
    p: &P,
    q: &Q,
    eps: Option<f64>,
) -> Result<MetricReport, MetricError> {
    let eps_used = eps.unwrap_or_else(|| default_epsilon(p, q));
    let support_union_size = align(p, q)?.p.len();
    Ok(MetricReport {
        tvd: tvd(p, q)?,
        kl: kl_divergence(p, q, Some(eps_used))?,
        js: js_divergence(p, q)?,
        hellinger: hellinger(p, q)?,
        support_union_size,
        smoothing_epsilon: eps_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(&str, f64)]) -> Distribution {
        let n = pairs[0].0.len();
        Distribution::new(n, pairs.iter().map(|&(k, p)| (k.to_string(), p)).collect()).unwrap()
    }

    fn counts(pairs: &[(&str, u64)]) -> CountsDistribution {
        let n = pairs[0].0.len();
        CountsDistribution::new(n, pairs.iter().map(|&(k, c)| (k.to_string(), c)).collect()).unwrap()
    }

    #[test]
    fn worked_values() {
        let uniform = dist(&[("00", 0.25), ("01", 0.25), ("10", 0.25), ("11", 0.25)]);
        let point = dist(&[("00", 1.0)]);
        assert!((tvd(&uniform, &point).unwrap() - 0.75).abs() < 1e-15);

        let p0 = dist(&[("0", 1.0)]);
        let p1 = dist(&[("1", 1.0)]);
        let u2 = dist(&[("0", 0.5), ("1", 0.5)]);
        assert_eq!(tvd(&p0, &p1).unwrap(), 1.0);
        assert!((hellinger(&p0, &p1).unwrap() - 1.0).abs() < 1e-15);
        assert!((js_divergence(&p0, &p1).unwrap() - 1.0).abs() < 1e-15);
        assert!((hellinger(&u2, &p0).unwrap() - (1.0 - 0.5f64.sqrt()).sqrt()).abs() < 1e-15);
        assert!((hellinger(&u2, &p0).unwrap() - 0.5412).abs() < 1e-4);
        assert!((kl_divergence(&p0, &u2, Some(1e-15)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kl_is_asymmetric() {
        let p = dist(&[("0", 0.9), ("1", 0.1)]);
        let q = dist(&[("0", 0.5), ("1", 0.5)]);
        let pq = kl_divergence(&p, &q, Some(1e-15)).unwrap();
        let qp = kl_divergence(&q, &p, Some(1e-15)).unwrap();
        let direct = 0.9 * (0.9f64 / 0.5).log2() + 0.1 * (0.1f64 / 0.5).log2();
        assert!((pq - direct).abs() < 1e-12);
        assert!((pq - qp).abs() > 0.01);
    }

    #[test]
    fn identical_inputs_give_zero() {
        let c = counts(&[("01", 3), ("10", 5)]);
        let r = compare(&c, &c, None).unwrap();
        assert_eq!((r.tvd, r.js), (0.0, 0.0));
        assert!(r.kl.abs() < 1e-12);
        assert!(r.hellinger < 1e-7);
        assert_eq!(r.support_union_size, 2);
        assert!((r.smoothing_epsilon - 1.0 / 80.0).abs() < 1e-18);
    }

    #[test]
    fn counts_and_probabilities_mix() {
        let c = counts(&[("0", 2), ("1", 2)]);
        let d = dist(&[("0", 0.5), ("1", 0.5)]);
        assert_eq!(tvd(&c, &d).unwrap(), 0.0);
        assert_eq!(default_epsilon(&d, &d), FALLBACK_EPSILON);
        assert_eq!(default_epsilon(&d, &c), 1.0 / 40.0);
    }

    #[test]
    fn errors() {
        let empty = CountsDistribution::new(2, BTreeMap::new()).unwrap();
        let c = counts(&[("01", 1)]);
        assert_eq!(tvd(&empty, &c), Err(MetricError::ZeroShots));
        assert_eq!(compare(&c, &empty, None), Err(MetricError::ZeroShots));
        let wide = counts(&[("011", 1)]);
        assert_eq!(hellinger(&c, &wide), Err(MetricError::WidthMismatch { left: 2, right: 3 }));
        assert_eq!(kl_divergence(&c, &c, Some(0.0)), Err(MetricError::BadEpsilon(0.0)));
        assert!(kl_divergence(&c, &c, Some(f64::NAN)).is_err());
    }

    #[test]
    fn csv_row_layout() {
        let r = MetricReport {
            tvd: 0.5,
            kl: 1.0,
            js: 0.25,
            hellinger: 0.125,
            support_union_size: 3,
            smoothing_epsilon: 1e-4,
        };
        assert_eq!(r.to_csv_row("GHZ", 4, 4096, 7), "GHZ,4,4096,7,0.5,1.0,0.25,0.125,0.0001\n");
    }
}
