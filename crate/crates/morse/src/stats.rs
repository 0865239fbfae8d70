//! Monte Carlo statistics over random 2-adic points.
//!
//! Digits of a random point are iid fair bits, so the first repeat
//! position, every later gap between repeat positions, and the bit
//! length of the jump magnitude all follow the law `P(k) = 2^{-k}`,
//! and the gaps are independent of the first position. The sampler
//! measures all of these and reports normal-approximation z-scores per
//! bin, which the verification layer compares against a 3-sigma band.

use serde::Serialize;

use crate::dyadic::{self, Dyadic};
use crate::morse_map::{a_seq, first_repeat};

/// Digits scanned per sample before giving up; `P(abort)` is about
/// `2^{-budget/2}` per sample.
const SCAN_BUDGET: u64 = 4096;

/// How many repeat positions are collected per sample (first position
/// plus five gaps).
const REPEATS_PER_SAMPLE: usize = 6;

/// A reproducible random point: empty prefix, all digits from `seed`.
pub fn sample_point(seed: u64) -> Dyadic {
    Dyadic::streamed(Vec::new(), seed)
}

/// Seed of the `j`-th sample of a run keyed by `seed0`.
pub fn sample_seed(seed0: u64, j: u64) -> u64 {
    dyadic::stream_word(seed0, j)
}

#[derive(Debug, Clone, Serialize)]
pub struct BinStat {
    pub k: u32,
    pub count: u64,
    pub freq: f64,
    pub expected: f64,
    /// `(count - N p) / sqrt(N p (1 - p))`.
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub name: String,
    /// Number of observations behind the bins.
    pub observations: u64,
    pub bins: Vec<BinStat>,
    pub max_abs_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RDistributionReport {
    pub samples: u64,
    pub aborted: u64,
    pub kmax: u32,
    pub laws: Vec<LawReport>,
    /// z-score (`corr * sqrt(N)`) of the sample correlation between the
    /// first repeat position and the first gap; should be small.
    pub gap_correlation_z: f64,
}

fn law_report(name: &str, counts: &[u64], kmax: u32, n: u64) -> LawReport {
    let mut bins = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for k in 1..=kmax {
        let count = counts.get(k as usize).copied().unwrap_or(0);
        let p = 0.5f64.powi(k as i32);
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        let z = (count as f64 - mean) / sd;
        max_abs_z = max_abs_z.max(z.abs());
        bins.push(BinStat {
            k,
            count,
            freq: count as f64 / n as f64,
            expected: p,
            z,
        });
    }
    LawReport {
        name: name.to_string(),
        observations: n,
        bins,
        max_abs_z,
    }
}

/// Sample `samples` random points and tally the repeat-position laws
/// up to `kmax`. Deterministic in `(samples, kmax, seed0)`.
pub fn r_distribution(samples: u64, kmax: u32, seed0: u64) -> RDistributionReport {
    assert!((1..=40).contains(&kmax));
    let bin_len = kmax as usize + 1;
    let mut first = vec![0u64; bin_len];
    let mut gaps = vec![0u64; bin_len];
    let mut jump_bits = vec![0u64; bin_len];
    let mut aborted = 0u64;
    let mut used = 0u64;
    // accumulators for corr(r_1, r_2 - r_1)
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0f64, 0f64, 0f64, 0f64, 0f64);

    for j in 0..samples {
        let x = sample_point(sample_seed(seed0, j));
        let mut repeats: Vec<u64> = Vec::with_capacity(REPEATS_PER_SAMPLE);
        let mut prev = x.bit(1);
        for i in 1..SCAN_BUDGET {
            let cur = x.bit(i + 1);
            if cur == prev {
                repeats.push(i);
                if repeats.len() == REPEATS_PER_SAMPLE {
                    break;
                }
            }
            prev = cur;
        }
        if repeats.len() < REPEATS_PER_SAMPLE {
            aborted += 1;
            continue;
        }
        used += 1;
        let params = first_repeat(&x).expect("repeat found within budget");
        assert_eq!(params.r, repeats[0]);
        let r1 = repeats[0];
        if r1 <= kmax as u64 {
            first[r1 as usize] += 1;
        }
        for w in repeats.windows(2) {
            let d = w[1] - w[0];
            if d <= kmax as u64 {
                gaps[d as usize] += 1;
            }
        }
        let bits = a_seq(r1).bits();
        if bits <= kmax as u64 {
            jump_bits[bits as usize] += 1;
        }
        let (xv, yv) = (r1 as f64, (repeats[1] - repeats[0]) as f64);
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        syy += yv * yv;
        sxy += xv * yv;
    }

    let n = used as f64;
    let cov = sxy / n - (sx / n) * (sy / n);
    let vx = sxx / n - (sx / n) * (sx / n);
    let vy = syy / n - (sy / n) * (sy / n);
    let corr = cov / (vx * vy).sqrt();
    let gap_correlation_z = corr * n.sqrt();

    let laws = vec![
        law_report("first-repeat", &first, kmax, used),
        law_report(
            "repeat-gaps",
            &gaps,
            kmax,
            used * (REPEATS_PER_SAMPLE as u64 - 1),
        ),
        law_report("jump-bit-length", &jump_bits, kmax, used),
    ];
    RDistributionReport {
        samples,
        aborted,
        kmax,
        laws,
        gap_correlation_z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = r_distribution(2000, 8, 17);
        let b = r_distribution(2000, 8, 17);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = r_distribution(2000, 8, 18);
        assert_ne!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&c).unwrap()
        );
    }

    #[test]
    fn laws_within_band() {
        let report = r_distribution(200_000, 10, 0xC0FFEE);
        assert_eq!(report.aborted, 0);
        for law in &report.laws {
            assert!(law.max_abs_z < 4.0, "{}: {:?}", law.name, law.bins);
        }
        assert!(report.gap_correlation_z.abs() < 4.0);
    }

    #[test]
    fn frequencies_halve() {
        let report = r_distribution(100_000, 6, 42);
        let bins = &report.laws[0].bins;
        assert!((bins[0].freq - 0.5).abs() < 0.01);
        assert!((bins[1].freq - 0.25).abs() < 0.01);
        assert!((bins[2].freq - 0.125).abs() < 0.01);
    }

    #[test]
    fn sample_point_is_reproducible() {
        let a = sample_point(99);
        let b = sample_point(99);
        assert_eq!(a.digits(256), b.digits(256));
    }

    #[test]
    fn golden_digits() {
        // frozen once; a change here means the generator is no longer
        // bit-compatible across platforms or versions
        let golden: [u8; 64] = [
            0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1,
            1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 0,
            0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 0, 0,
        ];
        assert_eq!(sample_point(0x5EED).digits(64), golden);
    }
}
