//! Decoding shot counts back into frequencies and aggregating statistics.
//!
//! The raw empirical value `N1/N` estimates `|c1|^2 = sin^2(pi f/2)`, so
//! the encoded frequency is recovered with the arcsine correction
//! `f = (2/pi) asin(sqrt(raw))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sampler::ShotResult;

/// The arcsine correction `(2/pi) asin(sqrt(raw))`.
///
/// The argument is clamped to `[0, 1]` to guard against floating spill, and
/// the endpoints map to exactly 0 and 1.
pub fn arcsin_correction(raw: f64) -> f64 {
    let clamped = raw.clamp(0.0, 1.0);
    (2.0 * clamped.sqrt().asin()) / PI
}

/// A decoded measurement: the raw empirical `|c1|^2` and the corrected
/// frequency estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodedFrequency {
    raw: f64,
    corrected: f64,
}

impl DecodedFrequency {
    /// Empirical `N1/N`.
    pub fn raw(&self) -> f64 {
        self.raw
    }

    /// Arcsine-corrected frequency estimate.
    pub fn corrected(&self) -> f64 {
        self.corrected
    }
}

/// Converts shot counts into raw and corrected frequency estimates.
pub fn decode(shots: &ShotResult) -> DecodedFrequency {
    let raw = shots.n1() as f64 / shots.n_shots() as f64;
    DecodedFrequency {
        raw,
        corrected: arcsin_correction(raw),
    }
}

/// Absolute decoding error against the corrected estimate.
pub fn decoding_error(true_f1: f64, decoded: &DecodedFrequency) -> f64 {
    (true_f1 - decoded.corrected()).abs()
}

/// Aggregated statistics over repeated decodings of the same window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunStatistics {
    pub mean_raw: f64,
    pub std_raw: f64,
    pub mean_corrected: f64,
    pub std_corrected: f64,
    /// Absolute error of the mean corrected frequency.
    pub eps: f64,
    /// Absolute error of the mean raw frequency (no correction applied).
    pub eps_raw: f64,
    pub n_reps: usize,
}

/// Sample mean and sample standard deviation (n-1 denominator; zero for a
/// single run) of the raw and corrected series, with errors of the means
/// against the true frequency.
pub fn aggregate(runs: &[DecodedFrequency], true_f1: f64) -> Result<RunStatistics> {
    if runs.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot aggregate an empty run list".into(),
        ));
    }
    let n = runs.len();
    let (mean_raw, std_raw) = mean_and_std(runs.iter().map(|r| r.raw()), n);
    let (mean_corrected, std_corrected) = mean_and_std(runs.iter().map(|r| r.corrected()), n);
    Ok(RunStatistics {
        mean_raw,
        std_raw,
        mean_corrected,
        std_corrected,
        eps: (true_f1 - mean_corrected).abs(),
        eps_raw: (true_f1 - mean_raw).abs(),
        n_reps: n,
    })
}

fn mean_and_std(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let sum_sq: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (sum_sq / (n - 1) as f64).sqrt())
}
