use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{h_bracket, GapError, HBracket, Rational};
use crate::carpet::{DigitSet, PredictedExponent};
use crate::grid::Caps;

/// Minimum number of tight samples for a fit.
pub const MIN_SAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for an exact fit.
    pub stderr: f64,
}

/// Ordinary least squares of `y` against `x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, GapError> {
    let n = points.len();
    if n < 2 {
        return Err(GapError::TooFewTightSamples { tight: n, needed: 2 });
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx <= f64::EPSILON * mean_x.abs().max(1.0) {
        return Err(GapError::DegenerateSamples);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let stderr = if n > 2 {
        let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(PowerLawFit { slope, intercept, stderr })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub fitted_gamma: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub tight_samples: usize,
    pub samples: Vec<HBracket>,
    pub predicted: PredictedExponent,
    /// `|fitted - predicted| / predicted` when a prediction exists.
    pub relative_error: Option<f64>,
}

/// Slope of `log h` against `log(1/δ)`, using the geometric mean of each
/// bracket and only brackets with `h_high / h_low <= 2`.
pub fn fit_h_exponent(samples: &[HBracket], predicted: Option<PredictedExponent>) -> Result<ExponentReport, GapError> {
    let points: Vec<(f64, f64)> =
        samples.iter().filter(|b| b.is_tight()).map(|b| (-b.delta.ln(), b.geometric_mean().ln())).collect();
    if points.len() < MIN_SAMPLES {
        return Err(GapError::TooFewTightSamples { tight: points.len(), needed: MIN_SAMPLES });
    }
    let fit = fit_power_law(&points)?;
    let predicted = predicted.unwrap_or(PredictedExponent::UNDEFINED);
    let relative_error = predicted.gamma.map(|g| (fit.slope - g).abs() / g);
    Ok(ExponentReport {
        fitted_gamma: fit.slope,
        stderr: fit.stderr,
        intercept: fit.intercept,
        tight_samples: points.len(),
        samples: samples.to_vec(),
        predicted,
        relative_error,
    })
}

/// `δ_k = base^-k` sampled at level `L = level_scale * k + level_offset`
/// for `k = k_min..=k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSchedule {
    pub base: u64,
    pub k_min: u32,
    pub k_max: u32,
    pub level_scale: u32,
    pub level_offset: u32,
}

impl SampleSchedule {
    pub fn points(&self) -> Vec<(Rational, u32)> {
        (self.k_min..=self.k_max)
            .map(|k| (Rational::inverse_power(self.base, k), self.level_scale * k + self.level_offset))
            .collect()
    }
}

pub fn collect_samples(ds: &DigitSet, schedule: &SampleSchedule, caps: &Caps) -> Result<Vec<HBracket>, GapError> {
    schedule.points().iter().map(|(delta, level)| h_bracket(ds, *level, delta, caps)).collect()
}

/// CSV with columns `delta_num,delta_den,h_low,h_high,L`.
pub fn samples_csv(samples: &[HBracket]) -> String {
    let mut out = String::from("delta_num,delta_den,h_low,h_high,L\n");
    for b in samples {
        writeln!(out, "{},{},{},{},{}", b.delta.numer(), b.delta.denom(), b.h_low, b.h_high, b.level).unwrap();
    }
    out
}
