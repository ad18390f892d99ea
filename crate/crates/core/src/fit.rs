//! Least-squares fits used to turn measured deviations into rates and
//! constants.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Floor applied to deviations before taking logarithms.
pub const DEVIATION_FLOOR: f64 = 1e-15;

const MIN_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`. Perfectly flat data
/// reports `r2 = 1`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(LineFit { slope, intercept, r2 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub theta: f64,
    pub eta: f64,
    pub r2: f64,
}

/// Fits `deviation ≈ η e^{−θ s}` on `(s, deviation)` samples.
pub fn fit_rates(samples: &[(usize, f64)]) -> Result<RateFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0 as f64).collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|s| math::ln(s.1.max(DEVIATION_FLOOR)))
        .collect();
    let line = linear_fit(&xs, &ys)?;
    Ok(RateFit {
        theta: -line.slope,
        eta: math::exp(line.intercept),
        r2: line.r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzFit {
    pub constant: f64,
    pub r2: f64,
}

/// Zero-intercept fit `max_deviation ≈ L·δ`; `r2` is measured about the mean.
pub fn fit_lipschitz(samples: &[(f64, f64)]) -> Result<LipschitzFit> {
    if samples.len() < MIN_SAMPLES - 1 {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES - 1,
            got: samples.len(),
        });
    }
    let sxx: f64 = samples.iter().map(|(d, _)| d * d).sum();
    let sxy: f64 = samples.iter().map(|(d, m)| d * m).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let constant = sxy / sxx;
    let mean = samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64;
    let ss_tot: f64 = samples.iter().map(|(_, m)| (m - mean) * (m - mean)).sum();
    let ss_res: f64 = samples
        .iter()
        .map(|(d, m)| (m - constant * d) * (m - constant * d))
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LipschitzFit { constant, r2 })
}
