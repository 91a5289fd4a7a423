//! Descriptive statistics: sample kurtosis and the Jarque-Bera normality
//! test (standard form; the statistic is asymptotically chi-square with two
//! degrees of freedom).

use super::{EstimationError, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DescriptiveStats {
    /// Fourth standardized moment (3 under normality).
    pub kurtosis: f64,
    pub skewness: f64,
    pub jarque_bera: f64,
    /// Asymptotic chi-square(2) p-value of the JB statistic.
    pub p_value: f64,
}

pub fn descriptive_stats(series: &[f64]) -> Result<DescriptiveStats> {
    let n = series.len();
    if n < 20 {
        return Err(EstimationError::TooFewObservations { needed: 20, got: n });
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let m2 = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    if !(m2 > 0.0) {
        return Err(EstimationError::DegenerateSeries);
    }
    let m3 = series.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / nf;
    let m4 = series.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jb = nf / 6.0 * (skewness * skewness + (kurtosis - 3.0).powi(2) / 4.0);
    Ok(DescriptiveStats {
        kurtosis,
        skewness,
        jarque_bera: jb,
        p_value: (-jb / 2.0).exp(),
    })
}
