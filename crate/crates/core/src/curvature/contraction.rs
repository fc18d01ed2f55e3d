//! Mode contraction rates at the Cauchy point and the volume they sweep out.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `N` for which `(2N−1)!!` is accumulated in `u64`.
pub const EXACT_DOUBLE_FACTORIAL_MAX: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionProfile {
    pub n: usize,
    /// `2k − 1` for `k = 1..=N`.
    pub rates: Vec<u64>,
    pub geometric_mean: f64,
    /// `geometric_mean / (2N/e)`.
    pub stirling_ratio: f64,
    /// `½ Σ ln(2k−1) = ½ ln (2N−1)!!`.
    pub volume_ratio_log: f64,
    /// `(2N−1)!!` when it is computed exactly.
    pub double_factorial: Option<u64>,
}

pub fn contraction_profile(n: usize) -> Result<ContractionProfile> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let rates: Vec<u64> = (1..=n as u64).map(|k| 2 * k - 1).collect();
    let log_sum: f64 = rates.iter().map(|&r| (r as f64).ln()).sum();
    let (double_factorial, log_df) = if n <= EXACT_DOUBLE_FACTORIAL_MAX {
        let df: u64 = rates.iter().product();
        // (29)!! < 2^53, so the conversion is exact.
        (Some(df), (df as f64).ln())
    } else {
        (None, log_sum)
    };
    let geometric_mean = (log_sum / n as f64).exp();
    let stirling_ratio = geometric_mean / (2.0 * n as f64 / std::f64::consts::E);
    Ok(ContractionProfile {
        n,
        rates,
        geometric_mean,
        stirling_ratio,
        volume_ratio_log: 0.5 * log_df,
        double_factorial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let c = contraction_profile(1).unwrap();
        assert_eq!(c.rates, vec![1]);
        assert_eq!(c.geometric_mean, 1.0);
        assert_eq!(c.volume_ratio_log, 0.0);

        let c = contraction_profile(3).unwrap();
        assert_eq!(c.double_factorial, Some(15));
        assert_eq!(c.volume_ratio_log, 0.5 * 15f64.ln());

        assert_eq!(contraction_profile(15).unwrap().double_factorial, Some(6_190_283_353_629_375));
        assert!(contraction_profile(16).unwrap().double_factorial.is_none());
        assert!(contraction_profile(0).is_err());
    }

    #[test]
    fn stirling_trend() {
        let r: Vec<f64> = [10, 100, 1000]
            .iter()
            .map(|&n| (contraction_profile(n).unwrap().stirling_ratio - 1.0).abs())
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2]);
        assert!(r[2] < 0.05);
    }
}
