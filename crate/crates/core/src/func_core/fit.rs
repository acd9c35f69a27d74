use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `value ~ coefficient * scale^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

/// Fewest points accepted by [`fit_power_law`].
pub const MIN_FIT_POINTS: usize = 4;
/// Smallest accepted ratio between the largest and smallest scale.
pub const MIN_SCALE_RATIO: f64 = 8.0;

/// Straight-line fit in log-log coordinates; the slope is the exponent.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit> {
    for &(s, v) in points {
        if !(s > 0.0 && v > 0.0) || !s.is_finite() || !v.is_finite() {
            return Err(Error::NonPositiveFitInput { scale: s, value: v });
        }
    }
    let span =
        points.iter().map(|p| p.0).fold(0.0, f64::max) / points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if points.len() < MIN_FIT_POINTS || !(span >= MIN_SCALE_RATIO * (1.0 - 1e-12)) {
        return Err(Error::DegenerateSpan { need: MIN_FIT_POINTS, ratio: MIN_SCALE_RATIO });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot <= f64::EPSILON * n { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(PowerFit { exponent: slope, coefficient: intercept.exp(), r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_inverse_law() {
        let pts: Vec<_> = (1..=4).map(|k| (10f64.powi(-k), 9.0 * 10f64.powi(k))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 1.0).abs() < 0.01);
        assert!((fit.coefficient - 9.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_data() {
        let pts: Vec<_> = (1..=4).map(|k| (10f64.powi(-k), 7.0)).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!(fit.exponent.abs() < 0.01);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn us_family_fourth_derivative_rate() {
        // u_s''''(0) = 9/s, from the binomial series of (x^2 + s^2)^{3/2}.
        let pts: Vec<_> = [0.1, 0.05, 0.025, 0.0125].iter().map(|&s| (s, 9.0 / s)).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 1.0).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (0.1, -1.0), (0.01, 1.0), (0.001, 1.0)]),
            Err(Error::NonPositiveFitInput { .. })
        ));
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (0.9, 1.0), (0.8, 1.0), (0.7, 1.0)]),
            Err(Error::DegenerateSpan { .. })
        ));
        assert!(matches!(fit_power_law(&[(1.0, 1.0), (0.01, 1.0)]), Err(Error::DegenerateSpan { .. })));
    }

    proptest! {
        #[test]
        fn recovers_exponent_under_noise(
            p in -5.0f64..5.0,
            c in 0.01f64..100.0,
            noise in prop::collection::vec(-0.01f64..0.01, 12),
        ) {
            let pts: Vec<(f64, f64)> = noise
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let s = 10f64.powf(-3.0 * i as f64 / 11.0);
                    (s, c * s.powf(p) * (1.0 + e))
                })
                .collect();
            let fit = fit_power_law(&pts).unwrap();
            prop_assert!((fit.exponent - p).abs() < 0.05);
        }
    }
}
