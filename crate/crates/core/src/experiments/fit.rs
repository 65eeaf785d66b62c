//! Log-log power-law fitting: ordinary least squares on (log x, log y).

use crate::error::{Error, Result};

/// Result of fitting log y = slope * log x + intercept by ordinary least
/// squares. `points` stores the fitted (log x, log y) pairs so every verdict
/// derived from the slope can be recomputed from the serialized data alone.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub stderr: f64,
    /// Coefficient of determination in [0, 1].
    pub r2: f64,
    /// The (log x, log y) pairs the fit was computed from.
    pub points: Vec<(f64, f64)>,
}

/// Fit a power law y ~ c x^slope through points with positive coordinates.
/// Requires at least 4 points; errors on nonpositive or nonfinite input.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::config(format!(
            "power-law fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!(
                "power-law fit needs positive finite coordinates, got ({x}, {y})"
            )));
        }
        logs.push((x.ln(), y.ln()));
    }
    fit_logs(logs)
}

/// OLS on already-logged coordinates.
pub fn fit_logs(logs: Vec<(f64, f64)>) -> Result<FitResult> {
    let n = logs.len();
    if n < 4 {
        return Err(Error::config(format!("power-law fit needs at least 4 points, got {n}")));
    }
    let nf = n as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::domain("power-law fit needs at least two distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = logs
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    // constant data fits exactly: report r2 = 1 rather than 0/0
    let r2 = if syy <= f64::EPSILON * nf * (my * my).max(1.0) {
        1.0
    } else {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    };
    let stderr = (ssr / ((n - 2) as f64) / sxx).max(0.0).sqrt();
    Ok(FitResult { slope, intercept, stderr, r2, points: logs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_square_law() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, (i * i) as f64)).collect();
        let fit = fit_loglog(&pts).unwrap();
        assert_relative_eq!(fit.slope, 2.0, max_relative = 1e-12);
        assert_relative_eq!(fit.r2, 1.0, max_relative = 1e-12);
        assert!(fit.stderr < 1e-10);
        assert_eq!(fit.points.len(), 6);
    }

    #[test]
    fn constant_data_has_zero_slope() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 3.5)).collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-14);
        assert_relative_eq!(fit.r2, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn noisy_three_halves_law() {
        // deterministic multiplicative "noise" of amplitude 1%
        let pts: Vec<(f64, f64)> = (1..=9)
            .map(|i| {
                let x = 2.0f64.powi(i);
                let noise = 1.0 + 0.01 * ((i * 37 % 11) as f64 / 11.0 - 0.5);
                (x, x.powf(1.5) * noise)
            })
            .collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope - 1.5).abs() < 0.05, "slope {}", fit.slope);
        assert!(fit.r2 > 0.999);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0), (4.0, 4.0)]).is_err());
        assert!(fit_loglog(&[(0.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)]).is_err());
        // all abscissae equal
        assert!(fit_loglog(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0), (2.0, 4.0)]).is_err());
    }
}
