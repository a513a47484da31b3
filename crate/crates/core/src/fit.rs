//! Least-squares log-log fits shared by the growth, interval and rd profiles.

/// Result of a straight-line fit `y ~ slope * x + intercept`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `y`.
    pub rms_residual: f64,
}

/// Ordinary least squares on the given points. Returns `None` when fewer
/// than two distinct abscissae are available.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Fits `ln value ~ slope * ln x` over the upper half of the radius range,
/// the window `r in [ceil(r_max/2), r_max]`. Zero values are skipped.
pub fn loglog_upper_window(values: &[(u32, f64)]) -> Option<LineFit> {
    let r_max = values.iter().map(|v| v.0).max()?;
    let lo = r_max.div_ceil(2);
    let pts: Vec<(f64, f64)> = values
        .iter()
        .filter(|(r, v)| *r >= lo && *r >= 1 && *v > 0.0)
        .map(|(r, v)| ((*r as f64).ln(), v.ln()))
        .collect();
    fit_line(&pts)
}

/// Fits `ln value ~ slope * ln(1 + r)` over all provided radii.
pub fn loglog_shifted(values: &[(u32, f64)]) -> Option<LineFit> {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|(r, v)| (((1 + *r) as f64).ln(), v.ln()))
        .collect();
    fit_line(&pts)
}

/// Same shifted fit restricted to the upper half window.
pub fn loglog_shifted_upper_window(values: &[(u32, f64)]) -> Option<LineFit> {
    let r_max = values.iter().map(|v| v.0).max()?;
    let lo = r_max.div_ceil(2);
    let pts: Vec<(f64, f64)> = values
        .iter()
        .filter(|(r, v)| *r >= lo && *v > 0.0)
        .map(|(r, v)| (((1 + *r) as f64).ln(), v.ln()))
        .collect();
    fit_line(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let pts: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect();
        let fit = fit_line(&pts).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!(fit.rms_residual < 1e-12);
    }

    #[test]
    fn window_excludes_small_radii() {
        // v(r) = r^2 exactly for large r, garbage at r <= 5
        let vals: Vec<(u32, f64)> = (1..=12)
            .map(|r| (r, if r <= 5 { 999.0 } else { (r as f64).powi(2) }))
            .collect();
        let fit = loglog_upper_window(&vals).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9);
    }
}
