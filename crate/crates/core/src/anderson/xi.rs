//! Correlation length from the decay of fractional moments.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub distance: f64,
    pub moment: f64,
    /// Zero when unknown; all-zero errors give an unweighted fit.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiFit {
    pub s: f64,
    /// Slope of `ln(moment)` against distance.
    pub slope: f64,
    pub slope_stderr: f64,
    pub decaying: bool,
    /// `−s/slope`; `None` when no decay is detected.
    pub xi: Option<f64>,
    /// 95% interval for `ξ`; the upper end is infinite if the slope interval reaches zero.
    pub xi_interval: Option<(f64, f64)>,
    pub points: usize,
}

const Z95: f64 = 1.959_963_984_540_054;

/// Weighted least-squares fit of `ln(moment) = a + slope·distance`.
pub fn correlation_length_fit(points: &[DecayPoint], s: f64) -> Result<XiFit> {
    if !(s > 0.0) {
        return Err(invalid("s must be positive"));
    }
    let mut d: Vec<f64> = points.iter().map(|p| p.distance).collect();
    d.sort_by(f64::total_cmp);
    d.dedup();
    if d.len() < 4 {
        return Err(invalid("need at least four distinct distances"));
    }
    if !(d[0] > 0.0 && d[d.len() - 1] >= 3.0 * d[0]) {
        return Err(invalid("distances must be positive and span a factor of at least 3"));
    }
    if points.iter().any(|p| !(p.moment > 0.0) || !p.moment.is_finite()) {
        return Err(invalid("moments must be positive and finite"));
    }
    let weighted = points.iter().all(|p| p.stderr > 0.0);
    let w: Vec<f64> = points
        .iter()
        .map(|p| if weighted { (p.moment / p.stderr).powi(2) } else { 1.0 })
        .collect();
    let x: Vec<f64> = points.iter().map(|p| p.distance).collect();
    let y: Vec<f64> = points.iter().map(|p| p.moment.ln()).collect();
    let sw: f64 = w.iter().sum();
    let mx = w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = w.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = (0..x.len()).map(|i| w[i] * (x[i] - mx).powi(2)).sum();
    let sxy: f64 = (0..x.len()).map(|i| w[i] * (x[i] - mx) * (y[i] - my)).sum();
    let slope = sxy / sxx;
    let chi2: f64 = (0..x.len())
        .map(|i| w[i] * (y[i] - my - slope * (x[i] - mx)).powi(2))
        .sum();
    let dof = (x.len() - 2) as f64;
    let scale = if weighted { (chi2 / dof).max(1.0) } else { chi2 / dof };
    let slope_stderr = (scale / sxx).sqrt();
    let decaying = slope < 0.0;
    let xi = decaying.then(|| -s / slope);
    let xi_interval = decaying.then(|| {
        let steep = slope - Z95 * slope_stderr;
        let shallow = slope + Z95 * slope_stderr;
        (-s / steep, if shallow < 0.0 { -s / shallow } else { f64::INFINITY })
    });
    Ok(XiFit {
        s,
        slope,
        slope_stderr,
        decaying,
        xi,
        xi_interval,
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: impl Fn(f64) -> f64) -> Vec<DecayPoint> {
        [2.0, 4.0, 6.0, 8.0, 10.0]
            .iter()
            .map(|&r| DecayPoint {
                distance: r,
                moment: f(r),
                stderr: 0.0,
            })
            .collect()
    }

    #[test]
    fn synthetic_exponential() {
        let f = correlation_length_fit(&pts(|r| (-r / 10.0).exp()), 1.0).unwrap();
        assert!((f.xi.unwrap() - 10.0).abs() < 0.1);
        let f = correlation_length_fit(&pts(|r| 2.0 * (-0.3 * r / 10.0).exp()), 0.3).unwrap();
        assert!((f.xi.unwrap() - 10.0).abs() < 0.1);
    }

    #[test]
    fn flat_data_reports_no_decay() {
        let f = correlation_length_fit(&pts(|r| 1.0 + 0.01 * r), 0.3).unwrap();
        assert!(!f.decaying && f.xi.is_none());
    }

    #[test]
    fn rejects_narrow_range() {
        let p: Vec<DecayPoint> = [5.0, 6.0, 7.0, 8.0]
            .iter()
            .map(|&r| DecayPoint {
                distance: r,
                moment: 1.0,
                stderr: 0.0,
            })
            .collect();
        assert!(correlation_length_fit(&p, 0.3).is_err());
    }
}
