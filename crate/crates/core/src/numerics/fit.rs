use serde::{Deserialize, Serialize};

/// Least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: Option<f64>,
    pub slope: Option<f64>,
    pub residuals: Vec<f64>,
}

/// Fits a line. With fewer than two distinct abscissae the fit is degenerate
/// and both coefficients are `None`; residuals are then zero.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let distinct = xs.iter().any(|x| (x - xs[0]).abs() > 0.0);
    if xs.len() < 2 || !distinct {
        return LineFit {
            intercept: None,
            slope: None,
            residuals: vec![0.0; xs.len()],
        };
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx = xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let sxy = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    LineFit {
        intercept: Some(intercept),
        slope: Some(slope),
        residuals,
    }
}
