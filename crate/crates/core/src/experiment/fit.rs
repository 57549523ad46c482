//! Learning-curve regression.

use serde::{Deserialize, Serialize};

use super::ExperimentError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    /// y = a + b·x
    Linear,
    /// y = a·x^b, fitted as a line in log-log space
    Power,
}

impl std::str::FromStr for FitModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(FitModel::Linear),
            "power" => Ok(FitModel::Power),
            _ => Err(format!("unknown fit model {s:?} (linear|power)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Intercept for linear, scale for power.
    pub a: f64,
    /// Slope for linear, exponent for power.
    pub b: f64,
    /// Coefficient of determination in the fitting space.
    pub r_squared: f64,
    pub n: usize,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::Linear => self.a + self.b * x,
            FitModel::Power => self.a * x.powf(self.b),
        }
    }
}

pub fn fit_learning_curve(points: &[(f64, f64)], model: FitModel) -> Result<FitResult, ExperimentError> {
    let transformed: Vec<(f64, f64)> = match model {
        FitModel::Linear => points.to_vec(),
        FitModel::Power => points
            .iter()
            .map(|&(x, y)| {
                if x <= 0.0 || y <= 0.0 {
                    Err(ExperimentError::Fit(format!(
                        "power model needs positive values, got ({x}, {y})"
                    )))
                } else {
                    Ok((x.ln(), y.ln()))
                }
            })
            .collect::<Result<_, _>>()?,
    };
    let (intercept, slope, r_squared) = least_squares(&transformed)?;
    let a = match model {
        FitModel::Linear => intercept,
        FitModel::Power => intercept.exp(),
    };
    Ok(FitResult {
        model,
        a,
        b: slope,
        r_squared,
        n: points.len(),
    })
}

fn least_squares(points: &[(f64, f64)]) -> Result<(f64, f64, f64), ExperimentError> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(ExperimentError::Fit("need at least 2 points".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Fit("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r_squared = if ss_res == 0.0 {
        1.0
    } else if ss_tot == 0.0 {
        0.0
    } else {
        (1.0 - ss_res / ss_tot).min(1.0)
    };
    Ok((intercept, slope, r_squared))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_have_unit_r_squared() {
        let fit = fit_learning_curve(&[(1.0, 3.0), (2.0, 5.0), (3.0, 7.0)], FitModel::Linear).unwrap();
        assert_eq!(fit.r_squared, 1.0);
        assert_eq!((fit.a, fit.b), (1.0, 2.0));
        assert_eq!(fit.predict(8.0), 17.0);
    }

    #[test]
    fn power_fit_recovers_parameters() {
        let points: Vec<(f64, f64)> = (1..=6).map(|b| (b as f64, 2.0 * (b as f64).powf(0.3))).collect();
        let fit = fit_learning_curve(&points, FitModel::Power).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-9);
        assert!((fit.b - 0.3).abs() < 1e-9);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!((fit.predict(8.0) - 2.0 * 8f64.powf(0.3)).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs_error() {
        assert!(fit_learning_curve(&[(1.0, 2.0), (1.0, 3.0)], FitModel::Linear).is_err());
        assert!(fit_learning_curve(&[(1.0, 2.0)], FitModel::Linear).is_err());
        assert!(fit_learning_curve(&[(1.0, 2.0), (2.0, 0.0)], FitModel::Power).is_err());
        assert!(fit_learning_curve(&[(0.0, 2.0), (2.0, 1.0)], FitModel::Power).is_err());
    }

    #[test]
    fn constant_series_is_a_perfect_flat_fit() {
        let fit = fit_learning_curve(&[(1.0, 4.0), (2.0, 4.0), (3.0, 4.0)], FitModel::Linear).unwrap();
        assert_eq!(fit.b, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }
}
