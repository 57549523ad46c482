//! One-way repeated-measures ANOVA and the F distribution.

use serde::{Deserialize, Serialize};

use super::ExperimentError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub effect: String,
    /// `f64::INFINITY` when the error term vanishes (see `zero_error_variance`).
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
    pub p: f64,
    pub ss_effect: f64,
    pub ss_subjects: f64,
    pub ss_error: f64,
    pub zero_error_variance: bool,
}

/// Repeated-measures ANOVA over a participant × condition matrix
/// (`values[participant][condition]`).
pub fn rm_anova(effect: &str, values: &[Vec<f64>]) -> Result<AnovaResult, ExperimentError> {
    let n = values.len();
    let k = values.first().map_or(0, Vec::len);
    if n < 2 || k < 2 {
        return Err(ExperimentError::Anova(format!(
            "need at least 2 participants and 2 conditions, got {n} x {k}"
        )));
    }
    if let Some((i, row)) = values.iter().enumerate().find(|(_, r)| r.len() != k) {
        return Err(ExperimentError::Anova(format!(
            "participant {i} has {} conditions, expected {k}",
            row.len()
        )));
    }
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ExperimentError::Anova("matrix has non-finite cells".into()));
    }

    let nf = n as f64;
    let kf = k as f64;
    let grand = values.iter().flatten().sum::<f64>() / (nf * kf);
    let row_means: Vec<f64> = values.iter().map(|r| r.iter().sum::<f64>() / kf).collect();
    let col_means: Vec<f64> = (0..k)
        .map(|j| values.iter().map(|r| r[j]).sum::<f64>() / nf)
        .collect();

    let ss_effect = nf * col_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ss_subjects = kf * row_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let mut ss_error = 0.0;
    let mut ss_total = 0.0;
    for (i, row) in values.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            ss_error += (x - row_means[i] - col_means[j] + grand).powi(2);
            ss_total += (x - grand).powi(2);
        }
    }

    let df1 = k - 1;
    let df2 = (k - 1) * (n - 1);
    // rounding leaves ~1e-30 residue on matrices that are exactly additive
    let scale = ss_total.max(grand * grand * nf * kf);
    let tiny = 1e-24 * scale.max(f64::MIN_POSITIVE);
    if ss_error <= tiny {
        if ss_effect <= tiny {
            return Err(ExperimentError::Anova(
                "no variance between conditions or within the error term".into(),
            ));
        }
        return Ok(AnovaResult {
            effect: effect.to_string(),
            f: f64::INFINITY,
            df1,
            df2,
            p: 0.0,
            ss_effect,
            ss_subjects,
            ss_error,
            zero_error_variance: true,
        });
    }
    let f = (ss_effect / df1 as f64) / (ss_error / df2 as f64);
    Ok(AnovaResult {
        effect: effect.to_string(),
        f,
        df1,
        df2,
        p: f_upper_tail(f, df1 as f64, df2 as f64),
        ss_effect,
        ss_subjects,
        ss_error,
        zero_error_variance: false,
    })
}

/// P(X > f) for X ~ F(d1, d2).
pub fn f_upper_tail(f: f64, d1: f64, d2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    regularized_incomplete_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0)
}

/// P(X <= f) for X ~ F(d1, d2).
pub fn f_cdf(f: f64, d1: f64, d2: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    regularized_incomplete_beta(d1 * f / (d1 * f + d2), d1 / 2.0, d2 / 2.0)
}

/// Lanczos approximation (g = 7, 9 terms), |relative error| < 1e-15 for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// I_x(a, b) by the continued fraction of the incomplete beta function,
/// evaluated with the modified Lentz method. Uses the symmetry
/// I_x(a, b) = 1 - I_{1-x}(b, a) to stay in the fast-converging region.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(1.0 - x, b, a) / b
    }
}

fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
