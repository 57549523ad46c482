use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{
    condition_matrix, device_order, fit_learning_curve, rm_anova, summarize, AnovaResult,
    ExperimentError, Factor, FitModel, FitResult, GroupBy, GroupSummary, Metric, StoredTrial,
};

/// Number of future blocks each trend line is projected over.
pub const PROJECTED_BLOCKS: u32 = 5;

const FITTED: [Metric; 2] = [Metric::Wpm, Metric::Efficiency];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMean {
    pub device: String,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceAnova {
    pub metric: String,
    pub effect: String,
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceR2 {
    pub device: String,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceKspc {
    pub h4: f64,
    pub edgewrite: f64,
}

/// Human-study numbers, displayed beside simulated data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub description: String,
    pub entry_speed_wpm: Vec<ReferenceMean>,
    pub anova: Vec<ReferenceAnova>,
    pub wpm_trend_r_squared: Vec<ReferenceR2>,
    pub kspc_observed: Vec<f64>,
    pub kspc_theoretical: ReferenceKspc,
}

impl Reference {
    pub fn builtin() -> Reference {
        serde_json::from_str(include_str!("../../data/reference.json"))
            .expect("bundled reference.json is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaLine {
    pub metric: Metric,
    pub factor: Factor,
    pub result: Option<AnovaResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitLine {
    pub device: String,
    pub metric: Metric,
    pub fit: Option<FitResult>,
    pub model: FitModel,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub device: String,
    pub metric: Metric,
    pub model: FitModel,
    pub block: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub trials: usize,
    pub by_device: Vec<GroupSummary>,
    pub by_block: Vec<GroupSummary>,
    pub by_device_block: Vec<GroupSummary>,
    pub anova: Vec<AnovaLine>,
    pub fits: Vec<FitLine>,
    pub projections: Vec<Projection>,
    pub reference: Reference,
}

pub fn report(trials: &[StoredTrial]) -> Result<Report, ExperimentError> {
    let by_device = summarize(trials, GroupBy::Device)?;
    let by_block = summarize(trials, GroupBy::Block)?;
    let by_device_block = summarize(trials, GroupBy::DeviceBlock)?;

    let mut anova = Vec::new();
    for metric in Metric::ALL {
        for factor in [Factor::Device, Factor::Block] {
            let outcome = condition_matrix(trials, metric, factor)
                .and_then(|(_, m)| rm_anova(&format!("{factor:?}").to_lowercase(), &m));
            let (result, error) = match outcome {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            anova.push(AnovaLine {
                metric,
                factor,
                result,
                error,
            });
        }
    }

    let last_block = by_block.iter().filter_map(|g| g.block).max().unwrap_or(0);
    let mut fits = Vec::new();
    let mut projections = Vec::new();
    for device in device_order(trials) {
        for metric in FITTED {
            let points: Vec<(f64, f64)> = by_device_block
                .iter()
                .filter(|g| g.device.as_deref() == Some(device.as_str()))
                .filter_map(|g| Some((g.block? as f64, g.stats.get(&metric)?.mean)))
                .collect();
            for model in [FitModel::Linear, FitModel::Power] {
                match fit_learning_curve(&points, model) {
                    Ok(fit) => {
                        for block in last_block + 1..=last_block + PROJECTED_BLOCKS {
                            projections.push(Projection {
                                device: device.clone(),
                                metric,
                                model,
                                block,
                                value: fit.predict(block as f64),
                            });
                        }
                        fits.push(FitLine {
                            device: device.clone(),
                            metric,
                            fit: Some(fit),
                            model,
                            error: None,
                        });
                    }
                    Err(e) => fits.push(FitLine {
                        device: device.clone(),
                        metric,
                        fit: None,
                        model,
                        error: Some(e.to_string()),
                    }),
                }
            }
        }
    }

    Ok(Report {
        trials: trials.len(),
        by_device,
        by_block,
        by_device_block,
        anova,
        fits,
        projections,
        reference: Reference::builtin(),
    })
}

fn cell(g: &GroupSummary, metric: Metric) -> String {
    match g.stats.get(&metric) {
        None => format!("{:>16}", "-"),
        Some(s) => match s.sd {
            Some(sd) => format!("{:>8.2} ({:>5.2})", s.mean, sd),
            None => format!("{:>8.2} (    -)", s.mean),
        },
    }
}

fn table(out: &mut String, title: &str, groups: &[GroupSummary]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "{:<14}{:>6}{:>18}{:>18}{:>18}{:>18}",
        "group", "n", "wpm (sd)", "efficiency (sd)", "kspc (sd)", "error % (sd)"
    );
    for g in groups {
        let label = match (&g.device, g.block) {
            (Some(d), Some(b)) => format!("{d} b{b}"),
            (Some(d), None) => d.clone(),
            (None, Some(b)) => format!("block {b}"),
            (None, None) => "all".into(),
        };
        let _ = write!(out, "{label:<14}{:>6}", g.trials);
        for metric in Metric::ALL {
            let _ = write!(out, "  {}", cell(g, metric));
        }
        out.push('\n');
    }
    out.push('\n');
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "trials: {}\n", self.trials);
        table(&mut out, "by device", &self.by_device);
        table(&mut out, "by block", &self.by_block);
        table(&mut out, "by device and block", &self.by_device_block);

        let _ = writeln!(out, "repeated-measures ANOVA");
        for line in &self.anova {
            let label = format!("{} ~ {}", line.metric.label(), format!("{:?}", line.factor).to_lowercase());
            match (&line.result, &line.error) {
                (Some(r), _) if r.zero_error_variance => {
                    let _ = writeln!(out, "  {label:<24} F({},{}) = inf, p = 0 (zero error variance)", r.df1, r.df2);
                }
                (Some(r), _) => {
                    let _ = writeln!(out, "  {label:<24} F({},{}) = {:.3}, p = {:.4}", r.df1, r.df2, r.f, r.p);
                }
                (None, Some(e)) => {
                    let _ = writeln!(out, "  {label:<24} n/a ({e})");
                }
                (None, None) => {}
            }
        }
        out.push('\n');

        let _ = writeln!(out, "learning curves (fitted on block means)");
        for f in &self.fits {
            let label = format!("{} {} {}", f.device, f.metric.label(), format!("{:?}", f.model).to_lowercase());
            match (&f.fit, &f.error) {
                (Some(fit), _) => {
                    let eq = match fit.model {
                        FitModel::Linear => format!("y = {:.4} + {:.4}x", fit.a, fit.b),
                        FitModel::Power => format!("y = {:.4}x^{:.4}", fit.a, fit.b),
                    };
                    let _ = writeln!(out, "  {label:<32} {eq:<28} R^2 = {:.4}", fit.r_squared);
                }
                (None, Some(e)) => {
                    let _ = writeln!(out, "  {label:<32} n/a ({e})");
                }
                (None, None) => {}
            }
        }
        out.push('\n');

        if !self.projections.is_empty() {
            let _ = writeln!(out, "projections (power model)");
            for p in self.projections.iter().filter(|p| p.model == FitModel::Power) {
                let _ = writeln!(out, "  {:<14}{:<12} block {:>2}: {:>8.2}", p.device, p.metric.label(), p.block, p.value);
            }
            out.push('\n');
        }

        let r = &self.reference;
        let _ = writeln!(out, "reference: {}", r.description);
        for m in &r.entry_speed_wpm {
            let _ = writeln!(out, "  {:<14}{:>6.2} wpm (sd {:.2})", m.device, m.mean, m.sd);
        }
        for a in &r.anova {
            let _ = writeln!(out, "  {:<24} F({},{}) = {}", format!("{} ~ {}", a.metric, a.effect), a.df1, a.df2, a.f);
        }
        for t in &r.wpm_trend_r_squared {
            let _ = writeln!(out, "  {:<14}wpm trend R^2 = {}", t.device, t.r_squared);
        }
        let observed: Vec<String> = r.kspc_observed.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(
            out,
            "  observed KSPC {}; theoretical KSPC {} (EdgeWrite {})",
            observed.join(" / "),
            r.kspc_theoretical.h4,
            r.kspc_theoretical.edgewrite
        );
        out
    }

    /// Plot-ready rows: observed block means and both trend lines over the
    /// observed and projected blocks.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("device,metric,series,block,value\n");
        for g in &self.by_device_block {
            let (Some(device), Some(block)) = (&g.device, g.block) else { continue };
            for metric in FITTED {
                if let Some(s) = g.stats.get(&metric) {
                    let _ = writeln!(out, "{device},{},observed,{block},{}", metric.label(), s.mean);
                }
            }
        }
        let last = self.by_block.iter().filter_map(|g| g.block).max().unwrap_or(0);
        for f in &self.fits {
            let Some(fit) = &f.fit else { continue };
            let series = format!("{:?}", f.model).to_lowercase();
            for block in 1..=last + PROJECTED_BLOCKS {
                let _ = writeln!(
                    out,
                    "{},{},{series},{block},{}",
                    f.device,
                    f.metric.label(),
                    fit.predict(block as f64)
                );
            }
        }
        out
    }
}
